#include "birkhoff/dynamics.hpp"

#include "birkhoff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace birkhoff {
namespace {

// Tsitouras 5(4) tableau.
constexpr double a21 = 0.161;
constexpr double a31 = -0.008480655492356989, a32 = 0.335480655492357;
constexpr double a41 = 2.897153057105493, a42 = -6.359448489975075, a43 = 4.3622954328695815;
constexpr double a51 = 5.325864828439257, a52 = -11.748883564062828, a53 = 7.4955393428898365,
                 a54 = -0.09249506636175525;
constexpr double a61 = 5.86145544294642, a62 = -12.92096931784711, a63 = 8.159367898576159,
                 a64 = -0.071584973281401, a65 = -0.028269050394068383;
constexpr double a71 = 0.09646076681806523, a72 = 0.01, a73 = 0.4798896504144996,
                 a74 = 1.379008574103742, a75 = -3.290069515436081, a76 = 2.324710524099774;
// Difference between the fifth- and fourth-order weights.
constexpr double e1 = -0.00178001105222577714, e2 = -0.0008164344596567469,
                 e3 = 0.007880878010261995, e4 = -0.1447110071732629, e5 = 0.5823571654525552,
                 e6 = -0.45808210592918697, e7 = 1.0 / 66;

void check_signs(const Eigen::VectorXd& x, double t, const SignConstraint& c, Trajectory& traj) {
  for (int i = c.begin; i < c.begin + c.count; ++i) {
    if (c.sign * x[i] < -1e-12) {
      std::ostringstream os;
      os << "sign loss in coordinate " << i + 1 << " at t = " << t << " (value " << x[i] << ")";
      traj.warnings.push_back(os.str());
    }
  }
}

void record(Trajectory& traj, double t, const Eigen::VectorXd& x) {
  traj.times.push_back(t);
  traj.states.push_back(x);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  if (!(initial_step > 0.0)) throw ConfigError("initial_step", "must be positive");
  if (max_steps <= 0) throw ConfigError("max_steps", "must be positive");
  if (sample_stride <= 0) throw ConfigError("sample_stride", "must be positive");
  if (method == Method::adaptive_rk) {
    if (!(rtol > 0.0 && rtol <= 1e-2)) throw ConfigError("rtol", "must lie in (0, 1e-2]");
    if (!(atol > 0.0 && atol <= 1e-2)) throw ConfigError("atol", "must lie in (0, 1e-2]");
  }
}

Trajectory integrate_flaschka(const VectorField& field, const Eigen::VectorXd& x0,
                              const IntegratorConfig& cfg, SignConstraint constraint) {
  cfg.validate();
  if (cfg.method != Method::adaptive_rk) {
    throw ConfigError("method", "integrate_flaschka needs the adaptive-rk method");
  }
  Trajectory traj;
  record(traj, 0.0, x0);

  Eigen::VectorXd x = x0;
  double t = 0.0;
  double h = std::min(cfg.initial_step, cfg.t_end);
  Eigen::VectorXd k1 = field(x);
  long attempts = 0;
  long since_sample = 0;
  bool last_rejected = false;

  while (t < cfg.t_end) {
    if (++attempts > cfg.max_steps) {
      throw IntegrationError("step budget exhausted at t = " + std::to_string(t), std::move(traj));
    }
    if (h < 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      if (traj.times.back() != t) record(traj, t, x);
      throw IntegrationError("step size underflow at t = " + std::to_string(t), std::move(traj));
    }
    const bool final_step = t + h >= cfg.t_end;
    if (final_step) h = cfg.t_end - t;

    const Eigen::VectorXd k2 = field(x + h * (a21 * k1));
    const Eigen::VectorXd k3 = field(x + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = field(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = field(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        field(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd x_new =
        x + h * (a71 * k1 + a72 * k2 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Eigen::VectorXd k7 = field(x_new);
    const Eigen::VectorXd err = h * (e1 * k1 + e2 * k2 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const Eigen::ArrayXd scale =
        cfg.atol + cfg.rtol * x.cwiseAbs().cwiseMax(x_new.cwiseAbs()).array();
    const double err_norm = (err.array() / scale).abs().maxCoeff();

    if (err_norm <= 1.0) {
      t = final_step ? cfg.t_end : t + h;
      x = x_new;
      k1 = k7;
      ++traj.accepted;
      check_signs(x, t, constraint, traj);
      if (++since_sample == cfg.sample_stride || t >= cfg.t_end) {
        record(traj, t, x);
        since_sample = 0;
      }
      double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
      h *= factor;
      last_rejected = false;
    } else {
      ++traj.rejected;
      const double factor =
          std::isfinite(err_norm) ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0) : 0.2;
      h *= factor;
      last_rejected = true;
    }
  }
  return traj;
}

Trajectory integrate_canonical(const VectorField& force, const Eigen::VectorXd& q0,
                               const Eigen::VectorXd& p0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (cfg.method != Method::leapfrog) {
    throw ConfigError("method", "integrate_canonical needs the leapfrog method");
  }
  require_size(p0.size(), q0.size(), "integrate_canonical p0");
  const auto n = q0.size();
  const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.initial_step - 1e-9));
  if (steps > cfg.max_steps) throw ConfigError("max_steps", "smaller than t_end / initial_step");
  const double h = cfg.t_end / static_cast<double>(steps);

  auto stack = [n](const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
    Eigen::VectorXd s(2 * n);
    s << q, p;
    return s;
  };

  Trajectory traj;
  Eigen::VectorXd q = q0;
  Eigen::VectorXd p = p0;
  record(traj, 0.0, stack(q, p));
  Eigen::VectorXd f = force(q);
  for (long k = 1; k <= steps; ++k) {
    p += 0.5 * h * f;
    q += h * p;
    f = force(q);
    p += 0.5 * h * f;
    ++traj.accepted;
    if (k % cfg.sample_stride == 0 || k == steps) {
      record(traj, k == steps ? cfg.t_end : static_cast<double>(k) * h, stack(q, p));
    }
  }
  return traj;
}

void attach_invariants(Trajectory& traj, const std::vector<NamedInvariant>& invariants) {
  for (const auto& inv : invariants) {
    std::vector<double> series;
    series.reserve(traj.states.size());
    for (const auto& x : traj.states) series.push_back(inv.eval(x));
    traj.invariant_series.emplace_back(inv.name, std::move(series));
  }
}

std::vector<DriftEntry> drift_report(const Trajectory& traj,
                                     const std::vector<NamedInvariant>& invariants) {
  std::vector<DriftEntry> out;
  if (traj.states.empty()) return out;
  for (const auto& inv : invariants) {
    DriftEntry e;
    e.name = inv.name;
    e.initial = inv.eval(traj.states.front());
    const double denom = std::max(1.0, std::abs(e.initial));
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const double d = std::abs(inv.eval(traj.states[k]) - e.initial) / denom;
      if (d > e.max_relative_drift) {
        e.max_relative_drift = d;
        e.time_of_max = traj.times[k];
      }
    }
    out.push_back(e);
  }
  return out;
}

EigenDrift eigenvalue_drift(const Trajectory& traj,
                            const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& builder) {
  EigenDrift out;
  Eigen::VectorXd initial;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Eigen::MatrixXcd m = builder(traj.states[k]);
    const double asym = (m - m.adjoint()).norm();
    if (asym > 1e-8) {
      throw DiagnosticError("eigenvalue_drift: matrix at t = " + std::to_string(traj.times[k]) +
                            " is not Hermitian (|M - M*| = " + std::to_string(asym) + ")");
    }
    // SelfAdjointEigenSolver returns ascending eigenvalues.
    const Eigen::VectorXd lambda =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues();
    if (k == 0) {
      initial = lambda;
      continue;
    }
    const double d = (lambda - initial).cwiseAbs().maxCoeff();
    if (d > out.max_drift) {
      out.max_drift = d;
      out.time_of_max = traj.times[k];
    }
  }
  return out;
}

}  // namespace birkhoff

namespace birkhoff {

double pullback_residual(const VectorField& transform, const VectorField& canonical,
                         const VectorField& target_field, const Eigen::VectorXd& z, double step) {
  const Eigen::VectorXd dz = canonical(z);
  const Eigen::VectorXd fd = (transform(z + step * dz) - transform(z - step * dz)) / (2.0 * step);
  const Eigen::VectorXd exact = target_field(transform(z));
  return (fd - exact).cwiseAbs().maxCoeff() / (1.0 + exact.cwiseAbs().maxCoeff());
}

VectorField canonical_field(VectorField force) {
  return [force = std::move(force)](const Eigen::VectorXd& z) {
    const Eigen::Index n = z.size() / 2;
    Eigen::VectorXd dz(z.size());
    dz << z.tail(n), force(z.head(n));
    return dz;
  };
}

}  // namespace birkhoff
