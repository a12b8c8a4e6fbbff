// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include "../unit/oracles.hpp"

#include "birkhoff/cli.hpp"
#include "birkhoff/dn_toda.hpp"
#include "birkhoff/dynamics.hpp"
#include "birkhoff/kt_system.hpp"
#include "birkhoff/poisson.hpp"
#include "birkhoff/random.hpp"
#include "birkhoff/sampling.hpp"
#include "birkhoff/spectrum.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace birkhoff;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

template <typename F>
void criterion(int id, const char* title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.pass) ++failures;
  std::printf("%s  %2d  %-28s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", id, title, r.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const VectorField kt_field = [](const Eigen::VectorXd& x) {
  return kt_vector_field(KtFlaschkaPoint::unpack(x)).packed();
};

ScalarField kt_integral(int i) {
  return ScalarField{"h",
                     [i](const Eigen::VectorXd& x) { return kt_integrals(KtFlaschkaPoint::unpack(x))[i]; },
                     [i](const Eigen::VectorXd& x) {
                       return Eigen::VectorXd(kt_integral_gradients(KtFlaschkaPoint::unpack(x)).row(i).transpose());
                     }};
}

Outcome lax_identity() {
  Pcg64 rng(101);
  double worst = 0.0;
  for (int n = 4; n <= 6; ++n) {
    for (int k = 0; k < 50; ++k) {
      const auto x = random_kt_point(rng, n);
      worst = std::max(worst, kt_lax_residual(x) / (1.0 + build_A(x).norm()));
    }
  }
  return {worst <= 1e-12, fmt("max residual/(1+|A|_F) = %.3g (tol %.0e)", worst, 1e-12)};
}

Outcome conservation() {
  Pcg64 rng(102);
  IntegratorConfig cfg;
  cfg.t_end = 50.0;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  double drift = 0.0, eig = 0.0;
  for (int n = 4; n <= 6; ++n) {
    std::vector<NamedInvariant> inv;
    for (int i = 0; i < n; ++i) {
      inv.push_back({"h", [i](const Eigen::VectorXd& x) { return kt_integrals(KtFlaschkaPoint::unpack(x))[i]; }});
    }
    for (int k = 0; k < 20; ++k) {
      const KtFlaschkaPoint x0(draw_positive(rng, n + 1, 0.0, 1.5), draw_uniform(rng, n, -1.5, 1.5));
      const auto traj = integrate_flaschka(kt_field, x0.packed(), cfg, {0, n + 1, 1.0});
      for (const auto& d : drift_report(traj, inv)) drift = std::max(drift, d.max_relative_drift);
      eig = std::max(eig, eigenvalue_drift(traj, [](const Eigen::VectorXd& x) {
                            return build_A(KtFlaschkaPoint::unpack(x));
                          }).max_drift);
    }
  }
  return {drift <= 1e-8 && eig <= 1e-8,
          fmt("max relative h drift = %.3g, max eigenvalue drift = %.3g (tol 1e-8)", drift, eig)};
}

Outcome involution() {
  Pcg64 rng(103);
  double worst = 0.0;
  for (int n = 4; n <= 5; ++n) {
    const auto w1 = BracketStructure::w1(n);
    std::vector<ScalarField> hs;
    for (int i = 0; i < n; ++i) hs.push_back(kt_integral(i));
    for (int k = 0; k < 100; ++k) {
      worst = std::max(worst, involution_matrix(w1, hs, random_kt_point(rng, n).packed()).max_scaled);
    }
  }
  return {worst <= 1e-10, fmt("max scaled {h_i,h_j} = %.3g (tol %.0e)", worst, 1e-10)};
}

Outcome independence() {
  Pcg64 rng(104);
  double worst_fraction = 1.0;
  for (int n = 4; n <= 6; ++n) {
    int full = 0;
    for (int k = 0; k < 100; ++k) full += kt_independence_rank(random_kt_point(rng, n)) == n;
    worst_fraction = std::min(worst_fraction, full / 100.0);
  }
  double power = 0.0;
  for (int n = 4; n <= 6; ++n) {
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd b = draw_uniform(rng, n, -1.5, 1.5);
      const auto h = kt_integrals(KtFlaschkaPoint(Eigen::VectorXd::Zero(n + 1), b));
      for (int i = 1; i <= n; ++i) {
        const double ref = b.array().pow(2 * i).sum();
        power = std::max(power, std::abs(h[i - 1] - ref) / std::max(1.0, ref));
      }
    }
  }
  return {worst_fraction >= 0.95 && power <= 1e-14,
          fmt("min full-rank fraction = %.2f (need 0.95); a=0 power-sum error = %.3g", worst_fraction, power)};
}

Outcome explicit_formulas() {
  Pcg64 rng(105);
  double h4 = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto x = random_kt_point(rng, 4);
    const double ref = oracle::kt4_h4(x.a, x.b);
    h4 = std::max(h4, std::abs(kt_integrals(x)[1] - ref) / std::abs(ref));
  }
  double l2 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto x = random_dn_point(rng, 4);
    const Eigen::MatrixXd ref = oracle::d4_L2(x.a, x.b);
    const Eigen::MatrixXd got = build_L2(x);
    l2 = std::max(l2, ((got - ref).array().abs() / (1.0 + ref.array().abs())).maxCoeff());
    l2 = std::max(l2, (build_B(x) - oracle::d4_B(x.a)).cwiseAbs().maxCoeff());
  }
  return {h4 <= 1e-10 && l2 <= 1e-14, fmt("h_4 relative error = %.3g (tol 1e-10), D4 L^2/B entry error = %.3g", h4, l2)};
}

Outcome bracket_consistency() {
  Pcg64 rng(106);
  double dn = 0.0, kt = 0.0;
  for (int n = 4; n <= 6; ++n) {
    const auto pi1 = BracketStructure::pi1(n);
    const auto w1 = BracketStructure::w1(n);
    const ScalarField H2{"H_2", [](const Eigen::VectorXd& x) { return dn_invariants(build_L(DnFlaschkaPoint::unpack(x)))[0]; },
                         [n](const Eigen::VectorXd& x) {
                           Eigen::VectorXd g(2 * n);
                           g << 4 * x.head(n), 2 * x.tail(n);
                           return g;
                         }};
    const ScalarField h2{"h_2", [](const Eigen::VectorXd& x) { return kt_hamiltonian_flaschka(KtFlaschkaPoint::unpack(x)); },
                         [n](const Eigen::VectorXd& x) {
                           Eigen::VectorXd g(2 * n + 1);
                           const double c = x[n];
                           g << 4 * x.head(n), 2 * c + 8 * c * c * c, 2 * x.tail(n);
                           return g;
                         }};
    for (int k = 0; k < 50; ++k) {
      const auto d = random_dn_point(rng, n);
      const Eigen::VectorXd ref_d = dn_vector_field(d).packed();
      dn = std::max(dn, (hamiltonian_vector_field(pi1, H2, d.packed()) - ref_d).cwiseAbs().maxCoeff() /
                            (1.0 + ref_d.cwiseAbs().maxCoeff()));
      const auto x = random_kt_point(rng, n);
      const Eigen::VectorXd ref_k = kt_vector_field(x).packed();
      kt = std::max(kt, (hamiltonian_vector_field(w1, h2, x.packed()) - ref_k).cwiseAbs().maxCoeff() /
                            (1.0 + ref_k.cwiseAbs().maxCoeff()));
    }
  }
  return {dn <= 1e-12 && kt <= 1e-12, fmt("pi1 grad H_2 residual = %.3g, w1 grad h_2 residual = %.3g (tol 1e-12)", dn, kt)};
}

Outcome transform_coherence() {
  Pcg64 rng(107);
  double half = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 4 + k % 3;
    const Eigen::VectorXd z = random_canonical_point(rng, n);
    const double H = oracle::kt_hamiltonian(z.head(n), z.tail(n));
    half = std::max(half, std::abs(kt_hamiltonian_flaschka(kt_flaschka(z.head(n), z.tail(n))) - 0.5 * H) /
                              std::max(1.0, std::abs(H)));
  }
  IntegratorConfig rk;
  rk.t_end = 5.0;
  IntegratorConfig lf;
  lf.method = Method::leapfrog;
  lf.t_end = 5.0;
  lf.initial_step = 1e-4;
  double route = 0.0;
  for (int n = 4; n <= 6; ++n) {
    const Eigen::VectorXd z = random_canonical_point(rng, n);
    const auto a = integrate_canonical([](const Eigen::VectorXd& q) { return kt_force(q); }, z.head(n), z.tail(n), lf);
    const Eigen::VectorXd zt = a.states.back();
    const auto b = integrate_flaschka(kt_field, kt_flaschka(z.head(n), z.tail(n)).packed(), rk);
    route = std::max(route, (kt_flaschka(zt.head(n), zt.tail(n)).packed() - b.states.back()).cwiseAbs().maxCoeff());
  }
  return {half <= 1e-12 && route <= 1e-5,
          fmt("h_2 - H/2 relative = %.3g (tol 1e-12), two-route gap at t=5 = %.3g (tol 1e-5)", half, route)};
}

Outcome classification() {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "birkhoff_acceptance_classify";
  fs::create_directories(out);
  std::ostringstream sink, errs;
  bool ok = true;
  std::string note;
  for (int n = 4; n <= 7; ++n) {
    RunConfig cfg;
    cfg.system = SystemKind::kt;
    cfg.n = n;
    cfg.output_dir = out;
    const int code = cmd_classify(cfg, sink, errs);
    std::ifstream in(out / "classify_report.json");
    const auto r = nlohmann::json::parse(in);
    std::vector<double> w = r["diagram"]["weights"];
    std::sort(w.begin(), w.end());
    std::vector<double> expect(static_cast<std::size_t>(n), 2.0);
    expect.insert(expect.begin(), 1.0);
    expect.push_back(4.0);
    int quadruple = 0;
    for (const auto& e : r["diagram"]["edges"]) quadruple += e[2] == 4;
    if (code != 0 || w != expect || quadruple != 1) {
      ok = false;
      note += " n=" + std::to_string(n) + " mismatch;";
    }
  }
  RunConfig bad;
  bad.system = SystemKind::custom_spectrum;
  bad.spectrum = parse_spectrum_rows("[[1,0],[0,1],[1,1]]");
  bad.n = 2;
  bad.output_dir = out;
  const int code = cmd_classify(bad, sink, errs);
  std::ifstream in(out / "classify_report.json");
  const auto r = nlohmann::json::parse(in);
  bool ratio_one = false;
  for (const auto& x : r["ratios"]) ratio_one = ratio_one || (x["i"] == 3 && x["pass"] == false && x["ratio"] == 1.0);
  if (code != 2 || !ratio_one) {
    ok = false;
    note += " counterexample not rejected with ratio 1;";
  }
  fs::remove_all(out);
  return {ok, "kt_spectrum n=4..7 weights {1,2..2,4} + 4-fold edge, counterexample exit 2 with ratio 1" + note};
}

Outcome reduction() {
  Pcg64 rng(109);
  double worst = 0.0;
  for (int n = 4; n <= 6; ++n) {
    for (int k = 0; k < 50; ++k) {
      auto x = random_kt_point(rng, n);
      x.a[n] = 0.0;
      const auto d = x.dn_part();
      const Eigen::MatrixXd L2 = build_L2(d);
      worst = std::max(worst, (build_A(x) - L2.cast<cd>()).cwiseAbs().maxCoeff());
      worst = std::max(worst, (build_C(x) - build_B(d).cast<cd>()).cwiseAbs().maxCoeff());
      const auto v = kt_vector_field(x);
      const auto w = dn_vector_field(d);
      worst = std::max(worst, (v.a.head(n) - w.a).cwiseAbs().maxCoeff());
      worst = std::max(worst, (v.b - w.b).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(v.a[n]));
      const auto h = kt_integrals(x);
      Eigen::MatrixXd P = L2;
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(h[i] - 0.5 * P.trace()) / std::max(1.0, std::abs(h[i])));
        P = P * L2;
      }
    }
  }
  return {worst <= 1e-14, fmt("max entrywise difference = %.3g (tol %.0e)", worst, 1e-14)};
}

Outcome literal_fault() {
  Pcg64 rng(110);
  double least = INFINITY;
  for (int n = 4; n <= 6; ++n) {
    for (int k = 0; k < 50; ++k) {
      const auto x = random_kt_point(rng, n);
      least = std::min(least, kt_lax_residual(x, EqgenVariant::paper_literal));
    }
  }
  return {least > 1e-3, fmt("min literal-variant residual = %.3g (must exceed %.0e)", least, 1e-3)};
}

}  // namespace

int main() {
  criterion(1, "Lax identity", lax_identity);
  criterion(2, "Conservation", conservation);
  criterion(3, "Involution", involution);
  criterion(4, "Independence", independence);
  criterion(5, "Explicit-formula regression", explicit_formulas);
  criterion(6, "Bracket consistency", bracket_consistency);
  criterion(7, "Transform coherence", transform_coherence);
  criterion(8, "Classification", classification);
  criterion(9, "Reduction", reduction);
  criterion(10, "Deliberate-fault falsifiability", literal_fault);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
