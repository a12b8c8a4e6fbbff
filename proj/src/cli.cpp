#include "birkhoff/cli.hpp"

#include "birkhoff/errors.hpp"
#include "birkhoff/kt_system.hpp"
#include "birkhoff/poisson.hpp"
#include "birkhoff/sampling.hpp"
#include "birkhoff/spectrum.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace birkhoff {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_coordinate(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const auto slash = s.find('/');
      if (slash == std::string::npos) {
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } else {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        std::size_t used_den = 0;
        const double nv = std::stod(num, &used);
        const double dv = std::stod(den, &used_den);
        if (used == num.size() && used_den == den.size() && dv != 0.0) return nv / dv;
      }
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(field, "expected a number or a rational string like \"-1/2\"");
}

Eigen::VectorXd parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_coordinate(j[i], field);
  return v;
}

Eigen::MatrixXd parse_rows(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of vectors");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(field, "vectors must be non-empty arrays");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd v = parse_vector(j[r], field);
    if (static_cast<std::size_t>(v.size()) != cols) throw ConfigError(field, "vectors differ in length");
    m.row(static_cast<Eigen::Index>(r)) = v.transpose();
  }
  return m;
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + key, "missing or of the wrong type");
  }
}

Method parse_method(const std::string& s) {
  if (s == "adaptive-rk") return Method::adaptive_rk;
  if (s == "leapfrog") return Method::leapfrog;
  throw ConfigError("integrator.method", "expected \"adaptive-rk\" or \"leapfrog\", got \"" + s + "\"");
}

std::string method_name(Method m) { return m == Method::leapfrog ? "leapfrog" : "adaptive-rk"; }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) throw ConfigError(prefix + item.key(), "unknown key");
  }
}

// --- per-system model -------------------------------------------------------

struct Model {
  int dim = 0;
  std::vector<std::string> state_names;
  VectorField field;
  std::vector<NamedInvariant> invariants;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> lax_matrix;  // may be empty
  SignConstraint sign;
  int canonical_n = 0;
  VectorField transform;  // stacked (q, p) -> Flaschka state
  VectorField force;
};

std::vector<std::string> ab_names(int na, int nb) {
  std::vector<std::string> names;
  for (int i = 1; i <= na; ++i) names.push_back("a_" + std::to_string(i));
  for (int i = 1; i <= nb; ++i) names.push_back("b_" + std::to_string(i));
  return names;
}

Model make_model(const RunConfig& cfg) {
  Model m;
  const int n = cfg.n;
  switch (cfg.system) {
    case SystemKind::kt: {
      const auto variant = cfg.paper_literal_eqgen ? EqgenVariant::paper_literal : EqgenVariant::corrected;
      m.dim = 2 * n + 1;
      m.state_names = ab_names(n + 1, n);
      m.field = [variant](const Eigen::VectorXd& x) {
        return kt_vector_field(KtFlaschkaPoint::unpack(x), variant).packed();
      };
      for (int i = 1; i <= n; ++i) {
        m.invariants.push_back({"h_" + std::to_string(2 * i), [i](const Eigen::VectorXd& x) {
                                  return kt_integrals(KtFlaschkaPoint::unpack(x))[static_cast<std::size_t>(i - 1)];
                                }});
      }
      m.lax_matrix = [](const Eigen::VectorXd& x) { return build_A(KtFlaschkaPoint::unpack(x)); };
      m.sign = {0, n + 1, 1.0};
      m.canonical_n = n;
      m.transform = [n](const Eigen::VectorXd& z) { return kt_flaschka(z.head(n), z.tail(n)).packed(); };
      m.force = [](const Eigen::VectorXd& q) { return kt_force(q); };
      break;
    }
    case SystemKind::dn_toda: {
      m.dim = 2 * n;
      m.state_names = ab_names(n, n);
      m.field = [](const Eigen::VectorXd& x) { return dn_vector_field(DnFlaschkaPoint::unpack(x)).packed(); };
      for (int i = 1; i < n; ++i) {
        m.invariants.push_back({"H_" + std::to_string(2 * i), [i](const Eigen::VectorXd& x) {
                                  return dn_invariants(build_L(DnFlaschkaPoint::unpack(x)))[static_cast<std::size_t>(i - 1)];
                                }});
      }
      m.invariants.push_back({"P_" + std::to_string(n), [](const Eigen::VectorXd& x) {
                                return dn_invariants(build_L(DnFlaschkaPoint::unpack(x))).back();
                              }});
      m.lax_matrix = [](const Eigen::VectorXd& x) {
        return Eigen::MatrixXcd(build_L(DnFlaschkaPoint::unpack(x)).cast<std::complex<double>>());
      };
      m.sign = {0, n, 1.0};
      m.canonical_n = n;
      m.transform = [n](const Eigen::VectorXd& z) { return dn_flaschka(z.head(n), z.tail(n)).packed(); };
      m.force = [](const Eigen::VectorXd& q) { return dn_force(q); };
      break;
    }
    case SystemKind::custom_spectrum: {
      const Spectrum s = Spectrum::from_rows(*cfg.spectrum);
      const int big_n = s.size();
      m.dim = 2 * big_n;
      m.state_names = ab_names(big_n, big_n);
      m.field = [s, big_n](const Eigen::VectorXd& x) {
        const auto d = polynomial_flow(s, {x.head(big_n), x.tail(big_n)});
        Eigen::VectorXd out(2 * big_n);
        out << d.a, d.b;
        return out;
      };
      const auto dirs = casimir_directions(s);
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        const auto dir = dirs[k];
        const std::string suffix = "_" + std::to_string(k + 1);
        m.invariants.push_back({"F1" + suffix, [s, dir, big_n](const Eigen::VectorXd& x) {
                                  return casimir_values(s, dir, {x.head(big_n), x.tail(big_n)}).f1;
                                }});
        m.invariants.push_back({"F2" + suffix, [s, dir, big_n](const Eigen::VectorXd& x) {
                                  return casimir_values(s, dir, {x.head(big_n), x.tail(big_n)}).f2;
                                }});
      }
      m.sign = {0, big_n, -1.0};
      m.canonical_n = s.dimension();
      const Eigen::MatrixXd v = s.rows();
      m.transform = [s, big_n](const Eigen::VectorXd& z) {
        const Eigen::Index dn = z.size() / 2;
        const auto g = generalized_flaschka(s, z.head(dn), z.tail(dn));
        Eigen::VectorXd out(2 * big_n);
        out << g.a, g.b;
        return out;
      };
      m.force = [v](const Eigen::VectorXd& q) {
        // -∇ Σ exp((v_i, q))
        return Eigen::VectorXd(-(v.transpose() * (v * q).array().exp().matrix()));
      };
      break;
    }
  }
  return m;
}

CheckResult check(std::string name, double residual, double tolerance) {
  return CheckResult{std::move(name), residual, tolerance, residual <= tolerance};
}

json tests_json(const std::vector<CheckResult>& tests) {
  json arr = json::array();
  for (const auto& t : tests) {
    arr.push_back({{"name", t.name}, {"max_residual", t.max_residual}, {"tolerance", t.tolerance}, {"pass", t.pass}});
  }
  return arr;
}

// --- verification batteries --------------------------------------------------

Eigen::VectorXd kt_h2_gradient(const Eigen::VectorXd& x) {
  const Eigen::Index n = (x.size() - 1) / 2;
  Eigen::VectorXd g(x.size());
  g.head(n) = 4.0 * x.head(n);
  const double c = x[n];
  g[n] = 2.0 * c + 8.0 * c * c * c;
  g.tail(n) = 2.0 * x.tail(n);
  return g;
}

Eigen::VectorXd dn_h2_gradient(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXd g(x.size());
  g.head(n) = 4.0 * x.head(n);
  g.tail(n) = 2.0 * x.tail(n);
  return g;
}

double sup_diff(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return (u - v).cwiseAbs().maxCoeff() / (1.0 + v.cwiseAbs().maxCoeff());
}

std::vector<CheckResult> verify_kt(const RunConfig& cfg) {
  const int n = cfg.n;
  const auto variant = cfg.paper_literal_eqgen ? EqgenVariant::paper_literal : EqgenVariant::corrected;
  Pcg64 rng(cfg.seed);
  const auto w1 = BracketStructure::w1(n);
  const ScalarField h2{"h_2", [](const Eigen::VectorXd& x) { return kt_hamiltonian_flaschka(KtFlaschkaPoint::unpack(x)); },
                       kt_h2_gradient};
  std::vector<ScalarField> integrals;
  for (int i = 0; i < n; ++i) {
    integrals.push_back(ScalarField{
        "h_" + std::to_string(2 * i + 2),
        [i](const Eigen::VectorXd& x) { return kt_integrals(KtFlaschkaPoint::unpack(x))[static_cast<std::size_t>(i)]; },
        [i](const Eigen::VectorXd& x) {
          return Eigen::VectorXd(kt_integral_gradients(KtFlaschkaPoint::unpack(x)).row(i).transpose());
        }});
  }
  const ScalarField casimir{"Q", [](const Eigen::VectorXd& x) { return kt_casimir(KtFlaschkaPoint::unpack(x)); },
                            [](const Eigen::VectorXd& x) { return kt_casimir_gradient(KtFlaschkaPoint::unpack(x)); }};
  const Model model = make_model(cfg);

  double lax = 0, lax_fd = 0, field = 0, involution = 0, herm = 0, half_h = 0, pullback = 0, reduction = 0,
         jacobi = 0;
  int rank_deficient = 0;
  std::vector<Eigen::VectorXd> states;
  for (int s = 0; s < cfg.samples; ++s) {
    const KtFlaschkaPoint x = random_kt_point(rng, n);
    const Eigen::VectorXd packed = x.packed();
    states.push_back(packed);
    const Eigen::MatrixXcd A = build_A(x);
    const Eigen::MatrixXcd C = build_C(x);
    lax = std::max(lax, kt_lax_residual(x, variant) / (1.0 + A.norm()));
    lax_fd = std::max(lax_fd, kt_lax_residual_fd(x) / (1.0 + A.norm()));
    field = std::max(field, sup_diff(hamiltonian_vector_field(w1, h2, packed),
                                     kt_vector_field(x, variant).packed()));
    involution = std::max(involution, involution_matrix(w1, integrals, packed).max_scaled);
    if (kt_independence_rank(x) < n) ++rank_deficient;
    herm = std::max(herm, (A - A.adjoint()).norm() + (C + C.adjoint()).norm());
    jacobi = std::max(jacobi, jacobi_residual(w1, packed));

    KtFlaschkaPoint wall_free = x;
    wall_free.a[n] = 0.0;
    const DnFlaschkaPoint dn = wall_free.dn_part();
    const auto kt_field = kt_vector_field(wall_free, variant);
    const auto dn_field = dn_vector_field(dn);
    const auto kt_h = kt_integrals(wall_free);
    const Eigen::MatrixXd L2 = build_L2(dn);
    Eigen::MatrixXd power = L2;
    double red = std::max((build_A(wall_free) - L2.cast<std::complex<double>>()).cwiseAbs().maxCoeff(),
                          (build_C(wall_free) - build_B(dn).cast<std::complex<double>>()).cwiseAbs().maxCoeff());
    red = std::max(red, std::max((kt_field.a.head(n) - dn_field.a).cwiseAbs().maxCoeff(),
                                 (kt_field.b - dn_field.b).cwiseAbs().maxCoeff()));
    red = std::max(red, std::abs(kt_field.a[n]));
    for (int i = 0; i < n; ++i) {
      red = std::max(red, std::abs(kt_h[static_cast<std::size_t>(i)] - 0.5 * power.trace()) /
                              std::max(1.0, std::abs(kt_h[static_cast<std::size_t>(i)])));
      power = power * L2;
    }
    reduction = std::max(reduction, red);

    const Eigen::VectorXd z = random_canonical_point(rng, n);
    const double H = kt_hamiltonian(z.head(n), z.tail(n));
    half_h = std::max(half_h, std::abs(kt_hamiltonian_flaschka(kt_flaschka(z.head(n), z.tail(n))) - 0.5 * H) /
                                  std::max(1.0, std::abs(H)));
    pullback = std::max(pullback, pullback_residual(model.transform, canonical_field(model.force), model.field, z));
  }
  const auto cas = casimir_check(w1, casimir, states);

  std::vector<CheckResult> out;
  out.push_back(check("lax_residual", lax, 1e-12));
  out.push_back(check("lax_residual_finite_difference", lax_fd, 1e-6));
  out.push_back(check("bracket_field_w1", field, 1e-12));
  out.push_back(check("involution_w1", involution, 1e-10));
  out.push_back(check("independence_rank", static_cast<double>(rank_deficient) / cfg.samples, 0.05));
  out.push_back(check("hermiticity", herm, 1e-14));
  out.push_back(check("casimir_Q_w1", cas.max_scaled, 1e-10));
  out.push_back(check("jacobi_w1", jacobi, 1e-10));
  out.push_back(check("h2_half_hamiltonian", half_h, 1e-12));
  out.push_back(check("pullback_canonical_flow", pullback, 1e-6));
  out.push_back(check("reduction_to_dn", reduction, 1e-14));
  return out;
}

std::vector<CheckResult> verify_dn(const RunConfig& cfg) {
  const int n = cfg.n;
  Pcg64 rng(cfg.seed);
  const auto pi1 = BracketStructure::pi1(n);
  const ScalarField h2{"H_2",
                       [](const Eigen::VectorXd& x) { return dn_invariants(build_L(DnFlaschkaPoint::unpack(x))).front(); },
                       dn_h2_gradient};
  std::vector<ScalarField> invariants;
  for (int i = 0; i < n; ++i) {
    invariants.push_back(ScalarField{
        "inv_" + std::to_string(i + 1),
        [i](const Eigen::VectorXd& x) {
          return dn_invariants(build_L(DnFlaschkaPoint::unpack(x)))[static_cast<std::size_t>(i)];
        },
        [i](const Eigen::VectorXd& x) {
          return Eigen::VectorXd(dn_invariant_gradients(DnFlaschkaPoint::unpack(x)).row(i).transpose());
        }});
  }
  const Model model = make_model(cfg);

  double lax = 0, lax2 = 0, field = 0, involution = 0, pairing = 0, pullback = 0, jacobi = 0;
  int rank_deficient = 0;
  for (int s = 0; s < cfg.samples; ++s) {
    const DnFlaschkaPoint x = random_dn_point(rng, n);
    const Eigen::VectorXd packed = x.packed();
    const Eigen::MatrixXd L = build_L(x);
    lax = std::max(lax, dn_lax_residual(x) / (1.0 + L.norm()));
    lax2 = std::max(lax2, dn_quadratic_lax_residual(x) / (1.0 + (L * L).norm()));
    field = std::max(field, sup_diff(hamiltonian_vector_field(pi1, h2, packed), dn_vector_field(x).packed()));
    involution = std::max(involution, involution_matrix(pi1, invariants, packed).max_scaled);
    if (gradient_rank(dn_invariant_gradients(x), 1e-8) < n) ++rank_deficient;
    jacobi = std::max(jacobi, jacobi_residual(pi1, packed));
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(L, Eigen::EigenvaluesOnly).eigenvalues();
    for (Eigen::Index k = 0; k < ev.size(); ++k) pairing = std::max(pairing, std::abs(ev[k] + ev[ev.size() - 1 - k]));
    const Eigen::VectorXd z = random_canonical_point(rng, n);
    pullback = std::max(pullback, pullback_residual(model.transform, canonical_field(model.force), model.field, z));
  }
  std::vector<CheckResult> out;
  out.push_back(check("lax_residual", lax, 1e-12));
  out.push_back(check("quadratic_lax_residual", lax2, 1e-12));
  out.push_back(check("bracket_field_pi1", field, 1e-12));
  out.push_back(check("involution_pi1", involution, 1e-10));
  out.push_back(check("independence_rank", static_cast<double>(rank_deficient) / cfg.samples, 0.05));
  out.push_back(check("eigenvalue_pairing", pairing, 1e-9));
  out.push_back(check("jacobi_pi1", jacobi, 1e-10));
  out.push_back(check("pullback_canonical_flow", pullback, 1e-6));
  return out;
}

double ratio_distance(double r) {
  // Distance from r to {0, -1, -2, ...}.
  return r > 0.0 ? r : std::abs(r - std::round(r));
}

std::vector<CheckResult> verify_custom(const RunConfig& cfg) {
  const Spectrum s = Spectrum::from_rows(*cfg.spectrum);
  const int big_n = s.size();
  const int dim = s.dimension();
  Pcg64 rng(cfg.seed);
  const auto br = BracketStructure::spectrum_bracket(s);
  const Model model = make_model(cfg);
  std::vector<Eigen::VectorXd> states;
  double pullback = 0, jacobi = 0;
  for (int k = 0; k < cfg.samples; ++k) {
    const Eigen::VectorXd z = random_canonical_point(rng, dim);
    pullback = std::max(pullback, pullback_residual(model.transform, canonical_field(model.force), model.field, z));
    states.push_back(model.transform(z));
    jacobi = std::max(jacobi, jacobi_residual(br, states.back()));
  }
  double casimir = 0.0;
  for (const auto& dir : casimir_directions(s)) {
    const Eigen::VectorXd lambda = dir.lambda();
    const ScalarField f1{"F1", [lambda, big_n](const Eigen::VectorXd& x) { return lambda.dot(x.tail(big_n)); },
                         [lambda, big_n](const Eigen::VectorXd& x) {
                           Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
                           g.tail(big_n) = lambda;
                           return g;
                         }};
    const ScalarField f2{"F2",
                         [s, dir, big_n](const Eigen::VectorXd& x) {
                           return casimir_values(s, dir, {x.head(big_n), x.tail(big_n)}).f2;
                         },
                         [s, dir, big_n](const Eigen::VectorXd& x) {
                           const double f = casimir_values(s, dir, {x.head(big_n), x.tail(big_n)}).f2;
                           Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
                           g.head(big_n) = f * dir.lambda().cwiseQuotient(x.head(big_n));
                           return g;
                         }};
    casimir = std::max(casimir, casimir_check(br, f1, states).max_scaled);
    casimir = std::max(casimir, casimir_check(br, f2, states).max_scaled);
  }
  const auto report = check_birkhoff_necessary(s);
  double worst_ratio = 0.0;
  for (const auto& c : report.checks) worst_ratio = std::max(worst_ratio, ratio_distance(c.ratio));

  std::vector<CheckResult> out;
  out.push_back(check("pullback_canonical_flow", pullback, 1e-6));
  out.push_back(check("casimirs_F1_F2", casimir, 1e-10));
  out.push_back(check("jacobi_spectrum_bracket", jacobi, 1e-10));
  out.push_back(check("birkhoff_necessary_condition", worst_ratio, 1e-9));
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create " + dir.string() + ": " + ec.message());
}

Spectrum resolve_spectrum(const RunConfig& cfg) {
  switch (cfg.system) {
    case SystemKind::kt: return kt_spectrum(cfg.n);
    case SystemKind::dn_toda: return dn_spectrum(cfg.n);
    case SystemKind::custom_spectrum: return Spectrum::from_rows(*cfg.spectrum);
  }
  throw ConfigError("system", "unknown system");
}

}  // namespace

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::kt: return "kt";
    case SystemKind::dn_toda: return "dn_toda";
    case SystemKind::custom_spectrum: return "custom_spectrum";
  }
  return "?";
}

SystemKind parse_system(const std::string& name) {
  if (name == "kt") return SystemKind::kt;
  if (name == "dn_toda") return SystemKind::dn_toda;
  if (name == "custom_spectrum") return SystemKind::custom_spectrum;
  throw ConfigError("system", "expected kt, dn_toda or custom_spectrum, got \"" + name + "\"");
}

void RunConfig::validate() const {
  if (system == SystemKind::custom_spectrum) {
    if (!spectrum) throw ConfigError("spectrum", "required for custom_spectrum");
    if (spectrum->cols() != n) throw ConfigError("n", "does not match the spectrum vector length");
    try {
      Spectrum::from_rows(*spectrum);
    } catch (const std::exception& e) {
      throw ConfigError("spectrum", e.what());
    }
  } else if (n < 4) {
    throw ConfigError("n", "must be at least 4, got " + std::to_string(n));
  }
  if (samples <= 0) throw ConfigError("samples", "must be positive");
  integrator.validate();
  if (initial) {
    const long first = initial->first.size();
    const long second = initial->second.size();
    long want_first = n, want_second = n;
    if (initial->frame == InitialCondition::Frame::flaschka) {
      if (system == SystemKind::kt) want_first = n + 1;
      if (system == SystemKind::custom_spectrum) want_first = want_second = spectrum->rows();
    }
    const char* f1 = initial->frame == InitialCondition::Frame::canonical ? "initial_condition.q" : "initial_condition.a";
    const char* f2 = initial->frame == InitialCondition::Frame::canonical ? "initial_condition.p" : "initial_condition.b";
    if (first != want_first) throw ConfigError(f1, "expected " + std::to_string(want_first) + " entries");
    if (second != want_second) throw ConfigError(f2, "expected " + std::to_string(want_second) + " entries");
    if (initial->frame == InitialCondition::Frame::flaschka && integrator.method == Method::leapfrog) {
      throw ConfigError("integrator.method", "leapfrog needs a canonical initial condition");
    }
  }
}

Eigen::MatrixXd parse_spectrum_rows(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("spectrum", std::string("invalid JSON: ") + e.what());
  }
  return parse_rows(j, "spectrum");
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(j, {"system", "n", "spectrum", "initial_condition", "integrator", "seed", "samples", "output_dir",
                     "paper_literal_eqgen"},
                 "");
  RunConfig cfg;
  if (j.contains("system")) cfg.system = parse_system(get_field<std::string>(j, "system", ""));
  if (j.contains("spectrum")) {
    cfg.spectrum = parse_rows(j["spectrum"], "spectrum");
    if (!j.contains("system")) cfg.system = SystemKind::custom_spectrum;
    cfg.n = static_cast<int>(cfg.spectrum->cols());
  }
  if (j.contains("n")) cfg.n = get_field<int>(j, "n", "");
  if (j.contains("seed")) cfg.seed = get_field<std::uint64_t>(j, "seed", "");
  if (j.contains("samples")) cfg.samples = get_field<int>(j, "samples", "");
  if (j.contains("output_dir")) cfg.output_dir = get_field<std::string>(j, "output_dir", "");
  if (j.contains("paper_literal_eqgen")) cfg.paper_literal_eqgen = get_field<bool>(j, "paper_literal_eqgen", "");
  if (j.contains("integrator")) {
    const json& ij = j["integrator"];
    if (!ij.is_object()) throw ConfigError("integrator", "must be an object");
    reject_unknown(ij, {"method", "t_end", "initial_step", "rtol", "atol", "max_steps", "sample_stride"},
                   "integrator.");
    auto& ic = cfg.integrator;
    if (ij.contains("method")) ic.method = parse_method(get_field<std::string>(ij, "method", "integrator."));
    if (ij.contains("t_end")) ic.t_end = get_field<double>(ij, "t_end", "integrator.");
    if (ij.contains("initial_step")) ic.initial_step = get_field<double>(ij, "initial_step", "integrator.");
    if (ij.contains("rtol")) ic.rtol = get_field<double>(ij, "rtol", "integrator.");
    if (ij.contains("atol")) ic.atol = get_field<double>(ij, "atol", "integrator.");
    if (ij.contains("max_steps")) ic.max_steps = get_field<long>(ij, "max_steps", "integrator.");
    if (ij.contains("sample_stride")) ic.sample_stride = get_field<int>(ij, "sample_stride", "integrator.");
  }
  if (j.contains("initial_condition")) {
    const json& ic = j["initial_condition"];
    if (!ic.is_object()) throw ConfigError("initial_condition", "must be an object");
    reject_unknown(ic, {"frame", "q", "p", "a", "b"}, "initial_condition.");
    InitialCondition init;
    const std::string frame = get_field<std::string>(ic, "frame", "initial_condition.");
    const bool has_qp = ic.contains("q") || ic.contains("p");
    const bool has_ab = ic.contains("a") || ic.contains("b");
    if (has_qp && has_ab) throw ConfigError("initial_condition", "give either (q, p) or (a, b), not both");
    if (frame == "canonical") {
      init.frame = InitialCondition::Frame::canonical;
      if (!ic.contains("q") || !ic.contains("p")) throw ConfigError("initial_condition", "canonical frame needs q and p");
      init.first = parse_vector(ic["q"], "initial_condition.q");
      init.second = parse_vector(ic["p"], "initial_condition.p");
    } else if (frame == "flaschka") {
      init.frame = InitialCondition::Frame::flaschka;
      if (!ic.contains("a") || !ic.contains("b")) throw ConfigError("initial_condition", "flaschka frame needs a and b");
      init.first = parse_vector(ic["a"], "initial_condition.a");
      init.second = parse_vector(ic["b"], "initial_condition.b");
    } else {
      throw ConfigError("initial_condition.frame", "expected \"canonical\" or \"flaschka\"");
    }
    cfg.initial = std::move(init);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

bool VerifyReport::pass() const {
  return std::all_of(tests.begin(), tests.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::to_json() const {
  json j = {{"system", system}, {"n", n}, {"seed", seed}, {"tests", tests_json(tests)}};
  return j.dump(2) + "\n";
}

VerifyReport run_verification(const RunConfig& cfg) {
  cfg.validate();
  VerifyReport r;
  r.system = to_string(cfg.system);
  r.n = cfg.n;
  r.seed = cfg.seed;
  switch (cfg.system) {
    case SystemKind::kt: r.tests = verify_kt(cfg); break;
    case SystemKind::dn_toda: r.tests = verify_dn(cfg); break;
    case SystemKind::custom_spectrum: r.tests = verify_custom(cfg); break;
  }
  return r;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& state_names) {
  std::string out = "t";
  for (const auto& name : state_names) out += "," + name;
  for (const auto& [name, series] : traj.invariant_series) out += "," + name;
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += fmt17(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) out += "," + fmt17(traj.states[k][i]);
    for (const auto& [name, series] : traj.invariant_series) out += "," + fmt17(series[k]);
    out += "\n";
  }
  return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Spectrum s = [&] {
    try {
      cfg.validate();
      return resolve_spectrum(cfg);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("spectrum", e.what());
    }
  }();

  const auto report = check_birkhoff_necessary(s);
  json j = {{"system", to_string(cfg.system)}, {"n", s.dimension()}, {"seed", cfg.seed}};
  std::vector<CheckResult> tests;
  for (const auto& c : report.checks) {
    tests.push_back(CheckResult{"kt_ratio(v" + std::to_string(c.maximal + 1) + ",v" + std::to_string(c.other + 1) + ")",
                                ratio_distance(c.ratio), 1e-9, c.pass});
  }
  j["tests"] = tests_json(tests);
  j["maximal"] = report.maximal;
  json ratios = json::array();
  for (const auto& c : report.checks) ratios.push_back({{"i", c.maximal + 1}, {"j", c.other + 1}, {"ratio", c.ratio}, {"pass", c.pass}});
  j["ratios"] = ratios;

  bool pass = report.pass;
  out << report.to_text(s);
  try {
    const auto d = dynkin_diagram(s);
    json edges = json::array();
    for (const auto& [key, mult] : d.edges) edges.push_back({key.first + 1, key.second + 1, mult});
    j["diagram"] = {{"weights", d.weights}, {"edges", edges}};
    out << d.to_text();
  } catch (const ClassificationError& e) {
    j["diagram"] = {{"error", e.what()}};
    out << "diagram: " << e.what() << '\n';
    pass = false;
  }
  j["pass"] = pass;
  ensure_dir(cfg.output_dir);
  write_atomically(cfg.output_dir / "classify_report.json", j.dump(2) + "\n");
  out << "classification: " << (pass ? "pass" : "fail") << '\n';
  if (!pass) err << "classification failed: see " << (cfg.output_dir / "classify_report.json").string() << '\n';
  return pass ? 0 : 2;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const Model model = make_model(cfg);
  const IntegratorConfig& ic = cfg.integrator;
  const int cn = model.canonical_n;

  Pcg64 rng(cfg.seed);
  Eigen::VectorXd z0;  // canonical start, when one exists
  Eigen::VectorXd x0;
  if (cfg.initial && cfg.initial->frame == InitialCondition::Frame::flaschka) {
    x0.resize(model.dim);
    x0 << cfg.initial->first, cfg.initial->second;
  } else {
    if (cfg.initial) {
      z0.resize(2 * cn);
      z0 << cfg.initial->first, cfg.initial->second;
    } else if (ic.method == Method::leapfrog || cfg.system == SystemKind::custom_spectrum) {
      z0 = random_canonical_point(rng, cn);
    }
    if (z0.size() != 0) {
      x0 = model.transform(z0);
    } else if (cfg.system == SystemKind::kt) {
      x0 = random_kt_point(rng, cfg.n).packed();
    } else {
      x0 = random_dn_point(rng, cfg.n).packed();
    }
  }

  Trajectory traj;
  bool partial = false;
  std::string failure;
  try {
    if (ic.method == Method::adaptive_rk) {
      traj = integrate_flaschka(model.field, x0, ic, model.sign);
    } else {
      traj = integrate_canonical(model.force, z0.head(cn), z0.tail(cn), ic);
      for (auto& s : traj.states) s = model.transform(s);
    }
  } catch (const IntegrationError& e) {
    traj = e.partial();
    partial = true;
    failure = e.what();
    err << "integration failed: " << failure << '\n';
  }

  attach_invariants(traj, model.invariants);
  std::vector<CheckResult> tests;
  json extra = json::object();
  json drift = json::array();
  for (const auto& d : drift_report(traj, model.invariants)) {
    tests.push_back(check("drift:" + d.name, d.max_relative_drift, 1e-8));
    drift.push_back({{"name", d.name}, {"initial", d.initial}, {"max_relative_drift", d.max_relative_drift},
                     {"time_of_max", d.time_of_max}});
  }
  extra["drift_report"] = drift;
  if (model.lax_matrix) {
    try {
      const auto ed = eigenvalue_drift(traj, model.lax_matrix);
      tests.push_back(check("eigenvalue_drift", ed.max_drift, 1e-8));
      extra["eigenvalue_drift"] = {{"max_drift", ed.max_drift}, {"time_of_max", ed.time_of_max}};
    } catch (const DiagnosticError& e) {
      tests.push_back(CheckResult{"eigenvalue_drift", INFINITY, 1e-8, false});
      extra["diagnostic"] = e.what();
    }
  }

  ensure_dir(cfg.output_dir);
  write_atomically(cfg.output_dir / "trajectory.csv", trajectory_csv(traj, model.state_names));
  json j = {{"system", to_string(cfg.system)}, {"n", cfg.n}, {"seed", cfg.seed}, {"tests", tests_json(tests)}};
  j["method"] = method_name(ic.method);
  j["t_end"] = ic.t_end;
  j["accepted_steps"] = traj.accepted;
  j["rejected_steps"] = traj.rejected;
  j["samples"] = traj.times.size();
  j["warnings"] = traj.warnings;
  j["partial"] = partial;
  if (partial) j["failure"] = failure;
  j["csv"] = "trajectory.csv";
  for (const auto& item : extra.items()) j[item.key()] = item.value();
  write_atomically(cfg.output_dir / "summary.json", j.dump(2) + "\n");

  for (const auto& t : tests) {
    out << t.name << ": " << t.max_residual << " (tolerance " << t.tolerance << ") " << (t.pass ? "ok" : "exceeded")
        << '\n';
  }
  return partial ? 3 : 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const VerifyReport report = run_verification(cfg);
  ensure_dir(cfg.output_dir);
  write_atomically(cfg.output_dir / "verify_report.json", report.to_json());
  for (const auto& t : report.tests) {
    out << (t.pass ? "PASS " : "FAIL ") << t.name << "  max_residual=" << t.max_residual
        << "  tolerance=" << t.tolerance << '\n';
    if (!t.pass) err << "verification failed: " << t.name << '\n';
  }
  return report.pass() ? 0 : 2;
}

}  // namespace birkhoff
