#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "birkhoff/dynamics.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/kt_system.hpp"
#include "birkhoff/random.hpp"
#include "birkhoff/sampling.hpp"

#include <cmath>

using namespace birkhoff;

namespace {

IntegratorConfig rk(double t_end, double rtol = 1e-10) {
  IntegratorConfig c;
  c.t_end = t_end;
  c.rtol = rtol;
  c.atol = 1e-12;
  return c;
}

IntegratorConfig leapfrog(double t_end, double step) {
  IntegratorConfig c;
  c.method = Method::leapfrog;
  c.t_end = t_end;
  c.initial_step = step;
  return c;
}

const VectorField kt_field = [](const Eigen::VectorXd& x) {
  return kt_vector_field(KtFlaschkaPoint::unpack(x)).packed();
};

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig c = rk(1.0);
  CHECK_NOTHROW(c.validate());
  c.rtol = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = rk(1.0);
  c.atol = 0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = rk(-1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = rk(1.0);
  c.sample_stride = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(integrate_flaschka(kt_field, Eigen::VectorXd::Zero(9), leapfrog(1, 0.1)), ConfigError);
}

TEST_CASE("zero field") {
  const Eigen::VectorXd x0 = Eigen::VectorXd::LinSpaced(5, -1, 1);
  const auto t = integrate_flaschka([](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); }, x0,
                                    rk(3.0));
  for (const auto& s : t.states) CHECK(s == x0);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == 3.0);
  std::vector<NamedInvariant> inv{{"sum", [](const Eigen::VectorXd& x) { return x.sum(); }}};
  CHECK(drift_report(t, inv)[0].max_relative_drift == 0.0);
  const auto ed = eigenvalue_drift(t, [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXcd(x.asDiagonal().toDenseMatrix().cast<std::complex<double>>());
  });
  CHECK(ed.max_drift == 0.0);
}

TEST_CASE("exponential growth") {
  const VectorField f = [](const Eigen::VectorXd& x) { return x; };
  for (double rtol : {1e-6, 1e-8, 1e-10}) {
    const auto t = integrate_flaschka(f, Eigen::VectorXd::Ones(1), rk(1.0, rtol));
    CAPTURE(rtol);
    CHECK(std::abs(t.states.back()[0] - std::exp(1.0)) <= 10 * rtol * std::exp(1.0));
  }
  // convergence: error scales with rtol within a factor 100
  const double e6 = std::abs(integrate_flaschka(f, Eigen::VectorXd::Ones(1), rk(1.0, 1e-6)).states.back()[0] - std::exp(1.0));
  const double e9 = std::abs(integrate_flaschka(f, Eigen::VectorXd::Ones(1), rk(1.0, 1e-9)).states.back()[0] - std::exp(1.0));
  const double ratio = (e6 / e9) / 1e3;
  CHECK(ratio >= 1e-2);
  CHECK(ratio <= 1e2);
}

TEST_CASE("trajectory shape and sampling") {
  Pcg64 rng(1);
  const Eigen::VectorXd x0 = random_kt_point(rng, 4).packed();
  auto cfg = rk(5.0);
  const auto full = integrate_flaschka(kt_field, x0, cfg);
  CHECK(full.states.front() == x0);
  CHECK(full.states.size() == full.times.size());
  CHECK(static_cast<long>(full.times.size()) == full.accepted + 1);
  for (std::size_t k = 1; k < full.times.size(); ++k) CHECK(full.times[k] > full.times[k - 1]);

  cfg.sample_stride = 10;
  const auto sparse = integrate_flaschka(kt_field, x0, cfg);
  CHECK(sparse.times.back() == 5.0);
  CHECK(sparse.states.back() == full.states.back());
  CHECK(sparse.times.size() == static_cast<std::size_t>((full.accepted + 9) / 10 + 1));
}

TEST_CASE("integration failures carry the partial trajectory") {
  Pcg64 rng(2);
  const Eigen::VectorXd x0 = random_kt_point(rng, 4).packed();
  auto cfg = rk(50.0);
  cfg.max_steps = 20;
  try {
    integrate_flaschka(kt_field, x0, cfg);
    FAIL("expected an IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.partial().states.front() == x0);
    CHECK(e.partial().times.size() >= 1);
  }
  // finite-time blow-up ẋ = x²
  try {
    integrate_flaschka([](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.array().square()); },
                       Eigen::VectorXd::Ones(1), rk(2.0));
    FAIL("expected an IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.partial().times.back() < 1.0);
  }
}

TEST_CASE("sign warnings") {
  const VectorField down = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(x.size(), -1.0); };
  const auto t = integrate_flaschka(down, Eigen::VectorXd::Constant(2, 0.5), rk(1.0), {0, 1, 1.0});
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("coarse tolerance drifts more") {
  Pcg64 rng(3);
  const Eigen::VectorXd x0 = random_kt_point(rng, 4).packed();
  std::vector<NamedInvariant> inv{
      {"h_2", [](const Eigen::VectorXd& x) { return kt_hamiltonian_flaschka(KtFlaschkaPoint::unpack(x)); }}};
  const double coarse = drift_report(integrate_flaschka(kt_field, x0, rk(50.0, 1e-4)), inv)[0].max_relative_drift;
  const double fine = drift_report(integrate_flaschka(kt_field, x0, rk(50.0, 1e-10)), inv)[0].max_relative_drift;
  CHECK(coarse > fine);
  CHECK(fine <= 1e-8);
}

TEST_CASE("leapfrog") {
  SUBCASE("free particle") {
    const auto t = integrate_canonical([](const Eigen::VectorXd& q) { return Eigen::VectorXd::Zero(q.size()); },
                                       Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), leapfrog(1.0, 0.1));
    CHECK(t.states.back()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.times.back() == 1.0);
  }
  SUBCASE("harmonic energy") {
    auto cfg = leapfrog(100.0, 1e-3);
    const auto t = integrate_canonical([](const Eigen::VectorXd& q) { return Eigen::VectorXd(-q); },
                                       Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), cfg);
    const double h0 = 0.5;
    double worst = 0.0;
    for (const auto& s : t.states) worst = std::max(worst, std::abs(0.5 * s.squaredNorm() - h0));
    CHECK(worst <= 1e-6 * h0);
  }
  SUBCASE("reversibility") {
    const VectorField force = [](const Eigen::VectorXd& q) { return Eigen::VectorXd(-q); };
    const Eigen::VectorXd q0 = Eigen::VectorXd::Constant(1, 0.7), p0 = Eigen::VectorXd::Constant(1, -0.2);
    const auto fwd = integrate_canonical(force, q0, p0, leapfrog(10.0, 1e-2));
    const Eigen::VectorXd end = fwd.states.back();
    const auto back = integrate_canonical(force, end.head(1), -end.tail(1), leapfrog(10.0, 1e-2));
    const Eigen::VectorXd z = back.states.back();
    CHECK(std::abs(z[0] - q0[0]) <= 1e-10);
    CHECK(std::abs(-z[1] - p0[0]) <= 1e-10);
  }
  CHECK_THROWS_AS(integrate_canonical([](const Eigen::VectorXd& q) { return q; }, Eigen::VectorXd::Zero(1),
                                      Eigen::VectorXd::Zero(1), rk(1.0)),
                  ConfigError);
}

TEST_CASE("two-route consistency") {
  Pcg64 rng(4);
  for (int n = 4; n <= 5; ++n) {
    const Eigen::VectorXd z = random_canonical_point(rng, n);
    const auto lf = integrate_canonical([](const Eigen::VectorXd& q) { return kt_force(q); }, z.head(n), z.tail(n),
                                        leapfrog(5.0, 1e-4));
    const Eigen::VectorXd zt = lf.states.back();
    const Eigen::VectorXd via_canonical = kt_flaschka(zt.head(n), zt.tail(n)).packed();
    const auto fl = integrate_flaschka(kt_field, kt_flaschka(z.head(n), z.tail(n)).packed(), rk(5.0));
    CHECK((via_canonical - fl.states.back()).cwiseAbs().maxCoeff() <= 1e-5);

    const auto dn_lf = integrate_canonical([](const Eigen::VectorXd& q) { return dn_force(q); }, z.head(n), z.tail(n),
                                           leapfrog(5.0, 1e-4));
    const Eigen::VectorXd dz = dn_lf.states.back();
    const auto dn_fl = integrate_flaschka(
        [](const Eigen::VectorXd& x) { return dn_vector_field(DnFlaschkaPoint::unpack(x)).packed(); },
        dn_flaschka(z.head(n), z.tail(n)).packed(), rk(5.0));
    CHECK((dn_flaschka(dz.head(n), dz.tail(n)).packed() - dn_fl.states.back()).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("eigenvalue drift rejects non-Hermitian input") {
  Trajectory t;
  t.times = {0.0};
  t.states = {Eigen::VectorXd::Ones(2)};
  CHECK_THROWS_AS(eigenvalue_drift(t,
                                   [](const Eigen::VectorXd&) {
                                     Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
                                     m(0, 1) = 1.0;
                                     return m;
                                   }),
                  DiagnosticError);
}

TEST_CASE("determinism") {
  Pcg64 rng(5);
  const Eigen::VectorXd x0 = random_kt_point(rng, 5).packed();
  const auto a = integrate_flaschka(kt_field, x0, rk(10.0));
  const auto b = integrate_flaschka(kt_field, x0, rk(10.0));
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
}
