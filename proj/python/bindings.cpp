#include "birkhoff/cli.hpp"
#include "birkhoff/dn_toda.hpp"
#include "birkhoff/dynamics.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/kt_system.hpp"
#include "birkhoff/poisson.hpp"
#include "birkhoff/spectrum.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace birkhoff;

namespace {

Eigen::VectorXd stack(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd x(a.size() + b.size());
  x << a, b;
  return x;
}

KtFlaschkaPoint kt_point(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return {a, b}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lax pairs and integrability diagnostics for exponential-interaction lattices";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ClassificationError>(m, "ClassificationError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // Spectra are passed as N×n arrays of row vectors.
  m.def("kt_spectrum", [](int n) { return kt_spectrum(n).rows(); }, py::arg("n"));
  m.def("dn_spectrum", [](int n) { return dn_spectrum(n).rows(); }, py::arg("n"));
  m.def("gram", [](const Eigen::MatrixXd& rows) { return gram(Spectrum::from_rows(rows)); },
        py::arg("rows"));
  m.def(
      "check_birkhoff_necessary",
      [](const Eigen::MatrixXd& rows) {
        const auto s = Spectrum::from_rows(rows);
        const auto rep = check_birkhoff_necessary(s);
        py::list checks;
        for (const auto& c : rep.checks) {
          checks.append(py::dict(py::arg("i") = c.maximal, py::arg("j") = c.other,
                                 py::arg("ratio") = c.ratio, py::arg("pass") = c.pass));
        }
        return py::dict(py::arg("maximal") = rep.maximal, py::arg("checks") = checks,
                        py::arg("pass") = rep.pass);
      },
      py::arg("rows"));
  m.def(
      "dynkin_diagram",
      [](const Eigen::MatrixXd& rows) {
        const auto d = dynkin_diagram(Spectrum::from_rows(rows));
        py::list edges;
        for (const auto& [ij, mult] : d.edges) edges.append(py::make_tuple(ij.first, ij.second, mult));
        return py::dict(py::arg("weights") = d.weights, py::arg("edges") = edges);
      },
      py::arg("rows"));
  m.def(
      "casimir_directions",
      [](const Eigen::MatrixXd& rows) {
        std::vector<Eigen::VectorXd> out;
        for (const auto& d : casimir_directions(Spectrum::from_rows(rows))) out.push_back(d.lambda());
        return out;
      },
      py::arg("rows"));
  m.def(
      "generalized_flaschka",
      [](const Eigen::MatrixXd& rows, const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
        const auto x = generalized_flaschka(Spectrum::from_rows(rows), q, p);
        return py::make_tuple(x.a, x.b);
      },
      py::arg("rows"), py::arg("q"), py::arg("p"));
  m.def(
      "polynomial_flow",
      [](const Eigen::MatrixXd& rows, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        const auto d = polynomial_flow(Spectrum::from_rows(rows), {a, b});
        return py::make_tuple(d.a, d.b);
      },
      py::arg("rows"), py::arg("a"), py::arg("b"));

  m.def("dn_hamiltonian", &dn_hamiltonian, py::arg("q"), py::arg("p"));
  m.def(
      "dn_flaschka",
      [](const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
        const auto x = dn_flaschka(q, p);
        return py::make_tuple(x.a, x.b);
      },
      py::arg("q"), py::arg("p"));
  m.def(
      "dn_L", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return build_L({a, b}); },
      py::arg("a"), py::arg("b"));
  m.def(
      "dn_B", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return build_B({a, b}); },
      py::arg("a"), py::arg("b"));
  m.def("dn_invariants", &dn_invariants, py::arg("L"));
  m.def(
      "dn_lax_residual",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return dn_lax_residual({a, b}); },
      py::arg("a"), py::arg("b"));

  m.def("kt_hamiltonian", &kt_hamiltonian, py::arg("q"), py::arg("p"));
  m.def(
      "kt_flaschka",
      [](const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
        const auto x = kt_flaschka(q, p);
        return py::make_tuple(x.a, x.b);
      },
      py::arg("q"), py::arg("p"));
  m.def(
      "kt_vector_field",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b, bool paper_literal) {
        const auto d = kt_vector_field(kt_point(a, b), paper_literal ? EqgenVariant::paper_literal
                                                                     : EqgenVariant::corrected);
        return py::make_tuple(d.a, d.b);
      },
      py::arg("a"), py::arg("b"), py::arg("paper_literal") = false);
  m.def(
      "kt_A", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return build_A(kt_point(a, b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "kt_C", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return build_C(kt_point(a, b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "kt_integrals",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return kt_integrals(kt_point(a, b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "kt_casimir", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return kt_casimir(kt_point(a, b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "kt_lax_residual",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b, bool paper_literal) {
        return kt_lax_residual(kt_point(a, b),
                               paper_literal ? EqgenVariant::paper_literal : EqgenVariant::corrected);
      },
      py::arg("a"), py::arg("b"), py::arg("paper_literal") = false);
  m.def(
      "kt_independence_rank",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return kt_independence_rank(kt_point(a, b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "structure_matrix",
      [](const std::string& name, int n, const Eigen::VectorXd& state) {
        if (name == "canonical") return structure_matrix(BracketStructure::canonical(n), state);
        if (name == "pi1") return structure_matrix(BracketStructure::pi1(n), state);
        if (name == "w1") return structure_matrix(BracketStructure::w1(n), state);
        throw ConfigError("bracket", "unknown bracket '" + name + "'");
      },
      py::arg("name"), py::arg("n"), py::arg("state"));
  m.def(
      "jacobi_residual",
      [](const std::string& name, int n, const Eigen::VectorXd& state) {
        if (name == "canonical") return jacobi_residual(BracketStructure::canonical(n), state);
        if (name == "pi1") return jacobi_residual(BracketStructure::pi1(n), state);
        if (name == "w1") return jacobi_residual(BracketStructure::w1(n), state);
        throw ConfigError("bracket", "unknown bracket '" + name + "'");
      },
      py::arg("name"), py::arg("n"), py::arg("state"));

  m.def(
      "simulate_kt",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b, double t_end, double rtol, double atol,
         int sample_stride) {
        IntegratorConfig cfg;
        cfg.t_end = t_end;
        cfg.rtol = rtol;
        cfg.atol = atol;
        cfg.sample_stride = sample_stride;
        const int n = static_cast<int>(b.size());
        const VectorField field = [n](const Eigen::VectorXd& x) {
          const auto d = kt_vector_field(kt_point(x.head(n + 1), x.tail(n)));
          return stack(d.a, d.b);
        };
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = integrate_flaschka(field, stack(a, b), cfg, {0, n + 1, 1.0});
        }
        Eigen::MatrixXd states(static_cast<Eigen::Index>(traj.states.size()), 2 * n + 1);
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
          states.row(static_cast<Eigen::Index>(k)) = traj.states[k].transpose();
        }
        return py::make_tuple(traj.times, states);
      },
      py::arg("a"), py::arg("b"), py::arg("t_end"), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12,
      py::arg("sample_stride") = 1);

  m.def(
      "verify",
      [](const std::string& system, int n, std::uint64_t seed, int samples,
         std::optional<Eigen::MatrixXd> spectrum) {
        RunConfig cfg;
        cfg.system = parse_system(system);
        cfg.n = n;
        cfg.seed = seed;
        cfg.samples = samples;
        cfg.spectrum = std::move(spectrum);
        cfg.validate();
        py::gil_scoped_release release;
        return run_verification(cfg).to_json();
      },
      py::arg("system"), py::arg("n"), py::arg("seed") = 1, py::arg("samples") = 20,
      py::arg("spectrum") = py::none(), "JSON verification report, as written by the command-line tool.");
}
