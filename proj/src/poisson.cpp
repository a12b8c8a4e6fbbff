#include "birkhoff/poisson.hpp"

#include "birkhoff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace birkhoff {

BracketStructure::BracketStructure(std::string name, int dimension, UpperFiller filler)
    : name_(std::move(name)), dimension_(dimension), filler_(std::move(filler)) {}

BracketStructure BracketStructure::canonical(int n) {
  return BracketStructure("canonical", 2 * n, [n](const Eigen::VectorXd&, const auto& set) {
    for (int i = 0; i < n; ++i) set(i, n + i, 1.0);
  });
}

BracketStructure BracketStructure::pi1(int n) {
  // a_i at index i, b_j at index n + j.
  return BracketStructure("pi1", 2 * n, [n](const Eigen::VectorXd& x, const auto& set) {
    for (int i = 0; i < n; ++i) set(i, n + i, -0.5 * x[i]);
    for (int i = 0; i + 1 < n; ++i) set(i, n + i + 1, 0.5 * x[i]);
    set(n - 1, n + n - 2, -0.5 * x[n - 1]);
  });
}

BracketStructure BracketStructure::w1(int n) {
  // a_1..a_{n+1} at 0..n, b_j at n + 1 + j.
  return BracketStructure("w1", 2 * n + 1, [n](const Eigen::VectorXd& x, const auto& set) {
    const int b0 = n + 1;
    for (int i = 0; i < n; ++i) set(i, b0 + i, -0.5 * x[i]);
    set(n, b0, 0.5 * x[n]);
    for (int i = 0; i + 1 < n; ++i) set(i, b0 + i + 1, 0.5 * x[i]);
    set(n - 1, b0 + n - 2, -0.5 * x[n - 1]);
  });
}

BracketStructure BracketStructure::spectrum_bracket(const Spectrum& s) {
  const Eigen::MatrixXd m = gram(s);
  const int big_n = s.size();
  return BracketStructure("spectrum", 2 * big_n, [m, big_n](const Eigen::VectorXd& x, const auto& set) {
    // {a_j, b_i} = -{b_i, a_j} = -M_ij a_j.
    for (int j = 0; j < big_n; ++j) {
      for (int i = 0; i < big_n; ++i) set(j, big_n + i, -m(i, j) * x[j]);
    }
  });
}

Eigen::MatrixXd structure_matrix(const BracketStructure& br, const Eigen::VectorXd& state) {
  require_size(state.size(), br.dimension(), "structure_matrix state");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(br.dimension(), br.dimension());
  br.filler_(state, [&J](int i, int j, double v) {
    if (i < j) {
      J(i, j) += v;
      J(j, i) -= v;
    } else if (j < i) {
      J(j, i) -= v;
      J(i, j) += v;
    }
  });
  return J;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + h;
    const double up = f(probe);
    probe[j] = x[j] - h;
    const double down = f(probe);
    probe[j] = x[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd ScalarField::gradient(const Eigen::VectorXd& x) const {
  if (exact_gradient) return exact_gradient(x);
  return finite_difference_gradient(value, x);
}

ScalarField ScalarField::coordinate(int j, int dimension) {
  return ScalarField{"x_" + std::to_string(j + 1),
                     [j](const Eigen::VectorXd& x) { return x[j]; },
                     [j, dimension](const Eigen::VectorXd&) {
                       return Eigen::VectorXd::Unit(dimension, j).eval();
                     }};
}

ScalarField ScalarField::constant(double c) {
  return ScalarField{"const", [c](const Eigen::VectorXd&) { return c; },
                     [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); }};
}

ScalarField ScalarField::product(const ScalarField& f, const ScalarField& g) {
  ScalarField out;
  out.name = f.name + "*" + g.name;
  out.value = [f, g](const Eigen::VectorXd& x) { return f(x) * g(x); };
  if (f.exact_gradient && g.exact_gradient) {
    out.exact_gradient = [f, g](const Eigen::VectorXd& x) {
      return (f(x) * g.gradient(x) + g(x) * f.gradient(x)).eval();
    };
  }
  return out;
}

double bracket(const BracketStructure& br, const ScalarField& f, const ScalarField& g,
               const Eigen::VectorXd& state) {
  const Eigen::MatrixXd J = structure_matrix(br, state);
  return f.gradient(state).dot(J * g.gradient(state));
}

Eigen::VectorXd hamiltonian_vector_field(const BracketStructure& br, const ScalarField& h,
                                         const Eigen::VectorXd& state) {
  return structure_matrix(br, state) * h.gradient(state);
}

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
}

InvolutionReport involution_matrix(const BracketStructure& br, const std::vector<ScalarField>& fs,
                                   const Eigen::VectorXd& state) {
  const Eigen::MatrixXd J = structure_matrix(br, state);
  const double j_norm = operator_norm(J);
  const auto k = static_cast<Eigen::Index>(fs.size());
  std::vector<Eigen::VectorXd> grads;
  grads.reserve(fs.size());
  for (const auto& f : fs) grads.push_back(f.gradient(state));

  InvolutionReport r;
  r.values = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& gi = grads[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const auto& gj = grads[static_cast<std::size_t>(j)];
      const double v = gi.dot(J * gj);
      r.values(i, j) = v;
      r.values(j, i) = -v;
      r.max_raw = std::max(r.max_raw, std::abs(v));
      r.max_scaled = std::max(r.max_scaled, std::abs(v) / (1.0 + gi.norm() * gj.norm() * j_norm));
    }
  }
  return r;
}

CasimirReport casimir_check(const BracketStructure& br, const ScalarField& f,
                            const std::vector<Eigen::VectorXd>& sample) {
  CasimirReport r;
  for (const auto& x : sample) {
    const Eigen::MatrixXd J = structure_matrix(br, x);
    const Eigen::VectorXd g = f.gradient(x);
    // {f, x_j} = (∇fᵀ J)_j
    const Eigen::VectorXd brackets = J.transpose() * g;
    const double raw = brackets.cwiseAbs().maxCoeff();
    r.max_raw = std::max(r.max_raw, raw);
    r.max_scaled = std::max(r.max_scaled, raw / (1.0 + g.norm() * operator_norm(J)));
  }
  r.pass = r.max_scaled <= 1e-10;
  return r;
}

double jacobi_residual(const BracketStructure& br, const Eigen::VectorXd& state) {
  const int m = br.dimension();
  const Eigen::MatrixXd J = structure_matrix(br, state);
  std::vector<Eigen::MatrixXd> dJ;
  dJ.reserve(static_cast<std::size_t>(m));
  Eigen::VectorXd probe = state;
  for (int l = 0; l < m; ++l) {
    const double h = 1e-4 * std::max(1.0, std::abs(state[l]));
    probe[l] = state[l] + h;
    const Eigen::MatrixXd up = structure_matrix(br, probe);
    probe[l] = state[l] - h;
    const Eigen::MatrixXd down = structure_matrix(br, probe);
    probe[l] = state[l];
    dJ.push_back((up - down) / (2.0 * h));
  }
  // {x_i, {x_j, x_k}} = Σ_l J_il ∂_l J_jk
  auto nested = [&](int i, int j, int k) {
    double s = 0.0;
    for (int l = 0; l < m; ++l) s += J(i, l) * dJ[static_cast<std::size_t>(l)](j, k);
    return s;
  };
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        worst = std::max(worst, std::abs(nested(i, j, k) + nested(j, k, i) + nested(k, i, j)));
      }
    }
  }
  return worst;
}

}  // namespace birkhoff
