#pragma once

// Poisson brackets given by state-dependent antisymmetric structure matrices,
// {f, g}(x) = ∇f(x)ᵀ J(x) ∇g(x).
//
// Coordinate layout contract: a-block first, then b-block (for the canonical
// bracket: q-block, then p-block).

#include "birkhoff/spectrum.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

class BracketStructure {
 public:
  /// Receives the state and writes J_ij for i < j through `set`.
  using UpperFiller =
      std::function<void(const Eigen::VectorXd& state, const std::function<void(int, int, double)>& set)>;

  BracketStructure(std::string name, int dimension, UpperFiller filler);

  /// Standard symplectic bracket on (q_1..q_n, p_1..p_n): {q_i, p_i} = 1.
  static BracketStructure canonical(int n);
  /// π1 on (a_1..a_n, b_1..b_n) for the D_n lattice.
  static BracketStructure pi1(int n);
  /// w1 on (a_1..a_{n+1}, b_1..b_n): π1 plus {a_{n+1}, b_1} = ½a_{n+1}.
  static BracketStructure w1(int n);
  /// {b_i, a_j} = (v_i, v_j) a_j on the unscaled Flaschka variables (a_1..a_N, b_1..b_N).
  static BracketStructure spectrum_bracket(const Spectrum& s);

  const std::string& name() const noexcept { return name_; }
  int dimension() const noexcept { return dimension_; }

 private:
  friend Eigen::MatrixXd structure_matrix(const BracketStructure&, const Eigen::VectorXd&);
  std::string name_;
  int dimension_;
  UpperFiller filler_;
};

/// Antisymmetric m×m matrix J(state). Throws DimensionError on length mismatch.
Eigen::MatrixXd structure_matrix(const BracketStructure& br, const Eigen::VectorXd& state);

/// A scalar field with an optional exact gradient. Without one, `gradient`
/// uses central differences with step 1e-6·max(1, |x_j|).
struct ScalarField {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> exact_gradient;

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  double operator()(const Eigen::VectorXd& x) const { return value(x); }

  /// x ↦ x_j with gradient e_j.
  static ScalarField coordinate(int j, int dimension);
  static ScalarField constant(double c);
  /// Product field with the Leibniz gradient when both factors are exact.
  static ScalarField product(const ScalarField& f, const ScalarField& g);
};

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x);

double bracket(const BracketStructure& br, const ScalarField& f, const ScalarField& g,
               const Eigen::VectorXd& state);

Eigen::VectorXd hamiltonian_vector_field(const BracketStructure& br, const ScalarField& h,
                                         const Eigen::VectorXd& state);

struct InvolutionReport {
  Eigen::MatrixXd values;
  double max_raw = 0.0;
  /// max over i≠j of |{f_i, f_j}| / (1 + ‖∇f_i‖‖∇f_j‖‖J‖₂).
  double max_scaled = 0.0;
};

InvolutionReport involution_matrix(const BracketStructure& br, const std::vector<ScalarField>& fs,
                                   const Eigen::VectorXd& state);

struct CasimirReport {
  double max_raw = 0.0;
  /// max of |{f, x_j}| / (1 + ‖∇f‖‖J‖₂).
  double max_scaled = 0.0;
  bool pass = true;
};

/// Brackets f with every coordinate function over the sample states;
/// passes iff every scaled value is at most 1e-10.
CasimirReport casimir_check(const BracketStructure& br, const ScalarField& f,
                            const std::vector<Eigen::VectorXd>& sample);

/// max_{i,j,k} |{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}| at `state`,
/// with ∂J from central differences.
double jacobi_residual(const BracketStructure& br, const Eigen::VectorXd& state);

/// Spectral norm.
double operator_norm(const Eigen::MatrixXd& m);

}  // namespace birkhoff
