#pragma once

// H = Σ ½p_i² + Σ_{i<n} exp(q_i - q_{i+1}) + exp(q_{n-1} + q_n) + exp(-q_1) + exp(-2q_1)
// in Flaschka variables (a_1..a_{n+1}, b_1..b_n), with the complex Lax pair
// Ȧ = [C, A]. A is L² of the D_n lattice perturbed at six entries and C is B
// perturbed at the two corner diagonal entries.
//
// Packed layout: (a_1..a_{n+1}, b_1..b_n), length 2n+1.

#include "birkhoff/dn_toda.hpp"

#include <Eigen/Dense>

#include <vector>

namespace birkhoff {

/// Which ḃ_1 to use. `paper_literal` keeps the misprinted -4a_{n+1}² term and
/// exists only to show that the Lax identity then fails.
enum class EqgenVariant { corrected, paper_literal };

struct KtFlaschkaPoint {
  Eigen::VectorXd a;  // n+1 entries; a[n] is the wall coordinate a_{n+1}
  Eigen::VectorXd b;  // n entries

  KtFlaschkaPoint() = default;
  KtFlaschkaPoint(Eigen::VectorXd a_, Eigen::VectorXd b_);

  int n() const noexcept { return static_cast<int>(b.size()); }
  double wall() const { return a[n()]; }
  Eigen::VectorXd packed() const;
  static KtFlaschkaPoint unpack(const Eigen::VectorXd& x);
  /// (a_1..a_n, b): the D_n part.
  DnFlaschkaPoint dn_part() const;
};

double kt_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p);
/// -∂V/∂q.
Eigen::VectorXd kt_force(const Eigen::VectorXd& q);

KtFlaschkaPoint kt_flaschka(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

KtFlaschkaPoint kt_vector_field(const KtFlaschkaPoint& x,
                                EqgenVariant variant = EqgenVariant::corrected);

/// h_2 = Σb_i² + 2Σ_{i≤n} a_i² + a_{n+1}² + 2a_{n+1}⁴, which is half of kt_hamiltonian.
double kt_hamiltonian_flaschka(const KtFlaschkaPoint& x);

Eigen::MatrixXcd build_A(const KtFlaschkaPoint& x);
Eigen::MatrixXcd build_C(const KtFlaschkaPoint& x);

/// Directional derivative of build_A at x along the packed tangent dx.
Eigen::MatrixXcd build_A_derivative(const KtFlaschkaPoint& x, const Eigen::VectorXd& dx);

/// (h_2, h_4, ..., h_2n) with h_2i = ½ Re Tr A^i. Throws InvariantError if
/// some trace has an imaginary part above 1e-10·max(1, ‖A‖_F^i).
std::vector<double> kt_integrals(const KtFlaschkaPoint& x);

/// n × (2n+1) matrix ∂h_2i/∂x_c = (i/2) Re Tr(A^{i-1} ∂A/∂x_c).
Eigen::MatrixXd kt_integral_gradients(const KtFlaschkaPoint& x);

/// ‖Ȧ - [C, A]‖_F with Ȧ assembled by the chain rule from kt_vector_field.
double kt_lax_residual(const KtFlaschkaPoint& x, EqgenVariant variant = EqgenVariant::corrected);

/// Same comparison, but Ȧ from a central difference of build_A along the flow.
double kt_lax_residual_fd(const KtFlaschkaPoint& x, double step = 1e-6);

/// gradient_rank of kt_integral_gradients with cutoff 1e-8.
int kt_independence_rank(const KtFlaschkaPoint& x);

/// Exponents e of the Casimir Q = Π a_i^{e_i} of the w1 bracket, found as the
/// null direction of the half-exponent spectrum behind the transform and
/// scaled to small integers: (2, ..., 2, 1, 1, 2).
Eigen::VectorXd kt_casimir_exponents(int n);

double kt_casimir(const KtFlaschkaPoint& x);
Eigen::VectorXd kt_casimir_gradient(const KtFlaschkaPoint& x);

/// Number of singular values above rel_cutoff·σ_max (0 for a zero matrix).
int numerical_rank(const Eigen::MatrixXd& m, double rel_cutoff);
/// Numerical rank after scaling every nonzero row to unit length. The
/// integrals have degrees 2..2n, so raw gradient rows differ in size by orders
/// of magnitude that say nothing about independence.
int gradient_rank(const Eigen::MatrixXd& gradients, double rel_cutoff);

}  // namespace birkhoff
