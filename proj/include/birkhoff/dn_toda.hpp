#pragma once

// D_n Toda lattice in Flaschka variables
//   a_i = ½ exp(½(q_i - q_{i+1})) (i < n),  a_n = ½ exp(½(q_{n-1} + q_n)),  b_i = -½ p_i,
// its 2n×2n Lax pair L̇ = [B, L], and the quadratic pair (L², B).
//
// Packed coordinate layout everywhere: (a_1..a_n, b_1..b_n).

#include <Eigen/Dense>

#include <vector>

namespace birkhoff {

struct DnFlaschkaPoint {
  Eigen::VectorXd a;  // n entries, positive on the image of dn_flaschka
  Eigen::VectorXd b;  // n entries

  DnFlaschkaPoint() = default;
  /// Throws DimensionError if sizes differ and DomainError if n < 4.
  DnFlaschkaPoint(Eigen::VectorXd a_, Eigen::VectorXd b_);

  int n() const noexcept { return static_cast<int>(b.size()); }
  Eigen::VectorXd packed() const;
  static DnFlaschkaPoint unpack(const Eigen::VectorXd& x);
};

double dn_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p);
/// -∂V/∂q for the potential of dn_hamiltonian.
Eigen::VectorXd dn_force(const Eigen::VectorXd& q);

DnFlaschkaPoint dn_flaschka(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

/// (ȧ, ḃ) of the D_n Toda equations. Also defined off the image (a = 0 etc.).
DnFlaschkaPoint dn_vector_field(const DnFlaschkaPoint& x);

/// L is linear in (a, b), so build_L of a tangent vector is L̇.
Eigen::MatrixXd build_L(const DnFlaschkaPoint& x);
/// Antisymmetrized strict upper triangle of L.
Eigen::MatrixXd build_B(const DnFlaschkaPoint& x);
Eigen::MatrixXd build_L2(const DnFlaschkaPoint& x);

/// (H_2, H_4, ..., H_{2n-2}, P_n) with H_2k = Tr L^{2k} / (2k) and
/// P_n = sqrt((-1)^n det L).
std::vector<double> dn_invariants(const Eigen::MatrixXd& L);

/// n × 2n gradients of dn_invariants with respect to the packed coordinates.
/// Exact: ∂H_2k = Tr(L^{2k-1} ∂L), ∂P_n = ½ P_n Tr(L⁻¹ ∂L).
Eigen::MatrixXd dn_invariant_gradients(const DnFlaschkaPoint& x);

/// ‖L̇ - [B, L]‖_F with L̇ from the chain rule.
double dn_lax_residual(const DnFlaschkaPoint& x);
/// ‖d(L²)/dt - [B, L²]‖_F.
double dn_quadratic_lax_residual(const DnFlaschkaPoint& x);

}  // namespace birkhoff
