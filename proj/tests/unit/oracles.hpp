#pragma once

// Reference evaluators written independently of the library: term-by-term
// Hamiltonians, the explicit n = 4 matrices and the closed form of h_4.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace oracle {

inline double dn_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  const int n = static_cast<int>(q.size());
  double h = 0.0;
  for (int i = 0; i < n; ++i) h += 0.5 * p[i] * p[i];
  for (int i = 0; i + 1 < n; ++i) h += std::exp(q[i] - q[i + 1]);
  h += std::exp(q[n - 2] + q[n - 1]);
  return h;
}

inline double kt_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  return dn_hamiltonian(q, p) + std::exp(-q[0]) + std::exp(-2.0 * q[0]);
}

// L² for the D_4 lattice, entry by entry (1-based indices in the comments).
inline Eigen::MatrixXd d4_L2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3];
  const double b1 = b[0], b2 = b[1], b3 = b[2], b4 = b[3];
  Eigen::MatrixXd m(8, 8);
  m << a1 * a1 + b1 * b1, a1 * (b1 + b2), a1 * a2, 0, 0, 0, 0, 0,
      a1 * (b1 + b2), a1 * a1 + a2 * a2 + b2 * b2, a2 * (b2 + b3), a2 * a3, -a2 * a4, 0, 0, 0,
      a1 * a2, a2 * (b2 + b3), a2 * a2 + a3 * a3 + a4 * a4 + b3 * b3, a3 * (b3 + b4), a4 * (b4 - b3), 2 * a3 * a4, 0, 0,
      0, a2 * a3, a3 * (b3 + b4), a3 * a3 + a4 * a4 + b4 * b4, -2 * a3 * a4, a4 * (b4 - b3), -a2 * a4, 0,
      0, -a2 * a4, a4 * (b4 - b3), -2 * a3 * a4, a3 * a3 + a4 * a4 + b4 * b4, a3 * (b3 + b4), a2 * a3, 0,
      0, 0, 2 * a3 * a4, a4 * (b4 - b3), a3 * (b3 + b4), a2 * a2 + a3 * a3 + a4 * a4 + b3 * b3, a2 * (b2 + b3), a1 * a2,
      0, 0, 0, -a2 * a4, a2 * a3, a2 * (b2 + b3), a1 * a1 + a2 * a2 + b2 * b2, a1 * (b1 + b2),
      0, 0, 0, 0, 0, a1 * a2, a1 * (b1 + b2), a1 * a1 + b1 * b1;
  return m;
}

inline Eigen::MatrixXd d4_B(const Eigen::VectorXd& a) {
  const double a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3];
  Eigen::MatrixXd m(8, 8);
  m << 0, a1, 0, 0, 0, 0, 0, 0,
      -a1, 0, a2, 0, 0, 0, 0, 0,
      0, -a2, 0, a3, -a4, 0, 0, 0,
      0, 0, -a3, 0, 0, a4, 0, 0,
      0, 0, a4, 0, 0, -a3, 0, 0,
      0, 0, 0, -a4, a3, 0, -a2, 0,
      0, 0, 0, 0, 0, a2, 0, -a1,
      0, 0, 0, 0, 0, 0, a1, 0;
  return m;
}

// h_4 for n = 4 as a polynomial in (a_1..a_5, b_1..b_4).
inline double kt4_h4(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a5 = a[4];
  const double b1 = b[0], b2 = b[1], b3 = b[2], b4 = b[3];
  auto sq = [](double x) { return x * x; };
  const double t[4] = {sq(a1) + 0.5 * sq(a5) + std::pow(a5, 4), sq(a1) + sq(a2), sq(a2) + sq(a3) + sq(a4),
                       sq(a3) + sq(a4)};
  const double s = 4 * sq(a1) * sq(a2) + 4 * sq(a2) * sq(a4) + 4 * sq(a2) * sq(a3) + 12 * sq(a3) * sq(a4) +
                   8 * sq(a1) * std::pow(a5, 4) + 2 * sq(a1) * sq(a5) + 2 * std::pow(a3, 4) + 2 * std::pow(a4, 4) +
                   2 * std::pow(a1, 4) + 2 * std::pow(a2, 4) + std::pow(a5, 4) + 4 * std::pow(a5, 6) +
                   4 * std::pow(a5, 8);
  double h = std::pow(b1, 4) + std::pow(b2, 4) + std::pow(b3, 4) + std::pow(b4, 4);
  for (int i = 0; i < 4; ++i) h += 4 * t[i] * sq(b[i]);
  h += 4 * sq(a1) * b1 * b2 + 4 * sq(a2) * b2 * b3 + 4 * (sq(a3) - sq(a4)) * b3 * b4 + s;
  return h;
}

}  // namespace oracle
