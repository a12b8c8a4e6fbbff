#include "birkhoff/dn_toda.hpp"

#include "birkhoff/errors.hpp"

#include <cmath>

namespace birkhoff {
namespace {

void require_n(long n) {
  if (n < 4) throw DomainError("D_n Toda requires n >= 4, got n = " + std::to_string(n));
}

}  // namespace

DnFlaschkaPoint::DnFlaschkaPoint(Eigen::VectorXd a_, Eigen::VectorXd b_)
    : a(std::move(a_)), b(std::move(b_)) {
  require_size(a.size(), b.size(), "DnFlaschkaPoint a");
  require_n(b.size());
}

Eigen::VectorXd DnFlaschkaPoint::packed() const {
  Eigen::VectorXd x(a.size() + b.size());
  x << a, b;
  return x;
}

DnFlaschkaPoint DnFlaschkaPoint::unpack(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw DimensionError("DnFlaschkaPoint::unpack: odd length");
  const Eigen::Index n = x.size() / 2;
  return DnFlaschkaPoint(x.head(n), x.tail(n));
}

double dn_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  require_size(p.size(), q.size(), "dn_hamiltonian p");
  require_n(q.size());
  const Eigen::Index n = q.size();
  double potential = std::exp(q[n - 2] + q[n - 1]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) potential += std::exp(q[i] - q[i + 1]);
  return 0.5 * p.squaredNorm() + potential;
}

Eigen::VectorXd dn_force(const Eigen::VectorXd& q) {
  require_n(q.size());
  const Eigen::Index n = q.size();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double e = std::exp(q[i] - q[i + 1]);
    f[i] -= e;
    f[i + 1] += e;
  }
  const double fork = std::exp(q[n - 2] + q[n - 1]);
  f[n - 2] -= fork;
  f[n - 1] -= fork;
  return f;
}

DnFlaschkaPoint dn_flaschka(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  require_size(p.size(), q.size(), "dn_flaschka p");
  require_n(q.size());
  const Eigen::Index n = q.size();
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a[i] = 0.5 * std::exp(0.5 * (q[i] - q[i + 1]));
  a[n - 1] = 0.5 * std::exp(0.5 * (q[n - 2] + q[n - 1]));
  return DnFlaschkaPoint(std::move(a), -0.5 * p);
}

DnFlaschkaPoint dn_vector_field(const DnFlaschkaPoint& x) {
  const int n = x.n();
  const Eigen::VectorXd& a = x.a;
  const Eigen::VectorXd& b = x.b;
  Eigen::VectorXd da(n), db(n);
  for (int i = 0; i + 1 < n; ++i) da[i] = a[i] * (b[i + 1] - b[i]);
  da[n - 1] = -a[n - 1] * (b[n - 2] + b[n - 1]);

  db[0] = 2.0 * a[0] * a[0];
  for (int i = 1; i < n; ++i) db[i] = 2.0 * (a[i] * a[i] - a[i - 1] * a[i - 1]);
  db[n - 2] += 2.0 * a[n - 1] * a[n - 1];
  return DnFlaschkaPoint(std::move(da), std::move(db));
}

Eigen::MatrixXd build_L(const DnFlaschkaPoint& x) {
  const int n = x.n();
  const int m = 2 * n;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    L(i, i) = x.b[i];
    L(m - 1 - i, m - 1 - i) = -x.b[i];
  }
  for (int i = 0; i + 1 < n; ++i) {
    L(i, i + 1) = L(i + 1, i) = x.a[i];
    L(m - 2 - i, m - 1 - i) = L(m - 1 - i, m - 2 - i) = -x.a[i];
  }
  // a_n couples (n-1, n+1) with a minus sign and its mirror (n, n+2) with a plus (1-based).
  L(n - 2, n) = L(n, n - 2) = -x.a[n - 1];
  L(n - 1, n + 1) = L(n + 1, n - 1) = x.a[n - 1];
  return L;
}

Eigen::MatrixXd build_B(const DnFlaschkaPoint& x) {
  const Eigen::MatrixXd upper = build_L(x).triangularView<Eigen::StrictlyUpper>();
  return upper - upper.transpose();
}

Eigen::MatrixXd build_L2(const DnFlaschkaPoint& x) {
  const Eigen::MatrixXd L = build_L(x);
  return L * L;
}

std::vector<double> dn_invariants(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() % 2 != 0) {
    throw DimensionError("dn_invariants: L must be square of even order");
  }
  const Eigen::Index n = L.rows() / 2;
  std::vector<double> out;
  const Eigen::MatrixXd L2 = L * L;
  Eigen::MatrixXd power = L2;
  for (Eigen::Index k = 1; k < n; ++k) {
    out.push_back(power.trace() / static_cast<double>(2 * k));
    power = power * L2;
  }
  // The eigenvalues pair as ±λ, so det L = (-1)^n Π λ².
  const double signed_det = (n % 2 == 0 ? 1.0 : -1.0) * L.partialPivLu().determinant();
  const double scale = std::max(1.0, std::pow(L.norm(), static_cast<double>(2 * n)));
  if (signed_det < -1e-9 * scale) {
    throw InvariantError("dn_invariants: (-1)^n det L = " + std::to_string(signed_det) +
                         " is negative; L is not a D_n Lax matrix");
  }
  out.push_back(std::sqrt(std::max(signed_det, 0.0)));
  return out;
}

Eigen::MatrixXd dn_invariant_gradients(const DnFlaschkaPoint& x) {
  const int n = x.n();
  const Eigen::MatrixXd L = build_L(x);
  std::vector<Eigen::MatrixXd> odd_powers;  // L, L³, ..., L^{2n-3}
  Eigen::MatrixXd power = L;
  const Eigen::MatrixXd L2 = L * L;
  for (int k = 1; k < n; ++k) {
    odd_powers.push_back(power);
    power = power * L2;
  }
  const auto invariants = dn_invariants(L);
  const double pn = invariants.back();
  const Eigen::MatrixXd L_inv = L.partialPivLu().inverse();

  Eigen::MatrixXd grad(n, 2 * n);
  for (int c = 0; c < 2 * n; ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * n);
    e[c] = 1.0;
    const Eigen::MatrixXd dL = build_L(DnFlaschkaPoint::unpack(e));
    for (int k = 0; k + 1 < n; ++k) grad(k, c) = (odd_powers[static_cast<std::size_t>(k)] * dL).trace();
    grad(n - 1, c) = 0.5 * pn * (L_inv * dL).trace();
  }
  return grad;
}

double dn_lax_residual(const DnFlaschkaPoint& x) {
  const Eigen::MatrixXd L = build_L(x);
  const Eigen::MatrixXd B = build_B(x);
  const Eigen::MatrixXd L_dot = build_L(dn_vector_field(x));
  return (L_dot - (B * L - L * B)).norm();
}

double dn_quadratic_lax_residual(const DnFlaschkaPoint& x) {
  const Eigen::MatrixXd L = build_L(x);
  const Eigen::MatrixXd B = build_B(x);
  const Eigen::MatrixXd L_dot = build_L(dn_vector_field(x));
  const Eigen::MatrixXd L2 = L * L;
  return (L_dot * L + L * L_dot - (B * L2 - L2 * B)).norm();
}

}  // namespace birkhoff
