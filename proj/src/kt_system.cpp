#include "birkhoff/kt_system.hpp"

#include "birkhoff/errors.hpp"
#include "birkhoff/spectrum.hpp"

#include <cmath>
#include <complex>

namespace birkhoff {
namespace {

using cd = std::complex<double>;
const double kSqrt2 = std::sqrt(2.0);

void require_n(long n) {
  if (n < 4) throw DomainError("KT system requires n >= 4, got n = " + std::to_string(n));
}

}  // namespace

KtFlaschkaPoint::KtFlaschkaPoint(Eigen::VectorXd a_, Eigen::VectorXd b_)
    : a(std::move(a_)), b(std::move(b_)) {
  require_size(a.size(), b.size() + 1, "KtFlaschkaPoint a");
  require_n(b.size());
}

Eigen::VectorXd KtFlaschkaPoint::packed() const {
  Eigen::VectorXd x(a.size() + b.size());
  x << a, b;
  return x;
}

KtFlaschkaPoint KtFlaschkaPoint::unpack(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 1) throw DimensionError("KtFlaschkaPoint::unpack: length must be 2n+1");
  const Eigen::Index n = (x.size() - 1) / 2;
  return KtFlaschkaPoint(x.head(n + 1), x.tail(n));
}

DnFlaschkaPoint KtFlaschkaPoint::dn_part() const { return DnFlaschkaPoint(a.head(n()), b); }

double kt_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  require_size(p.size(), q.size(), "kt_hamiltonian p");
  require_n(q.size());
  return dn_hamiltonian(q, p) + std::exp(-q[0]) + std::exp(-2.0 * q[0]);
}

Eigen::VectorXd kt_force(const Eigen::VectorXd& q) {
  Eigen::VectorXd f = dn_force(q);
  f[0] += std::exp(-q[0]) + 2.0 * std::exp(-2.0 * q[0]);
  return f;
}

KtFlaschkaPoint kt_flaschka(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  const DnFlaschkaPoint dn = dn_flaschka(q, p);
  Eigen::VectorXd a(q.size() + 1);
  a << dn.a, std::exp(-0.5 * q[0]) / kSqrt2;
  return KtFlaschkaPoint(std::move(a), dn.b);
}

KtFlaschkaPoint kt_vector_field(const KtFlaschkaPoint& x, EqgenVariant variant) {
  const int n = x.n();
  const DnFlaschkaPoint dn = dn_vector_field(x.dn_part());
  const double c = x.wall();
  const double c2 = c * c;
  Eigen::VectorXd da(n + 1);
  da << dn.a, c * x.b[0];
  Eigen::VectorXd db = dn.b;
  db[0] -= c2 + 4.0 * (variant == EqgenVariant::corrected ? c2 * c2 : c2);
  return KtFlaschkaPoint(std::move(da), std::move(db));
}

double kt_hamiltonian_flaschka(const KtFlaschkaPoint& x) {
  const int n = x.n();
  const double c2 = x.wall() * x.wall();
  return x.b.squaredNorm() + 2.0 * x.a.head(n).squaredNorm() + c2 + 2.0 * c2 * c2;
}

Eigen::MatrixXcd build_A(const KtFlaschkaPoint& x) {
  const int m = 2 * x.n();
  Eigen::MatrixXcd A = build_L2(x.dn_part()).cast<cd>();
  const double c2 = x.wall() * x.wall();
  const double diag = c2 + 2.0 * c2 * c2;
  const cd off(0.0, kSqrt2 * x.a[0] * c2);
  A(0, 0) += diag;
  A(m - 1, m - 1) += diag;
  A(0, 1) += off;
  A(m - 1, m - 2) += off;
  A(1, 0) -= off;
  A(m - 2, m - 1) -= off;
  return A;
}

Eigen::MatrixXcd build_C(const KtFlaschkaPoint& x) {
  const int m = 2 * x.n();
  Eigen::MatrixXcd C = build_B(x.dn_part()).cast<cd>();
  const cd corner(0.0, kSqrt2 * x.wall() * x.wall());
  C(0, 0) += corner;
  C(m - 1, m - 1) += corner;
  return C;
}

Eigen::MatrixXcd build_A_derivative(const KtFlaschkaPoint& x, const Eigen::VectorXd& dx) {
  const int n = x.n();
  const int m = 2 * n;
  require_size(dx.size(), 2 * n + 1, "build_A_derivative dx");
  const KtFlaschkaPoint t = KtFlaschkaPoint::unpack(dx);
  const Eigen::MatrixXd L = build_L(x.dn_part());
  const Eigen::MatrixXd dL = build_L(t.dn_part());
  Eigen::MatrixXcd dA = (dL * L + L * dL).cast<cd>();

  const double c = x.wall();
  const double dc = t.wall();
  const double ddiag = (2.0 * c + 8.0 * c * c * c) * dc;
  const cd doff(0.0, kSqrt2 * (t.a[0] * c * c + 2.0 * x.a[0] * c * dc));
  dA(0, 0) += ddiag;
  dA(m - 1, m - 1) += ddiag;
  dA(0, 1) += doff;
  dA(m - 1, m - 2) += doff;
  dA(1, 0) -= doff;
  dA(m - 2, m - 1) -= doff;
  return dA;
}

std::vector<double> kt_integrals(const KtFlaschkaPoint& x) {
  const int n = x.n();
  const Eigen::MatrixXcd A = build_A(x);
  const double norm = A.norm();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  Eigen::MatrixXcd power = A;
  for (int i = 1; i <= n; ++i) {
    const cd tr = 0.5 * power.trace();
    const double scale = std::max(1.0, std::pow(norm, i));
    if (std::abs(tr.imag()) > 1e-10 * scale) {
      throw InvariantError("kt_integrals: Tr A^" + std::to_string(i) +
                           " has imaginary part " + std::to_string(tr.imag()));
    }
    out.push_back(tr.real());
    if (i < n) power = power * A;
  }
  return out;
}

Eigen::MatrixXd kt_integral_gradients(const KtFlaschkaPoint& x) {
  const int n = x.n();
  const int dim = 2 * n + 1;
  const Eigen::MatrixXcd A = build_A(x);
  std::vector<Eigen::MatrixXcd> powers;  // A^0 .. A^{n-1}
  powers.push_back(Eigen::MatrixXcd::Identity(2 * n, 2 * n));
  for (int i = 1; i < n; ++i) powers.push_back(powers.back() * A);

  Eigen::MatrixXd grad(n, dim);
  for (int c = 0; c < dim; ++c) {
    const Eigen::MatrixXcd dA = build_A_derivative(x, Eigen::VectorXd::Unit(dim, c));
    for (int i = 1; i <= n; ++i) {
      // Tr(P dA) without forming the product.
      const cd tr = (powers[static_cast<std::size_t>(i - 1)].transpose().cwiseProduct(dA)).sum();
      grad(i - 1, c) = 0.5 * i * tr.real();
    }
  }
  return grad;
}

double kt_lax_residual(const KtFlaschkaPoint& x, EqgenVariant variant) {
  const Eigen::MatrixXcd A = build_A(x);
  const Eigen::MatrixXcd C = build_C(x);
  const Eigen::MatrixXcd A_dot = build_A_derivative(x, kt_vector_field(x, variant).packed());
  return (A_dot - (C * A - A * C)).norm();
}

double kt_lax_residual_fd(const KtFlaschkaPoint& x, double step) {
  const Eigen::VectorXd v = kt_vector_field(x).packed();
  const Eigen::VectorXd p = x.packed();
  const Eigen::MatrixXcd A_dot = (build_A(KtFlaschkaPoint::unpack(p + step * v)) -
                                  build_A(KtFlaschkaPoint::unpack(p - step * v))) /
                                 (2.0 * step);
  const Eigen::MatrixXcd A = build_A(x);
  const Eigen::MatrixXcd C = build_C(x);
  return (A_dot - (C * A - A * C)).norm();
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_cutoff) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  while (rank < s.size() && s[rank] > rel_cutoff * s[0]) ++rank;
  return rank;
}

int gradient_rank(const Eigen::MatrixXd& gradients, double rel_cutoff) {
  Eigen::MatrixXd m = gradients;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) m.row(i) /= norm;
  }
  return numerical_rank(m, rel_cutoff);
}

int kt_independence_rank(const KtFlaschkaPoint& x) {
  return gradient_rank(kt_integral_gradients(x), 1e-8);
}

Eigen::VectorXd kt_casimir_exponents(int n) {
  require_n(n);
  std::vector<Eigen::VectorXd> half;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = 0.5;
    v[i + 1] = -0.5;
    half.push_back(v);
  }
  Eigen::VectorXd fork = Eigen::VectorXd::Zero(n);
  fork[n - 2] = fork[n - 1] = 0.5;
  half.push_back(fork);
  Eigen::VectorXd wall = Eigen::VectorXd::Zero(n);
  wall[0] = -0.5;
  half.push_back(wall);

  const auto dirs = casimir_directions(Spectrum(n, std::move(half)));
  if (dirs.size() != 1) throw InvariantError("expected a one-dimensional Casimir direction");
  Eigen::VectorXd e = dirs.front().lambda();
  e /= e.cwiseAbs().minCoeff();
  if (e.sum() < 0.0) e = -e;
  for (auto& v : e) v = std::round(v);
  return e;
}

double kt_casimir(const KtFlaschkaPoint& x) {
  const Eigen::VectorXd e = kt_casimir_exponents(x.n());
  double q = 1.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) q *= std::pow(x.a[i], e[i]);
  return q;
}

Eigen::VectorXd kt_casimir_gradient(const KtFlaschkaPoint& x) {
  const int n = x.n();
  const Eigen::VectorXd e = kt_casimir_exponents(n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n + 1);
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    double partial = e[i] * std::pow(x.a[i], e[i] - 1.0);
    for (Eigen::Index j = 0; j < e.size(); ++j) {
      if (j != i) partial *= std::pow(x.a[j], e[j]);
    }
    g[i] = partial;
  }
  return g;
}

}  // namespace birkhoff
