#include "birkhoff/spectrum.hpp"

#include "birkhoff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace birkhoff {
namespace {

constexpr double kIntegerTol = 1e-9;
constexpr double kDirectionTol = 1e-12;
constexpr double kNullspaceCutoff = 1e-10;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kIntegerTol; }

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.dot(v) / (u.norm() * v.norm());
}

struct Rational {
  long long num;
  long long den;
};

// Best rational approximation by continued fractions, denominators <= 1e6.
std::optional<Rational> to_rational(double x) {
  constexpr long long kMaxDen = 1000000;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(r);
    const auto c = static_cast<long long>(fl);
    const long long h2 = c * h1 + h0;
    const long long k2 = c * k1 + k0;
    if (k2 > kMaxDen) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <=
        kIntegerTol * std::max(1.0, std::abs(x))) {
      return Rational{h1, k1};
    }
    const double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

void require_size(long actual, long expected, const char* what) {
  if (actual != expected) {
    std::ostringstream os;
    os << what << ": expected length " << expected << ", got " << actual;
    throw DimensionError(os.str());
  }
}

Spectrum::Spectrum(int dimension, std::vector<Eigen::VectorXd> vectors)
    : dimension_(dimension), vectors_(std::move(vectors)) {
  if (dimension_ < 1) throw DomainError("spectrum dimension must be positive");
  if (vectors_.empty()) throw DomainError("spectrum must contain at least one vector");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    require_size(vectors_[i].size(), dimension_, "spectrum vector");
    if (vectors_[i].squaredNorm() == 0.0) {
      throw DomainError("spectrum vector " + std::to_string(i + 1) + " is zero");
    }
  }
}

Spectrum Spectrum::from_rows(const Eigen::MatrixXd& rows) {
  std::vector<Eigen::VectorXd> vs;
  vs.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) vs.emplace_back(rows.row(i).transpose());
  return Spectrum(static_cast<int>(rows.cols()), std::move(vs));
}

Eigen::MatrixXd Spectrum::rows() const {
  Eigen::MatrixXd m(size(), dimension_);
  for (int i = 0; i < size(); ++i) m.row(i) = vectors_[static_cast<std::size_t>(i)].transpose();
  return m;
}

Eigen::MatrixXd gram(const Spectrum& s) {
  const int n = s.size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m(i, j) = s[i].dot(s[j]);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

double kt_ratio(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj) {
  require_size(vj.size(), vi.size(), "kt_ratio");
  const double len2 = vi.squaredNorm();
  if (len2 == 0.0) throw DomainError("kt_ratio: v_i is the zero vector");
  return 2.0 * vi.dot(vj) / len2;
}

std::vector<RatioCheck> ClassificationReport::violations() const {
  std::vector<RatioCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const RatioCheck& c) { return !c.pass; });
  return out;
}

std::string ClassificationReport::to_text(const Spectrum& s) const {
  auto fmt_vec = [](const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << '(';
    for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    os << ')';
    return os.str();
  };
  std::ostringstream os;
  os << "maximal vectors:";
  for (int i : maximal) os << " v" << i + 1 << '=' << fmt_vec(s[i]);
  os << '\n';
  for (const auto& c : checks) {
    os << "  v" << c.maximal + 1 << " vs v" << c.other + 1 << ": ratio " << c.ratio
       << (c.pass ? "  pass" : "  FAIL") << '\n';
  }
  os << "necessary condition: " << (pass ? "pass" : "fail") << '\n';
  return os.str();
}

ClassificationReport check_birkhoff_necessary(const Spectrum& s) {
  ClassificationReport report;
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    bool is_maximal = true;
    for (int j = 0; j < n && is_maximal; ++j) {
      if (j == i) continue;
      if (cosine(s[i], s[j]) > 1.0 - kDirectionTol &&
          s[j].norm() > s[i].norm() * (1.0 + kDirectionTol)) {
        is_maximal = false;
      }
    }
    if (!is_maximal) continue;
    report.maximal.push_back(i);
    for (int j = 0; j < n; ++j) {
      if (j == i || std::abs(cosine(s[i], s[j])) > 1.0 - kDirectionTol) continue;
      RatioCheck c;
      c.maximal = i;
      c.other = j;
      c.ratio = kt_ratio(s[i], s[j]);
      c.pass = near_integer(c.ratio) && std::round(c.ratio) <= 0.0;
      report.pass = report.pass && c.pass;
      report.checks.push_back(c);
    }
  }
  return report;
}

std::vector<Eigen::VectorXd> completion_candidates(const Spectrum& s,
                                                   const std::vector<Eigen::VectorXd>& candidates) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : candidates) {
    std::vector<Eigen::VectorXd> extended = s.vectors();
    extended.push_back(v);
    if (check_birkhoff_necessary(Spectrum(s.dimension(), std::move(extended))).pass) {
      out.push_back(v);
    }
  }
  return out;
}

int DynkinDiagram::multiplicity(int i, int j) const {
  if (i == j) return 0;
  const auto it = edges.find({std::min(i, j), std::max(i, j)});
  return it == edges.end() ? 0 : it->second;
}

std::string DynkinDiagram::to_text() const {
  std::ostringstream os;
  os << "weights:";
  for (double w : weights) os << ' ' << w;
  os << "\nedges:\n";
  for (const auto& [key, m] : edges) {
    os << "  v" << key.first + 1 << " -- v" << key.second + 1 << " x" << m << '\n';
  }
  return os.str();
}

DynkinDiagram dynkin_diagram(const Spectrum& s) {
  const Eigen::MatrixXd m = gram(s);
  const int n = s.size();
  DynkinDiagram d;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double value = 4.0 * m(i, j) * m(i, j) / (m(i, i) * m(j, j));
      if (!near_integer(value)) {
        std::ostringstream os;
        os << "edge multiplicity between v" << i + 1 << " and v" << j + 1 << " is " << value
           << ", not an integer";
        throw ClassificationError(os.str());
      }
      const int mult = static_cast<int>(std::lround(value));
      if (mult != 0) d.edges[{i, j}] = mult;
    }
  }

  std::vector<Rational> lengths;
  for (int i = 0; i < n; ++i) {
    if (auto r = to_rational(m(i, i))) lengths.push_back(*r);
  }
  double divisor = m.diagonal().minCoeff();
  if (static_cast<int>(lengths.size()) == n) {
    long long num = 0, den = 1;
    for (const auto& r : lengths) {
      num = std::gcd(num, r.num);
      den = std::lcm(den, r.den);
    }
    divisor = static_cast<double>(num) / static_cast<double>(den);
  }
  d.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double w = m(i, i) / divisor;
    d.weights[static_cast<std::size_t>(i)] = near_integer(w) ? std::round(w) : w;
  }
  return d;
}

GeneralFlaschkaPoint generalized_flaschka(const Spectrum& s, const Eigen::VectorXd& q,
                                          const Eigen::VectorXd& p) {
  require_size(q.size(), s.dimension(), "generalized_flaschka q");
  require_size(p.size(), s.dimension(), "generalized_flaschka p");
  const Eigen::MatrixXd v = s.rows();
  GeneralFlaschkaPoint x;
  x.a = -(v * q).array().exp();
  x.b = v * p;
  return x;
}

GeneralFlaschkaPoint polynomial_flow(const Spectrum& s, const GeneralFlaschkaPoint& x) {
  require_size(x.a.size(), s.size(), "polynomial_flow a");
  require_size(x.b.size(), s.size(), "polynomial_flow b");
  GeneralFlaschkaPoint dx;
  dx.a = x.a.cwiseProduct(x.b);
  dx.b = gram(s) * x.a;
  return dx;
}

CasimirDirection CasimirDirection::make(const Spectrum& s, Eigen::VectorXd lambda) {
  require_size(lambda.size(), s.size(), "casimir direction");
  const Eigen::VectorXd combo = s.rows().transpose() * lambda;
  if (combo.norm() > 1e-10 * std::max(1.0, lambda.norm())) {
    throw DomainError("lambda does not annihilate the spectrum: |sum lambda_i v_i| = " +
                      std::to_string(combo.norm()));
  }
  return CasimirDirection(std::move(lambda));
}

std::vector<CasimirDirection> casimir_directions(const Spectrum& s) {
  const Eigen::MatrixXd vt = s.rows().transpose();  // n × N
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vt, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = kNullspaceCutoff * sigma[0];
  int rank = 0;
  while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
  std::vector<CasimirDirection> out;
  for (int k = rank; k < s.size(); ++k) out.push_back(CasimirDirection::make(s, svd.matrixV().col(k)));
  return out;
}

CasimirValues casimir_values(const Spectrum& s, const CasimirDirection& dir,
                             const GeneralFlaschkaPoint& x) {
  const Eigen::VectorXd& lambda = dir.lambda();
  require_size(lambda.size(), s.size(), "casimir_values lambda");
  require_size(x.a.size(), s.size(), "casimir_values a");
  require_size(x.b.size(), s.size(), "casimir_values b");

  CasimirValues out;
  out.f1 = lambda.dot(x.b);
  out.signed_f2 = std::all_of(lambda.begin(), lambda.end(), near_integer);
  double log_mag = 0.0;
  int negatives = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] == 0.0) continue;
    if (x.a[i] == 0.0) {
      if (lambda[i] < 0.0) {
        throw DomainError("casimir_values: a_" + std::to_string(i + 1) +
                          " = 0 with a negative exponent");
      }
      out.f2 = 0.0;
      return out;
    }
    log_mag += lambda[i] * std::log(std::abs(x.a[i]));
    if (x.a[i] < 0.0 && std::lround(lambda[i]) % 2 != 0) ++negatives;
  }
  out.f2 = std::exp(log_mag);
  if (out.signed_f2 && negatives % 2 == 1) out.f2 = -out.f2;
  return out;
}

Spectrum kt_spectrum(int n) {
  if (n < 4) throw DomainError("kt_spectrum requires n >= 4, got " + std::to_string(n));
  std::vector<Eigen::VectorXd> vs;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = 1.0;
    v[i + 1] = -1.0;
    vs.push_back(v);
  }
  Eigen::VectorXd fork = Eigen::VectorXd::Zero(n);
  fork[n - 2] = 1.0;
  fork[n - 1] = 1.0;
  vs.push_back(fork);
  Eigen::VectorXd wall = Eigen::VectorXd::Zero(n);
  wall[0] = -1.0;
  vs.push_back(wall);
  vs.push_back(2.0 * wall);
  return Spectrum(n, std::move(vs));
}

Spectrum a_chain_spectrum(int n) {
  if (n < 2) throw DomainError("a_chain_spectrum requires n >= 2");
  std::vector<Eigen::VectorXd> vs;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = 1.0;
    v[i + 1] = -1.0;
    vs.push_back(v);
  }
  return Spectrum(n, std::move(vs));
}

Spectrum dn_spectrum(int n) {
  if (n < 4) throw DomainError("dn_spectrum requires n >= 4");
  std::vector<Eigen::VectorXd> vs = a_chain_spectrum(n).vectors();
  Eigen::VectorXd fork = Eigen::VectorXd::Zero(n);
  fork[n - 2] = 1.0;
  fork[n - 1] = 1.0;
  vs.push_back(fork);
  return Spectrum(n, std::move(vs));
}

}  // namespace birkhoff
