#pragma once

// Exponential-interaction systems H = ½(p,p) + Σ exp((v_i, q)) described by
// their exponent vectors ("spectrum"), with the Dynkin-type diagram data,
// the necessary condition for Birkhoff integrability, and the unscaled Flaschka flow
//   a_i = -exp((v_i, q)),  b_i = (v_i, p),
//   ȧ_k = a_k b_k,         ḃ_k = Σ_i M_ki a_i.

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace birkhoff {

class Spectrum {
 public:
  /// Throws DomainError for an empty set or a zero vector and DimensionError
  /// when a vector does not have `dimension` coordinates.
  Spectrum(int dimension, std::vector<Eigen::VectorXd> vectors);

  static Spectrum from_rows(const Eigen::MatrixXd& rows);

  int dimension() const noexcept { return dimension_; }
  int size() const noexcept { return static_cast<int>(vectors_.size()); }
  const Eigen::VectorXd& operator[](int i) const { return vectors_.at(static_cast<std::size_t>(i)); }
  const std::vector<Eigen::VectorXd>& vectors() const noexcept { return vectors_; }

  /// N×n matrix whose rows are the vectors.
  Eigen::MatrixXd rows() const;

 private:
  int dimension_;
  std::vector<Eigen::VectorXd> vectors_;
};

/// M_ij = (v_i, v_j). Computed on the upper triangle and mirrored.
Eigen::MatrixXd gram(const Spectrum& s);

/// 2(v_i, v_j) / (v_i, v_i).
double kt_ratio(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj);

struct RatioCheck {
  int maximal = 0;  // index of the maximal vector v_i
  int other = 0;    // index of v_j
  double ratio = 0.0;
  bool pass = false;
};

struct ClassificationReport {
  std::vector<int> maximal;
  std::vector<RatioCheck> checks;
  bool pass = true;

  std::vector<RatioCheck> violations() const;
  std::string to_text(const Spectrum& s) const;
};

/// Evaluates the necessary condition for Birkhoff integrability: for every
/// maximal v_i and every v_j independent of it, 2(v_i,v_j)/(v_i,v_i) must be
/// a nonpositive integer.
ClassificationReport check_birkhoff_necessary(const Spectrum& s);

/// Candidates v for which s ∪ {v} still satisfies the necessary condition.
/// A spectrum is complete relative to the list when this is empty.
std::vector<Eigen::VectorXd> completion_candidates(const Spectrum& s,
                                                   const std::vector<Eigen::VectorXd>& candidates);

struct DynkinDiagram {
  /// Squared lengths divided by their greatest common rational divisor. When
  /// the squared lengths are not commensurable they are divided by the minimum.
  std::vector<double> weights;
  /// Nonzero multiplicities keyed by (i, j) with i < j.
  std::map<std::pair<int, int>, int> edges;

  int multiplicity(int i, int j) const;
  std::string to_text() const;
};

/// Throws ClassificationError naming the pair when some 4(v_i,v_j)²/((v_i,v_i)(v_j,v_j))
/// is not within 1e-9 of an integer.
DynkinDiagram dynkin_diagram(const Spectrum& s);

struct GeneralFlaschkaPoint {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

GeneralFlaschkaPoint generalized_flaschka(const Spectrum& s, const Eigen::VectorXd& q,
                                          const Eigen::VectorXd& p);

/// Time derivative (ȧ, ḃ) of the polynomial system.
GeneralFlaschkaPoint polynomial_flow(const Spectrum& s, const GeneralFlaschkaPoint& x);

/// λ with Σ λ_i v_i = 0. Construct through `make`, which checks the relation.
class CasimirDirection {
 public:
  static CasimirDirection make(const Spectrum& s, Eigen::VectorXd lambda);
  const Eigen::VectorXd& lambda() const noexcept { return lambda_; }

 private:
  explicit CasimirDirection(Eigen::VectorXd lambda) : lambda_(std::move(lambda)) {}
  Eigen::VectorXd lambda_;
};

/// Orthonormal basis of {λ : Σ λ_i v_i = 0}; singular values below
/// 1e-10·σ_max count as zero.
std::vector<CasimirDirection> casimir_directions(const Spectrum& s);

struct CasimirValues {
  double f1 = 0.0;
  /// Π|a_i|^λ_i, times Π sign(a_i)^λ_i when `signed_f2`.
  double f2 = 1.0;
  /// True iff every λ_i is an integer, so the sign is well defined.
  bool signed_f2 = false;
};

CasimirValues casimir_values(const Spectrum& s, const CasimirDirection& dir,
                             const GeneralFlaschkaPoint& x);

/// Exponent vectors of the D_n lattice with the wall terms exp(-q_1), exp(-2q_1): e_i - e_{i+1} (i < n),
/// e_{n-1} + e_n, -e_1, -2e_1. Requires n >= 4.
Spectrum kt_spectrum(int n);

/// Simple roots e_i - e_{i+1} of A_{n-1}, as n-1 vectors in R^n.
Spectrum a_chain_spectrum(int n);

/// Simple roots of D_n: e_i - e_{i+1} (i < n), e_{n-1} + e_n.
Spectrum dn_spectrum(int n);

}  // namespace birkhoff
