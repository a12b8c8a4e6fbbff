#pragma once

// Random test points for the verification battery. Flaschka coordinates are
// drawn uniformly with a_i in (0.1, 1.5] and b_i in [-1.5, 1.5]; canonical
// coordinates uniformly in [-1, 1]. All draws come from Pcg64 in coordinate order.

#include "birkhoff/dn_toda.hpp"
#include "birkhoff/kt_system.hpp"
#include "birkhoff/random.hpp"

#include <Eigen/Dense>

namespace birkhoff {

inline Eigen::VectorXd draw_uniform(Pcg64& rng, Eigen::Index size, double lo, double hi) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline Eigen::VectorXd draw_positive(Pcg64& rng, Eigen::Index size, double lo = 0.1, double hi = 1.5) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = rng.uniform_left_open(lo, hi);
  return v;
}

inline KtFlaschkaPoint random_kt_point(Pcg64& rng, int n) {
  Eigen::VectorXd a = draw_positive(rng, n + 1);
  return KtFlaschkaPoint(std::move(a), draw_uniform(rng, n, -1.5, 1.5));
}

inline DnFlaschkaPoint random_dn_point(Pcg64& rng, int n) {
  Eigen::VectorXd a = draw_positive(rng, n);
  return DnFlaschkaPoint(std::move(a), draw_uniform(rng, n, -1.5, 1.5));
}

/// Stacked (q, p).
inline Eigen::VectorXd random_canonical_point(Pcg64& rng, int n) {
  return draw_uniform(rng, 2 * n, -1.0, 1.0);
}

}  // namespace birkhoff
