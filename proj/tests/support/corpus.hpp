#pragma once

#include <random>

#include "pinv/matrix.hpp"
#include "pinv/oracle.hpp"

// Random integer-valued test matrices of prescribed rank, real and complex.
// Rank deficiency is constructed as a product of integer factors; candidates
// whose exact rank misses the target or whose conditioning proxy is too poor
// are redrawn so tolerance checks stay meaningful.
namespace testsupport {

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
T random_integer_scalar(Rng& rng, int lo, int hi) {
  if constexpr (pinv::is_complex_v<T>)
    return T(rand_int(rng, lo, hi), rand_int(rng, lo, hi));
  else
    return static_cast<T>(rand_int(rng, lo, hi));
}

template <typename T>
pinv::Matrix<T> random_integer_matrix(Rng& rng, pinv::index_t m, pinv::index_t n, int lo,
                                      int hi) {
  pinv::Matrix<T> a(m, n);
  for (pinv::index_t i = 0; i < m; ++i)
    for (pinv::index_t j = 0; j < n; ++j) a(i, j) = random_integer_scalar<T>(rng, lo, hi);
  return a;
}

// max|A| * max|A+| * max(m,n), a cheap stand-in for the condition number.
template <typename T>
double cond_proxy(const pinv::Matrix<T>& a) {
  const pinv::Matrix<T> x = pinv::oracle_pinv(a);
  return pinv::max_abs(a) * pinv::max_abs(x) * std::max(a.rows(), a.cols());
}

/// Integer-valued m x n matrix of exact rank `rank` with factor entries in
/// [lo, hi]; redraws until the exact rank matches and the conditioning proxy
/// stays below `max_cond`.
template <typename T>
pinv::Matrix<T> random_rank_matrix(Rng& rng, pinv::index_t m, pinv::index_t n,
                                   pinv::index_t rank, int lo, int hi,
                                   double max_cond = 1e8) {
  for (;;) {
    pinv::Matrix<T> a(m, n);
    if (rank >= std::min(m, n)) {
      a = random_integer_matrix<T>(rng, m, n, lo, hi);
    } else {
      const auto x = random_integer_matrix<T>(rng, m, rank, lo, hi);
      const auto y = random_integer_matrix<T>(rng, rank, n, lo, hi);
      for (pinv::index_t i = 0; i < m; ++i)
        for (pinv::index_t j = 0; j < n; ++j) {
          T acc{};
          for (pinv::index_t k = 0; k < rank; ++k) acc += x(i, k) * y(k, j);
          a(i, j) = acc;
        }
    }
    if (pinv::exact_rank(a) != rank) continue;
    if (cond_proxy(a) > max_cond) continue;
    return a;
  }
}

}  // namespace testsupport
