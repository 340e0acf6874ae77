#pragma once

#include <numeric>
#include <vector>

#include "pinv/matrix.hpp"
#include "pinv/pivot.hpp"

namespace pinv {

/// Lifecycle of the overwritten storage.
///
///  - Raw:          fresh LU factorization; every scheme starts here.
///  - Consumed:     pinv_apply destroyed the leading rows of L; no further
///                  scheme may run on this storage.
///  - ColProjector: pivot block holds the LDL* factor of U U*; reusable for
///                  repeated A+A·B applications.
///  - RowProjector: L rescaled to unit pivots and the pivot block's upper
///                  triangle holds the transposed LDL* factor of L*L;
///                  reusable for repeated A A+·B applications.
enum class FactorState { Raw, Consumed, ColProjector, RowProjector };

/// Result of the rank-revealing factorization PA = LU, stored compactly:
/// the matrix is overwritten in place and L and U are defined implicitly by
/// `rho` (row permutation), `gamma` (pivot columns, first `rank` entries
/// meaningful, strictly increasing) and `rank`.
///
/// Row p of U has an implicit 1 at column gamma[p], zeros to its left, and
/// the stored entries storage(rho[p], q) for q > gamma[p]. Column q of L is
/// storage(rho[p], gamma[q]) for p >= q, zeros above.
///
/// A Factorization is immutable between operations and safe to read from
/// several threads; factor() and the schemes that advance its state need
/// exclusive access.
template <typename T>
struct Factorization {
  Matrix<T> storage;
  std::vector<index_t> rho;
  std::vector<index_t> gamma;
  index_t rank = 0;
  FactorState state = FactorState::Raw;

  index_t rows() const { return storage.rows(); }
  index_t cols() const { return storage.cols(); }
};

namespace detail {

template <bool TrackContext>
inline PivotCandidate<double> eliminate_entry(const Matrix<double>& s,
                                              const std::vector<index_t>& rho,
                                              const std::vector<index_t>& gamma,
                                              index_t rank, index_t row, index_t col) {
  PivotCandidate<double> cand;
  double acc = s(row, col);
  if constexpr (TrackContext) {
    cand.ctx_re = std::fabs(acc);
    cand.terms_re = (acc != 0.0) ? 1 : 0;
  }
  for (index_t k = 0; k < rank; ++k) {
    const double a = s(row, gamma[k]);
    const double b = s(rho[k], col);
    acc -= a * b;
    if constexpr (TrackContext) {
      cand.ctx_re += std::fabs(a) * std::fabs(b);
      if (a != 0.0 && b != 0.0) ++cand.terms_re;
    }
  }
  cand.value = acc;
  return cand;
}

template <bool TrackContext>
inline PivotCandidate<Complex> eliminate_entry(const Matrix<Complex>& s,
                                               const std::vector<index_t>& rho,
                                               const std::vector<index_t>& gamma,
                                               index_t rank, index_t row, index_t col) {
  PivotCandidate<Complex> cand;
  Complex acc = s(row, col);
  if constexpr (TrackContext) {
    cand.ctx_re = std::fabs(acc.real());
    cand.ctx_im = std::fabs(acc.imag());
    cand.terms_re = (acc.real() != 0.0) ? 1 : 0;
    cand.terms_im = (acc.imag() != 0.0) ? 1 : 0;
  }
  for (index_t k = 0; k < rank; ++k) {
    const Complex a = s(row, gamma[k]);
    const Complex b = s(rho[k], col);
    acc -= a * b;
    if constexpr (TrackContext) {
      const double ar = std::fabs(a.real()), ai = std::fabs(a.imag());
      const double br = std::fabs(b.real()), bi = std::fabs(b.imag());
      cand.ctx_re += ar * br + ai * bi;
      cand.ctx_im += ar * bi + ai * br;
      if (a.real() != 0.0 && b.real() != 0.0) ++cand.terms_re;
      if (a.imag() != 0.0 && b.imag() != 0.0) ++cand.terms_re;
      if (a.real() != 0.0 && b.imag() != 0.0) ++cand.terms_im;
      if (a.imag() != 0.0 && b.real() != 0.0) ++cand.terms_im;
    }
  }
  cand.value = acc;
  return cand;
}

template <typename T>
inline CoarseBound initial_coarse_bound(const Matrix<T>& s, const PivotPolicy& policy) {
  const index_t kappa = std::min(s.rows(), s.cols());
  if constexpr (is_complex_v<T>) {
    double mu_re = 0.0, mu_im = 0.0;
    for (index_t i = 0; i < s.rows(); ++i)
      for (index_t j = 0; j < s.cols(); ++j) {
        mu_re = std::max(mu_re, std::fabs(s(i, j).real()));
        mu_im = std::max(mu_im, std::fabs(s(i, j).imag()));
      }
    return CoarseBound::for_complex(kappa, policy.unit, mu_re, mu_im);
  } else {
    double mu = 0.0;
    for (index_t i = 0; i < s.rows(); ++i)
      for (index_t j = 0; j < s.cols(); ++j) mu = std::max(mu, std::fabs(s(i, j)));
    return CoarseBound::for_real(kappa, policy.unit, mu);
  }
}

}  // namespace detail

/// Rank-revealing LU factorization with scaled row pivoting, in place.
///
/// The matrix is taken by value: move it in to factor without a copy. Row
/// scales are the infinity norms of the original rows and are never updated;
/// rows of zero norm are never eligible as pivots. At each column the
/// eliminated candidate entries are screened by `policy`, the surviving entry
/// of largest scaled magnitude (earliest row on ties) becomes the pivot, and
/// the pivot row is normalized over the remaining columns.
///
/// A matrix whose every column is rejected comes back with rank == 0 (still a
/// valid object); callers decide whether that is an error. All three policies
/// perform bit-identical arithmetic, so factorizations that choose the same
/// pivots have bit-identical storage.
template <typename T>
Factorization<T> factor(Matrix<T> a, const PivotPolicy& policy) {
  if (a.rows() < 1 || a.cols() < 1) throw ShapeError("factor: empty matrix");
  if (!all_finite(a)) throw std::invalid_argument("factor: non-finite entry in input");
  if (policy.kind == PivotKind::Simple && !(policy.eps >= 0.0))
    throw std::invalid_argument("factor: simple-policy eps must be nonnegative");

  Factorization<T> f;
  f.storage = std::move(a);
  Matrix<T>& s = f.storage;
  const index_t m = s.rows();
  const index_t n = s.cols();

  f.rho.resize(m);
  std::iota(f.rho.begin(), f.rho.end(), 0);
  f.gamma.assign(n, 0);
  f.state = FactorState::Raw;

  std::vector<double> scale(m, 0.0);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < n; ++j) scale[i] = std::max(scale[i], abs_val(s(i, j)));

  CoarseBound bound;
  if (policy.kind == PivotKind::Coarse) bound = detail::initial_coarse_bound(s, policy);
  if (policy.kind == PivotKind::Fine) {
    const double span = 2.0 * (std::min(m, n) + 1);
    if (!(span * policy.unit < 1.0))
      throw std::invalid_argument("factor: fine bound undefined for this size");
  }

  index_t r = 0;
  for (index_t col = 0; col < n; ++col) {
    double best = 0.0;
    index_t p = -1;
    for (index_t i = r; i < m; ++i) {
      const index_t row = f.rho[i];
      if (!(scale[row] > 0.0)) continue;
      PivotCandidate<T> cand =
          policy.kind == PivotKind::Fine
              ? detail::eliminate_entry<true>(s, f.rho, f.gamma, r, row, col)
              : detail::eliminate_entry<false>(s, f.rho, f.gamma, r, row, col);
      s(row, col) = cand.value;
      cand.scaled = abs_val(cand.value) / scale[row];
      const bool nonzero = pivot_accept(policy, cand, bound);
      if (policy.kind == PivotKind::Coarse) bound.note(cand.value);
      if (nonzero && best < cand.scaled) {
        best = cand.scaled;
        p = i;
      }
    }
    if (p >= 0) {
      f.gamma[r] = col;
      std::swap(f.rho[p], f.rho[r]);
      const index_t prow = f.rho[r];
      const T pivot = s(prow, col);
      for (index_t j = col + 1; j < n; ++j) {
        T acc = s(prow, j);
        for (index_t k = 0; k < r; ++k) acc -= s(prow, f.gamma[k]) * s(f.rho[k], j);
        acc /= pivot;
        s(prow, j) = acc;
        if (policy.kind == PivotKind::Coarse) bound.note(acc);
      }
      ++r;
    }
  }
  f.rank = r;
  return f;
}

/// Copy of the lower trapezoidal factor L (m x rank). Extraction is a
/// test/debug facility and allocates; the compact schemes never call it.
template <typename T>
Matrix<T> extract_l(const Factorization<T>& f) {
  if (f.state != FactorState::Raw)
    throw WrongStateError("extract_l: factorization storage is no longer raw");
  if (f.rank < 1) throw ShapeError("extract_l: rank is zero");
  Matrix<T> l(f.rows(), f.rank);
  for (index_t p = 0; p < f.rows(); ++p)
    for (index_t q = 0; q <= std::min(p, f.rank - 1); ++q)
      l(p, q) = f.storage(f.rho[p], f.gamma[q]);
  return l;
}

/// Copy of the upper echelon factor U (rank x n) with its implicit unit
/// leaders materialized.
template <typename T>
Matrix<T> extract_u(const Factorization<T>& f) {
  if (f.state != FactorState::Raw)
    throw WrongStateError("extract_u: factorization storage is no longer raw");
  if (f.rank < 1) throw ShapeError("extract_u: rank is zero");
  Matrix<T> u(f.rank, f.cols());
  for (index_t p = 0; p < f.rank; ++p) {
    u(p, f.gamma[p]) = T{1};
    for (index_t q = f.gamma[p] + 1; q < f.cols(); ++q) u(p, q) = f.storage(f.rho[p], q);
  }
  return u;
}

}  // namespace pinv
