#pragma once

#include <span>

#include "pinv/factor.hpp"

namespace pinv {

/// Where the packed Hermitian data lives inside the pivot block.
///
///  - Lower:           H(i,j), i >= j, at storage(rho[i], gamma[j]).
///  - UpperTransposed:  H(i,j), i >= j, at storage(rho[j], gamma[i]); used
///                      when the block's lower triangle must stay intact.
enum class HfsOrientation { Lower, UpperTransposed };

namespace detail {

inline void check_hfs_pivot(double d) {
  if (!(d > 0.0))
    throw NumericBreakdown("hfs_factor: nonpositive pivot, matrix not positive definite");
}

inline void check_hfs_pivot(const Complex& d) {
  if (!(d.real() > 0.0) || std::fabs(d.imag()) > 1e-12 * d.real())
    throw NumericBreakdown("hfs_factor: pivot not positive real, matrix not Hermitian PD");
}

}  // namespace detail

/// Hermitian factor step: LDL* decomposition of the rank x rank Hermitian
/// positive definite matrix packed in the pivot block, in place. The unit
/// diagonal of the L factor is implicit; the D factor overwrites the packed
/// diagonal positions. Throws NumericBreakdown when a computed D entry is
/// not positive (real) or not positive-real (complex).
template <typename T>
void hfs_factor(Factorization<T>& f, HfsOrientation orient) {
  Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;
  const index_t r = f.rank;
  auto at = [&](index_t a, index_t b) -> T& {
    return orient == HfsOrientation::Lower ? s(rho[a], gam[b]) : s(rho[b], gam[a]);
  };
  for (index_t i = 0; i < r; ++i) {
    for (index_t k = 0; k < i; ++k) at(i, i) -= at(i, k) * conjugate(at(i, k)) * at(k, k);
    detail::check_hfs_pivot(at(i, i));
    for (index_t j = i + 1; j < r; ++j) {
      for (index_t k = 0; k < i; ++k) at(j, i) -= at(j, k) * conjugate(at(i, k)) * at(k, k);
      at(j, i) /= at(i, i);
    }
  }
}

/// Hermitian solve step: after hfs_factor, replaces the entries of b at rows
/// rows[0..rank) by H^-1 times their previous contents, column by column
/// (forward substitution, diagonal scaling, back substitution).
template <typename T>
void hfs_solve(const Factorization<T>& f, HfsOrientation orient,
               std::span<const index_t> rows, Matrix<T>& b) {
  const Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;
  const index_t r = f.rank;
  if (static_cast<index_t>(rows.size()) < r)
    throw ShapeError("hfs_solve: row index span shorter than rank");
  for (index_t i = 0; i < r; ++i)
    if (rows[i] < 0 || rows[i] >= b.rows())
      throw ShapeError("hfs_solve: row index out of range");
  auto fac = [&](index_t a, index_t c) -> const T& {
    return orient == HfsOrientation::Lower ? s(rho[a], gam[c]) : s(rho[c], gam[a]);
  };
  for (index_t i = 0; i < r; ++i)
    if (fac(i, i) == T{}) throw DivideByZero("hfs_solve: zero diagonal entry");

  for (index_t q = 0; q < b.cols(); ++q) {
    for (index_t i = 0; i < r; ++i)
      for (index_t k = 0; k < i; ++k) b(rows[i], q) -= fac(i, k) * b(rows[k], q);
    for (index_t i = 0; i < r; ++i) b(rows[i], q) /= fac(i, i);
    for (index_t i = r - 1; i >= 0; --i)
      for (index_t k = r - 1; k > i; --k) b(rows[i], q) -= conjugate(fac(k, i)) * b(rows[k], q);
  }
}

}  // namespace pinv
