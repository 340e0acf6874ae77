#pragma once

#include <vector>

#include "pinv/matrix.hpp"

namespace pinv {

// Brute-force reference implementations used to validate the compact
// schemes. These deliberately share no kernels with factor()/pinv_apply():
// they run naive dense Gaussian elimination with unrestricted allocation, so
// a bug in the compact code paths cannot validate itself. Performance is a
// non-goal here.

/// Max-norm residuals of the four Moore-Penrose conditions for a pair (A, X).
struct OracleReport {
  double residual_axa = 0.0;      // |A X A - A|
  double residual_xax = 0.0;      // |X A X - X|
  double residual_ax_herm = 0.0;  // |(A X)* - A X|
  double residual_xa_herm = 0.0;  // |(X A)* - X A|

  double max_residual() const {
    return std::max(std::max(residual_axa, residual_xax),
                    std::max(residual_ax_herm, residual_xa_herm));
  }
};

namespace oracle_detail {

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw ShapeError("oracle matmul: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t k = 0; k < a.cols(); ++k)
      for (index_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

template <typename T>
Matrix<T> conj_transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) t(j, i) = conjugate(a(i, j));
  return t;
}

template <typename T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  double best = 0.0;
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) best = std::max(best, abs_val(a(i, j) - b(i, j)));
  return best;
}

// Gauss-Jordan inversion with partial pivoting on an augmented copy.
template <typename T>
Matrix<T> invert_dense(Matrix<T> h) {
  if (h.rows() != h.cols()) throw ShapeError("oracle invert: matrix not square");
  const index_t n = h.rows();
  Matrix<T> inv = Matrix<T>::identity(n);
  for (index_t col = 0; col < n; ++col) {
    index_t piv = col;
    for (index_t i = col + 1; i < n; ++i)
      if (abs_val(h(i, col)) > abs_val(h(piv, col))) piv = i;
    if (!(abs_val(h(piv, col)) > 0.0))
      throw NumericBreakdown("oracle invert: singular matrix");
    if (piv != col)
      for (index_t j = 0; j < n; ++j) {
        std::swap(h(col, j), h(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    const T d = h(col, col);
    for (index_t j = 0; j < n; ++j) {
      h(col, j) /= d;
      inv(col, j) /= d;
    }
    for (index_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const T factor = h(i, col);
      if (factor == T{}) continue;
      for (index_t j = 0; j < n; ++j) {
        h(i, j) -= factor * h(col, j);
        inv(i, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

template <typename T>
struct Rref {
  Matrix<T> reduced;
  std::vector<index_t> pivot_cols;
};

// Reduced row echelon form by Gauss-Jordan with partial pivoting; columns
// whose best remaining entry falls below tol contribute no pivot.
template <typename T>
Rref<T> rref(Matrix<T> a, double tol) {
  const index_t m = a.rows();
  const index_t n = a.cols();
  std::vector<index_t> pivots;
  index_t row = 0;
  for (index_t col = 0; col < n && row < m; ++col) {
    index_t piv = row;
    for (index_t i = row + 1; i < m; ++i)
      if (abs_val(a(i, col)) > abs_val(a(piv, col))) piv = i;
    if (abs_val(a(piv, col)) <= tol) continue;
    if (piv != row)
      for (index_t j = 0; j < n; ++j) std::swap(a(row, j), a(piv, j));
    const T d = a(row, col);
    for (index_t j = 0; j < n; ++j) a(row, j) /= d;
    a(row, col) = T{1};
    for (index_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const T factor = a(i, col);
      if (factor == T{}) continue;
      for (index_t j = 0; j < n; ++j) a(i, j) -= factor * a(row, j);
      a(i, col) = T{};
    }
    pivots.push_back(col);
    ++row;
  }
  return Rref<T>{std::move(a), std::move(pivots)};
}

}  // namespace oracle_detail

/// Moore-Penrose pseudoinverse computed the slow, allocation-heavy way:
/// a fresh rank decomposition A = L U from the reduced row echelon form
/// (L = the pivot columns of A, U = the nonzero rows of rref(A)), then
/// A+ = U* (U U*)^-1 (L* L)^-1 L*. Returns the n x m zero matrix when the
/// numerical rank is zero.
template <typename T>
Matrix<T> oracle_pinv(const Matrix<T>& a) {
  using oracle_detail::conj_transpose;
  using oracle_detail::matmul;
  const index_t m = a.rows();
  const index_t n = a.cols();
  const double tol = 1e-9 * (1.0 + max_abs(a));
  const auto rr = oracle_detail::rref(a, tol);
  const index_t r = static_cast<index_t>(rr.pivot_cols.size());
  if (r == 0) return Matrix<T>(n, m);

  Matrix<T> l(m, r);
  for (index_t i = 0; i < m; ++i)
    for (index_t q = 0; q < r; ++q) l(i, q) = a(i, rr.pivot_cols[q]);
  Matrix<T> u(r, n);
  for (index_t p = 0; p < r; ++p)
    for (index_t j = 0; j < n; ++j) u(p, j) = rr.reduced(p, j);

  const Matrix<T> lh = conj_transpose(l);
  const Matrix<T> uh = conj_transpose(u);
  const Matrix<T> gram_l_inv = oracle_detail::invert_dense(matmul(lh, l));
  const Matrix<T> gram_u_inv = oracle_detail::invert_dense(matmul(u, uh));
  return matmul(matmul(uh, gram_u_inv), matmul(gram_l_inv, lh));
}

/// The four Moore-Penrose residuals for x as a candidate pseudoinverse of a.
template <typename T>
OracleReport mp_check(const Matrix<T>& a, const Matrix<T>& x) {
  using oracle_detail::conj_transpose;
  using oracle_detail::matmul;
  using oracle_detail::max_abs_diff;
  if (x.rows() != a.cols() || x.cols() != a.rows())
    throw ShapeError("mp_check: x must be n x m for an m x n a");
  const Matrix<T> ax = matmul(a, x);
  const Matrix<T> xa = matmul(x, a);
  OracleReport rep;
  rep.residual_axa = max_abs_diff(matmul(ax, a), a);
  rep.residual_xax = max_abs_diff(matmul(xa, x), x);
  rep.residual_ax_herm = max_abs_diff(conj_transpose(ax), ax);
  rep.residual_xa_herm = max_abs_diff(conj_transpose(xa), xa);
  return rep;
}

/// Exact rank of an integer-valued matrix by fraction-free elimination over
/// arbitrary-precision integers (Gaussian integers in the complex case).
/// Throws std::invalid_argument when an entry is not an exact integer.
int exact_rank(const Matrix<double>& a);
int exact_rank(const Matrix<Complex>& a);

}  // namespace pinv
