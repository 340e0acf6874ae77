#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "pinv/errors.hpp"
#include "pinv/numeric.hpp"

namespace pinv {

using index_t = int;

/// Dense row-major matrix over double or std::complex<double>.
/// Dimensions are positive; a default-constructed Matrix is an empty
/// moved-from shell and is not valid input to any operation.
template <typename T>
class Matrix {
 public:
  Matrix() = default;

  Matrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1)
      throw ShapeError("matrix dimensions must be positive");
    data_.assign(static_cast<std::size_t>(rows) * cols, T{});
  }

  static Matrix identity(index_t n) {
    Matrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const index_t m = static_cast<index_t>(rows.size());
    if (m == 0) throw ShapeError("matrix dimensions must be positive");
    const index_t n = static_cast<index_t>(rows.begin()->size());
    Matrix out(m, n);
    index_t i = 0;
    for (const auto& row : rows) {
      if (static_cast<index_t>(row.size()) != n)
        throw ShapeError("ragged row in matrix literal");
      index_t j = 0;
      for (const T& v : row) out(i, j++) = v;
      ++i;
    }
    return out;
  }

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(index_t i, index_t j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(index_t i, index_t j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_buffer(const Matrix& other) const { return data_.data() == other.data_.data(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
double max_abs(const Matrix<T>& m) {
  double best = 0.0;
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) best = std::max(best, abs_val(m(i, j)));
  return best;
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j)
      if (!is_finite(m(i, j))) return false;
  return true;
}

}  // namespace pinv
