#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pinv/oracle.hpp"

namespace pinv {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Gaussian integer with exact arithmetic; division is used only where the
// fraction-free recurrence guarantees exactness.
struct GInt {
  BigInt re;
  BigInt im;

  bool is_zero() const { return re == 0 && im == 0; }

  friend GInt operator*(const GInt& a, const GInt& b) {
    return GInt{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GInt operator-(const GInt& a, const GInt& b) { return GInt{a.re - b.re, a.im - b.im}; }

  friend GInt exact_div(const GInt& a, const GInt& d) {
    const BigInt norm = d.re * d.re + d.im * d.im;
    const BigInt re_num = a.re * d.re + a.im * d.im;
    const BigInt im_num = a.im * d.re - a.re * d.im;
    if (norm == 0 || re_num % norm != 0 || im_num % norm != 0)
      throw std::logic_error("exact_rank: inexact division in fraction-free elimination");
    return GInt{re_num / norm, im_num / norm};
  }
};

BigInt to_bigint(double x, const char* what) {
  if (!std::isfinite(x) || x != std::nearbyint(x) || std::fabs(x) > 0x1p53)
    throw std::invalid_argument(std::string("exact_rank: ") + what +
                                " is not an exactly representable integer");
  return BigInt(static_cast<long long>(x));
}

// One-step fraction-free (Bareiss) elimination; exact over any integral
// domain, so the same routine serves plain and Gaussian integers.
template <typename Scalar>
int bareiss_rank(std::vector<std::vector<Scalar>> m, const Scalar& one) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  Scalar prev = one;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (!m[i][col].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j)
        m[i][j] = exact_div(m[rank][col] * m[i][j] - m[i][col] * m[rank][j], prev);
      m[i][col] = Scalar{};
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

struct ZInt {
  BigInt v;
  bool is_zero() const { return v == 0; }
  friend ZInt operator*(const ZInt& a, const ZInt& b) { return ZInt{a.v * b.v}; }
  friend ZInt operator-(const ZInt& a, const ZInt& b) { return ZInt{a.v - b.v}; }
  friend ZInt exact_div(const ZInt& a, const ZInt& d) {
    if (d.v == 0 || a.v % d.v != 0)
      throw std::logic_error("exact_rank: inexact division in fraction-free elimination");
    return ZInt{a.v / d.v};
  }
};

}  // namespace

int exact_rank(const Matrix<double>& a) {
  std::vector<std::vector<ZInt>> m(a.rows(), std::vector<ZInt>(a.cols()));
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) m[i][j] = ZInt{to_bigint(a(i, j), "entry")};
  return bareiss_rank(std::move(m), ZInt{BigInt(1)});
}

int exact_rank(const Matrix<Complex>& a) {
  std::vector<std::vector<GInt>> m(a.rows(), std::vector<GInt>(a.cols()));
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j)
      m[i][j] = GInt{to_bigint(a(i, j).real(), "real part"),
                     to_bigint(a(i, j).imag(), "imaginary part")};
  return bareiss_rank(std::move(m), GInt{BigInt(1), BigInt(0)});
}

}  // namespace pinv
