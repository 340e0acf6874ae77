#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace pinv {

using Complex = std::complex<double>;

// Unit roundoff of binary64 (half the machine epsilon).
inline constexpr double kUnitRoundoff = 0x1p-53;

template <typename T>
struct RealOf {
  using type = T;
};
template <typename U>
struct RealOf<std::complex<U>> {
  using type = U;
};
template <typename T>
using real_t = typename RealOf<T>::type;

template <typename T>
inline constexpr bool is_complex_v = !std::is_same_v<T, real_t<T>>;

inline double conjugate(double x) { return x; }
inline Complex conjugate(const Complex& z) { return std::conj(z); }

inline double abs_val(double x) { return std::fabs(x); }
inline double abs_val(const Complex& z) { return std::abs(z); }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace pinv
