#pragma once

#include <random>

#include "pinv/pivot.hpp"

// Randomized but self-consistent pivot-acceptance contexts: the candidate
// value really is the old value minus the generated inner product, the
// context sums and counts are accumulated the same way the factorization
// does, and the coarse running maxima genuinely bound every participating
// magnitude (possibly inflated, as running maxima may be).
namespace testsupport {

struct RealContext {
  pinv::PivotCandidate<double> cand;
  pinv::CoarseBound bound;
};

inline RealContext random_real_context(std::mt19937_64& rng) {
  using pinv::CoarseBound;
  std::uniform_int_distribution<int> rank_dist(0, 8);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::bernoulli_distribution zero(0.3);
  const int r = rank_dist(rng);
  const int kappa = r + 1 + std::uniform_int_distribution<int>(0, 4)(rng);

  const double old_value = zero(rng) ? 0.0 : mag(rng);
  double mu = std::fabs(old_value);

  pinv::PivotCandidate<double> cand;
  double acc = old_value;
  cand.ctx_re = std::fabs(old_value);
  cand.terms_re = old_value != 0.0 ? 1 : 0;
  for (int k = 0; k < r; ++k) {
    const double a = zero(rng) ? 0.0 : mag(rng);
    const double b = zero(rng) ? 0.0 : mag(rng);
    mu = std::max(mu, std::max(std::fabs(a), std::fabs(b)));
    acc -= a * b;
    cand.ctx_re += std::fabs(a) * std::fabs(b);
    if (a != 0.0 && b != 0.0) ++cand.terms_re;
  }
  // Occasionally force near-total cancellation so tiny values are exercised.
  if (std::bernoulli_distribution(0.25)(rng))
    acc *= std::uniform_real_distribution<double>(0, 1e-15)(rng);
  cand.value = acc;
  cand.scaled = std::fabs(acc) / std::max(mu, 1.0);

  const double inflate = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
  return RealContext{cand,
                     CoarseBound::for_real(kappa, pinv::kUnitRoundoff, mu * inflate)};
}

struct ComplexContext {
  pinv::PivotCandidate<pinv::Complex> cand;
  pinv::CoarseBound bound;
};

inline ComplexContext random_complex_context(std::mt19937_64& rng) {
  using pinv::Complex;
  using pinv::CoarseBound;
  std::uniform_int_distribution<int> rank_dist(0, 8);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::bernoulli_distribution zero(0.3);
  const int r = rank_dist(rng);
  const int kappa = r + 1 + std::uniform_int_distribution<int>(0, 4)(rng);

  auto scalar = [&] { return Complex(zero(rng) ? 0.0 : mag(rng), zero(rng) ? 0.0 : mag(rng)); };
  double mu_re = 0.0, mu_im = 0.0;
  auto note = [&](const Complex& z) {
    mu_re = std::max(mu_re, std::fabs(z.real()));
    mu_im = std::max(mu_im, std::fabs(z.imag()));
  };

  const Complex old_value = scalar();
  note(old_value);
  pinv::PivotCandidate<Complex> cand;
  Complex acc = old_value;
  cand.ctx_re = std::fabs(old_value.real());
  cand.ctx_im = std::fabs(old_value.imag());
  cand.terms_re = old_value.real() != 0.0 ? 1 : 0;
  cand.terms_im = old_value.imag() != 0.0 ? 1 : 0;
  for (int k = 0; k < r; ++k) {
    const Complex a = scalar();
    const Complex b = scalar();
    note(a);
    note(b);
    acc -= a * b;
    const double ar = std::fabs(a.real()), ai = std::fabs(a.imag());
    const double br = std::fabs(b.real()), bi = std::fabs(b.imag());
    cand.ctx_re += ar * br + ai * bi;
    cand.ctx_im += ar * bi + ai * br;
    if (a.real() != 0.0 && b.real() != 0.0) ++cand.terms_re;
    if (a.imag() != 0.0 && b.imag() != 0.0) ++cand.terms_re;
    if (a.real() != 0.0 && b.imag() != 0.0) ++cand.terms_im;
    if (a.imag() != 0.0 && b.real() != 0.0) ++cand.terms_im;
  }
  if (std::bernoulli_distribution(0.25)(rng))
    acc *= std::uniform_real_distribution<double>(0, 1e-15)(rng);
  cand.value = acc;
  cand.scaled = std::abs(acc) / std::max(std::max(mu_re, mu_im), 1.0);

  const double inflate = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
  return ComplexContext{cand, CoarseBound::for_complex(kappa, pinv::kUnitRoundoff,
                                                       mu_re * inflate, mu_im * inflate)};
}

}  // namespace testsupport
