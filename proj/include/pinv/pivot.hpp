#pragma once

#include <cmath>
#include <stdexcept>

#include "pinv/numeric.hpp"

namespace pinv {

// Error-growth factor for an inner product of `a` rounded terms:
// phi(a) = a*u / (1 - a*u), defined while a*u < 1.
inline double phi(double a, double u) { return a * u / (1.0 - a * u); }

enum class PivotKind { Simple, Fine, Coarse };

/// Rule deciding whether a computed candidate pivot is genuinely nonzero
/// under floating point, as opposed to rounding residue of a cancellation.
///
///  - Simple: the scaled magnitude must exceed a fixed threshold eps.
///  - Fine:   per-entry bound built from the absolute values and the count K
///            of nonzero terms that entered the entry's inner product.
///  - Coarse: precomputed global bound from running maxima of the stored
///            entries (mu, or mu_re/mu_im componentwise for complex data)
///            and kappa = min(m, n); cheaper but a strict overestimate of
///            the fine bound.
struct PivotPolicy {
  PivotKind kind = PivotKind::Simple;
  double eps = 1e-12;            // Simple only
  double unit = kUnitRoundoff;   // unit roundoff of the working precision

  static PivotPolicy simple(double eps = 1e-12) {
    if (!(eps >= 0.0)) throw std::invalid_argument("pivot eps must be nonnegative");
    return PivotPolicy{PivotKind::Simple, eps, kUnitRoundoff};
  }
  static PivotPolicy fine() { return PivotPolicy{PivotKind::Fine, 0.0, kUnitRoundoff}; }
  static PivotPolicy coarse() { return PivotPolicy{PivotKind::Coarse, 0.0, kUnitRoundoff}; }
};

/// One candidate pivot entry together with the accumulation context gathered
/// while its elimination inner product was evaluated.
///
/// Real data uses the *_re members only. For complex data the context is kept
/// separately for the real and imaginary parts of the products: ctx_re bounds
/// |Re old| + sum(|Re a||Re b| + |Im a||Im b|), ctx_im bounds
/// |Im old| + sum(|Re a||Im b| + |Im a||Re b|), and terms_* count the nonzero
/// products in each sum (plus one when the corresponding part of the old
/// value is nonzero).
template <typename T>
struct PivotCandidate {
  T value{};           // entry after the elimination assignment
  double scaled = 0.0; // |value| / row_norm, the quantity competing for C
  double ctx_re = 0.0;
  double ctx_im = 0.0;
  int terms_re = 0;
  int terms_im = 0;
};

/// Cached right-hand sides of the coarse acceptance inequalities.
/// Maxima are running maxima over every value ever stored in the matrix;
/// the right-hand sides are recomputed only when a maximum grows.
struct CoarseBound {
  double kappa = 0.0;
  double phi_once = 0.0;
  bool complex_field = false;
  double mu = 0.0, rhs = 0.0;
  double mu_re = 0.0, mu_im = 0.0, rhs_re = 0.0, rhs_im = 0.0;

  static CoarseBound for_real(int kappa, double unit, double initial_mu) {
    if (!((kappa + 1) * unit < 1.0))
      throw std::invalid_argument("coarse bound undefined: (kappa+1)*u >= 1");
    CoarseBound b;
    b.kappa = static_cast<double>(kappa);
    b.phi_once = phi(static_cast<double>(kappa + 1), unit);
    b.complex_field = false;
    b.mu = initial_mu;
    b.refresh_real();
    return b;
  }

  static CoarseBound for_complex(int kappa, double unit, double initial_mu_re,
                                 double initial_mu_im) {
    if (!(2.0 * (kappa + 1) * unit < 1.0))
      throw std::invalid_argument("coarse bound undefined: 2(kappa+1)*u >= 1");
    CoarseBound b;
    b.kappa = static_cast<double>(kappa);
    b.phi_once = phi(2.0 * (kappa + 1), unit);
    b.complex_field = true;
    b.mu_re = initial_mu_re;
    b.mu_im = initial_mu_im;
    b.refresh_complex();
    return b;
  }

  void note(double stored) {
    const double a = std::fabs(stored);
    if (a > mu) {
      mu = a;
      refresh_real();
    }
  }

  void note(const Complex& stored) {
    const double ar = std::fabs(stored.real());
    const double ai = std::fabs(stored.imag());
    bool changed = false;
    if (ar > mu_re) { mu_re = ar; changed = true; }
    if (ai > mu_im) { mu_im = ai; changed = true; }
    if (changed) refresh_complex();
  }

 private:
  void refresh_real() { rhs = phi_once * (mu + kappa * mu * mu); }
  void refresh_complex() {
    rhs_re = phi_once * (mu_re + kappa * mu_re * mu_re + kappa * mu_im * mu_im);
    rhs_im = phi_once * (mu_im + 2.0 * kappa * mu_im * mu_re);
  }
};

/// True when the candidate entry is to be treated as an exact-arithmetic
/// nonzero. Pure predicate; `bound` is consulted only by the coarse policy.
inline bool pivot_accept(const PivotPolicy& policy, const PivotCandidate<double>& cand,
                         const CoarseBound& bound) {
  switch (policy.kind) {
    case PivotKind::Simple:
      return cand.scaled > policy.eps;
    case PivotKind::Fine:
      return std::fabs(cand.value) > phi(cand.terms_re, policy.unit) * cand.ctx_re;
    case PivotKind::Coarse:
      return std::fabs(cand.value) > bound.rhs;
  }
  return false;
}

inline bool pivot_accept(const PivotPolicy& policy, const PivotCandidate<Complex>& cand,
                         const CoarseBound& bound) {
  switch (policy.kind) {
    case PivotKind::Simple:
      return cand.scaled > policy.eps;
    case PivotKind::Fine:
      return std::fabs(cand.value.real()) > phi(cand.terms_re, policy.unit) * cand.ctx_re ||
             std::fabs(cand.value.imag()) > phi(cand.terms_im, policy.unit) * cand.ctx_im;
    case PivotKind::Coarse:
      return std::fabs(cand.value.real()) > bound.rhs_re ||
             std::fabs(cand.value.imag()) > bound.rhs_im;
  }
  return false;
}

}  // namespace pinv
