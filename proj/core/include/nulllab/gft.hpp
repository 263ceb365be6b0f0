#pragma once

#include <cstddef>
#include <span>

#include "nulllab/common.hpp"

namespace nulllab::gft {

// Empirical generalized characteristic function and its t-derivative,
// evaluated at one frequency:
//
//   value = (1/n) sum_j exp(omega * t * X_j)
//   deriv = (1/n) sum_j omega * X_j * exp(omega * t * X_j)
//
// Both are accumulated in one pass, in fixed sample order with compensated
// summation, so repeated calls are bit-identical.
struct GcharPair {
  Complex value;
  Complex deriv;
  double t = 0.0;
  std::size_t n = 0;
};

// Argument pair for the closed-form functionals below: a complex value g(t),
// its derivative g'(t) and the frequency. |g| must be nonzero.
struct FunctionalInput {
  Complex g;
  Complex g_prime;
  double t = 0.0;
};

// Proportion functional output: headline value is the real part of the
// complex expression clamped to [0, 1]; `raw` keeps the unclamped complex
// value for diagnostics.
struct EpsResult {
  double eps = 0.0;
  Complex raw;
};

// Both sides of the two perturbation inequalities relating functional
// differences to |f - g| and |(f - g)'|. Property-test support.
struct PerturbationBounds {
  double lhs_u0 = 0.0;
  double rhs_u0 = 0.0;
  double lhs_sigma = 0.0;
  double rhs_sigma = 0.0;
};

// Throws EmptySampleError on empty input; OverflowError (with the offending
// index) when a summand's modulus exponent -t*X_j/sqrt(2) would exceed the
// exp() guard.
GcharPair gchar(std::span<const double> samples, double t);

// Null-mean functional  u0(g; t) = -sqrt(2) * d|g|/dt / |g|.
// d|g|/dt is evaluated algebraically as Re(conj(g) g') / |g|, never by
// finite differences, so the inversion identities hold to machine precision.
double u0_functional(const FunctionalInput& in);

// Null-variance functional  sigma0^2(g; t) = sqrt(2) Re(omega conj(g) g') / (t |g|^2).
// Output is not clamped here; negative values are meaningful diagnostics.
double sigma0_sq_functional(const FunctionalInput& in);

// Proportion functional  1 - exp(-omega u0 t - i sigma0^2 t^2 / 2) * g(t).
// Exact epsilon when g is the null generalized characteristic function with
// the supplied parameters.
EpsResult eps_functional(Complex g_value, double t, double u0, double sigma0_sq);

// Evaluates both displayed perturbation inequalities for a pair of
// functional inputs at the same frequency.
PerturbationBounds perturbation_bound_check(const FunctionalInput& f, const FunctionalInput& g);

}  // namespace nulllab::gft
