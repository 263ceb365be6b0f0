#pragma once

namespace nulllab::special {

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x) = 1 - P(a, x).
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Quantile of the standard Gamma(shape, 1) law: smallest x with P(a, x) >= p.
// Bisection to ~1e-14 relative; used for support truncation of gamma laws.
double gamma_quantile(double a, double p);

// Standard normal CDF.
double norm_cdf(double z);

}  // namespace nulllab::special
