#pragma once

#include <complex>

namespace nulllab {

using Complex = std::complex<double>;

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// omega = -(1+i)/sqrt(2), the generalized-transform frequency direction.
// Note omega^2 = i.
inline constexpr Complex kOmega{-kInvSqrt2, -kInvSqrt2};

// Largest admissible modulus exponent before exp() overflows double range.
inline constexpr double kExpGuard = 700.0;

// Fixed-order compensated accumulation; results are reproducible across
// runs regardless of optimization level (no reassociation of the sum).
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace nulllab
