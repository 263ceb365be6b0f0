#pragma once

#include <cstddef>
#include <span>

#include "nulllab/common.hpp"
#include "nulllab/gft.hpp"

namespace nulllab::cft {

// Classical-Fourier counterpart of gft: empirical characteristic function
// psi_n(t) = (1/n) sum_j exp(i t X_j) and its derivative. Every summand has
// unit modulus, so |value| <= 1.
struct CharPair {
  Complex value;
  Complex deriv;
  double t = 0.0;
  std::size_t n = 0;
};

CharPair echar(std::span<const double> samples, double t);

// With psi0(t) = (1-eps) exp(i u0 t - sigma0^2 t^2/2) the roles of mean and
// variance swap relative to the generalized transform: the phase carries u0
// and the amplitude carries sigma0^2.
//   u0(g; t)       = Im(conj(g) g') / |g|^2
//   sigma0^2(g; t) = -Re(conj(g) g') / (t |g|^2)
double u0_functional(const gft::FunctionalInput& in);
double sigma0_sq_functional(const gft::FunctionalInput& in);

// Proportion functional for the classical family:
// 1 - exp(-i u0 t + sigma0^2 t^2/2) * g(t), real part clamped to [0, 1].
gft::EpsResult eps_functional(Complex g_value, double t, double u0, double sigma0_sq);

}  // namespace nulllab::cft
