#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "nulllab/common.hpp"

namespace nulllab::mix {

// --- Mixing laws -----------------------------------------------------------
//
// H(u, sigma) is either a point mass on one (u, sigma^2) pair or a product
// of independent scalar laws for u and sigma. Note the sigma law draws the
// standard deviation, not the variance; that matches how the experiment
// configurations are stated.

struct Const {
  double value = 0.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;  // requires lo < hi
};

struct GammaShifted {
  double shape = 1.0;  // > 0
  double scale = 1.0;  // > 0
  double shift = 0.0;
};

using ScalarLaw = std::variant<Const, Uniform, GammaShifted>;

struct PointMass {
  double u = 0.0;
  double sigma_sq = 0.0;
};

struct ProductLaw {
  ScalarLaw u_law;
  ScalarLaw sigma_law;
};

using MixingLaw = std::variant<PointMass, ProductLaw>;

double law_support_min(const ScalarLaw& law);
// p-quantile; for gamma laws this is finite for every p < 1 and is the
// truncation device for unbounded supports.
double law_quantile(const ScalarLaw& law, double p);

// --- Mixture specification --------------------------------------------------

struct MixtureSpec {
  double u0 = 0.0;
  double sigma0_sq = 1.0;  // > 0
  double eps = 0.0;        // in [0, 1)
  MixingLaw mixing;
  // Variance cap used by the variance/bias bounds. When unset, the smallest
  // known bound on max(sigma^2, sigma0^2) over the mixing support is used;
  // gamma sigma-laws are unbounded, so their cap is the squared 1 - 1e-6
  // quantile and variance_cap_exact() reports false.
  std::optional<double> A;
  // Mean separation inf(u - u0) when known; required by bias_rate_bound.
  std::optional<double> delta_n;

  void validate() const;  // throws ValidationError
  double variance_cap() const;
  bool variance_cap_exact() const;
  // P_H(u > u0) = 1: support of u above u0 with no atom at u0 itself.
  bool gem_admissible() const;
  // P_H(sigma >= sigma0) = 1.
  bool gev_admissible() const;
};

// --- Samples ----------------------------------------------------------------

struct SampleSet {
  std::vector<double> values;
  std::optional<std::uint64_t> seed;
  std::size_t block_len = 0;  // 0 = i.i.d.

  std::size_t size() const { return values.size(); }
};

// Null-block size: n*(1-eps) rounded to nearest.
std::size_t null_count(const MixtureSpec& spec, std::size_t n);

// First null_count(n) observations are null draws N(u0, sigma0^2); the rest
// draw a fresh (u, sigma) per observation. Deterministic given the seed.
SampleSet sample_iid(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

// Moving-average construction: z_j = sum_{k=j..j+L} w_k / sqrt(L+1) with
// i.i.d. standard normal w, then X_j = mu_j + sigma_j * z_j. Marginally
// z_j ~ N(0,1) with corr(z_j, z_{j+k}) = max(0, (L+1-k)/(L+1)).
SampleSet sample_block_dependent(const MixtureSpec& spec, std::size_t n, std::size_t L,
                                 std::uint64_t seed);

// --- Population oracles ------------------------------------------------------

// Evaluation route: Auto picks closed forms where available; Quadrature
// forces the adaptive Gauss-Legendre path (cross-checking device).
enum class Eval { Auto, Quadrature };

// Null generalized characteristic function
// phi0(t) = (1 - eps) exp(omega u0 t + i sigma0^2 t^2 / 2) and derivative.
Complex phi0(double t, const MixtureSpec& spec);
Complex phi0_deriv(double t, const MixtureSpec& spec);

// Relative alternative contamination of the generalized transform,
// r(t) = eps/(1-eps) Int exp(omega (u-u0) t + i (sigma^2-sigma0^2) t^2/2) dH,
// and its t-derivative. |r(t)| <= eps/(1-eps) for admissible specs.
Complex r_of_t(double t, const MixtureSpec& spec, Eval eval = Eval::Auto);
Complex r_deriv(double t, const MixtureSpec& spec, Eval eval = Eval::Auto);

// Classical-transform counterpart
// s(t) = eps/(1-eps) Int exp(i (u-u0) t - (sigma^2-sigma0^2) t^2/2) dH.
Complex s_of_t(double t, const MixtureSpec& spec, Eval eval = Eval::Auto);

struct PopulationGchar {
  Complex value;
  Complex deriv;
};

// phi(t) = phi0(t) [1 + r(t)], derivative by the product rule.
PopulationGchar population_gchar(double t, const MixtureSpec& spec);

// --- Bounds -------------------------------------------------------------------

struct VarianceBound {
  double v_phi = 0.0;
  double v_phi_prime = 0.0;
};

// Literal evaluation of the proved variance bounds for the empirical
// generalized characteristic function and its derivative at frequency t:
//   v_phi       = (1/n) e^{-sqrt(2) u0 t + sigma0^2 t^2}
//                 [(1-eps) + eps e^{(A - sigma0^2) t^2}]
//   v_phi_prime = (1/n) e^{-sqrt(2) u0 t + sigma0^2 t^2}
//                 [(1-eps)(sigma0^2 + 2 u0^2 + 4 sigma0^4 t^2)
//                  + eps (A + 2 u0^2 + 4 A^2 t^2) e^{(A - sigma0^2) t^2}]
VarianceBound variance_bound(double t, std::size_t n, const MixtureSpec& spec);

// Envelope on |r'(t)| for mean-separated mixtures:
//   eps/(1-eps) (delta + sqrt(2)/(e t) + A t) e^{-delta t / sqrt(2)}.
// Requires spec.delta_n.
double bias_rate_bound(double t, const MixtureSpec& spec);

}  // namespace nulllab::mix
