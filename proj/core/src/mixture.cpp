#include "nulllab/mixture.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nulllab/errors.hpp"
#include "nulllab/quadrature.hpp"
#include "nulllab/rng.hpp"
#include "nulllab/special.hpp"

namespace nulllab::mix {

namespace {

constexpr double kTailMass = 1e-12;  // quadrature domain truncation

void validate_law(const ScalarLaw& law, const char* who, bool nonnegative) {
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          if (!std::isfinite(l.value)) throw ValidationError(std::string(who) + ": non-finite const");
          if (nonnegative && l.value < 0.0)
            throw ValidationError(std::string(who) + ": sigma law must be nonnegative");
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (!std::isfinite(l.lo) || !std::isfinite(l.hi) || !(l.lo < l.hi))
            throw ValidationError(std::string(who) + ": uniform law requires lo < hi");
          if (nonnegative && l.lo < 0.0)
            throw ValidationError(std::string(who) + ": sigma law must be nonnegative");
        } else {
          if (!(l.shape > 0.0) || !(l.scale > 0.0) || !std::isfinite(l.shift))
            throw ValidationError(std::string(who) + ": gamma law requires shape, scale > 0");
          if (nonnegative && l.shift < 0.0)
            throw ValidationError(std::string(who) + ": sigma law must be nonnegative");
        }
      },
      law);
}

double law_draw(const ScalarLaw& law, rng::Engine& eng) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return eng.uniform(l.lo, l.hi);
        } else {
          return l.shift + eng.gamma(l.shape, l.scale);
        }
      },
      law);
}

struct Domain {
  double lo = 0.0;
  double hi = 0.0;
};

Domain law_domain(const ScalarLaw& law) {
  return std::visit(
      [](const auto& l) -> Domain {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return {l.value, l.value};
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return {l.lo, l.hi};
        } else {
          return {l.shift + l.scale * special::gamma_quantile(l.shape, kTailMass),
                  l.shift + l.scale * special::gamma_quantile(l.shape, 1.0 - kTailMass)};
        }
      },
      law);
}

double law_pdf(const ScalarLaw& law, double x) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return 0.0;  // never integrated
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return (x < l.lo || x > l.hi) ? 0.0 : 1.0 / (l.hi - l.lo);
        } else {
          const double y = x - l.shift;
          if (y <= 0.0) return 0.0;
          return std::exp((l.shape - 1.0) * std::log(y) - y / l.scale -
                          std::lgamma(l.shape) - l.shape * std::log(l.scale));
        }
      },
      law);
}

void exponent_guard(double re_exp, const char* ctx) {
  if (re_exp > kExpGuard) {
    throw OverflowError(std::string(ctx) + " exponent " + std::to_string(re_exp) +
                        " exceeds guard");
  }
}

// Principal-branch (1 - scale z)^(-k); falls back to the caller's quadrature
// path when the base leaves the right half plane.
bool gamma_mgf_ok(Complex z, double scale) { return 1.0 - scale * z.real() > 0.0; }

Complex gamma_mgf(Complex z, double shape, double scale) {
  return std::exp(-shape * std::log(1.0 - scale * z));
}

// E[w(delta) e^{z delta}] over the u-law with delta = u - u0;
// w is 1 or delta itself.
Complex delta_moment(Complex z, const ScalarLaw& law, double u0, bool weighted, Eval eval) {
  if (const auto* c = std::get_if<Const>(&law)) {
    const double delta = c->value - u0;
    exponent_guard(z.real() * delta, "mixing u-factor");
    const Complex e = std::exp(z * delta);
    return weighted ? delta * e : e;
  }
  const bool closed_ok = eval == Eval::Auto;
  if (closed_ok) {
    if (const auto* u = std::get_if<Uniform>(&law)) {
      const double width = u->hi - u->lo;
      if (std::abs(z) * width >= 1e-6) {
        const Complex za = z * (u->lo - u0);
        const Complex zb = z * (u->hi - u0);
        exponent_guard(std::max(za.real(), zb.real()), "mixing u-factor");
        if (!weighted) return (std::exp(zb) - std::exp(za)) / (z * width);
        return (std::exp(zb) * (zb - 1.0) - std::exp(za) * (za - 1.0)) / (z * z * width);
      }
    } else if (const auto* g = std::get_if<GammaShifted>(&law)) {
      if (gamma_mgf_ok(z, g->scale)) {
        const double s = g->shift - u0;
        exponent_guard(z.real() * s, "mixing u-factor");
        const Complex zs = std::exp(z * s);
        const Complex m = gamma_mgf(z, g->shape, g->scale);
        if (!weighted) return zs * m;
        return zs * (s * m + g->shape * g->scale * gamma_mgf(z, g->shape + 1.0, g->scale));
      }
    }
  }
  const Domain d = law_domain(law);
  exponent_guard(std::max(z.real() * (d.lo - u0), z.real() * (d.hi - u0)), "mixing u-factor");
  return quad::integrate(
      [&](double x) {
        const double delta = x - u0;
        Complex e = std::exp(z * delta) * law_pdf(law, x);
        if (weighted) e *= delta;
        return e;
      },
      d.lo, d.hi);
}

// E[w(kappa) e^{c kappa}] over the sigma-law with kappa = sigma^2 - sigma0^2.
Complex kappa_moment(Complex c, const ScalarLaw& law, double sigma0_sq, bool weighted,
                     Eval /*eval*/) {
  if (const auto* cl = std::get_if<Const>(&law)) {
    const double kappa = cl->value * cl->value - sigma0_sq;
    exponent_guard(c.real() * kappa, "mixing sigma-factor");
    const Complex e = std::exp(c * kappa);
    return weighted ? kappa * e : e;
  }
  const Domain d = law_domain(law);
  const double k_lo = d.lo * d.lo - sigma0_sq;
  const double k_hi = d.hi * d.hi - sigma0_sq;
  exponent_guard(std::max(c.real() * k_lo, c.real() * k_hi), "mixing sigma-factor");
  return quad::integrate(
      [&](double sig) {
        const double kappa = sig * sig - sigma0_sq;
        Complex e = std::exp(c * kappa) * law_pdf(law, sig);
        if (weighted) e *= kappa;
        return e;
      },
      d.lo, d.hi);
}

double sigma_sq_support_max(const MixingLaw& mixing) {
  if (const auto* pm = std::get_if<PointMass>(&mixing)) return pm->sigma_sq;
  const auto& prod = std::get<ProductLaw>(mixing);
  return std::visit(
      [](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return l.value * l.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return l.hi * l.hi;
        } else {
          const double q = l.shift + l.scale * special::gamma_quantile(l.shape, 1.0 - 1e-6);
          return q * q;
        }
      },
      prod.sigma_law);
}

}  // namespace

double law_support_min(const ScalarLaw& law) {
  return std::visit(
      [](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return l.lo;
        } else {
          return l.shift;
        }
      },
      law);
}

double law_quantile(const ScalarLaw& law, double p) {
  if (!(p >= 0.0) || !(p < 1.0)) throw ValidationError("law_quantile: p must be in [0, 1)");
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Const>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return l.lo + p * (l.hi - l.lo);
        } else {
          return l.shift + l.scale * special::gamma_quantile(l.shape, p);
        }
      },
      law);
}

void MixtureSpec::validate() const {
  if (!std::isfinite(u0)) throw ValidationError("mixture: non-finite u0");
  if (!std::isfinite(sigma0_sq) || !(sigma0_sq > 0.0))
    throw ValidationError("mixture: sigma0_sq must be positive");
  if (!(eps >= 0.0) || !(eps < 1.0)) throw ValidationError("mixture: eps must be in [0, 1)");
  if (const auto* pm = std::get_if<PointMass>(&mixing)) {
    if (!std::isfinite(pm->u) || !std::isfinite(pm->sigma_sq) || pm->sigma_sq < 0.0)
      throw ValidationError("mixture: point mass requires finite u and sigma_sq >= 0");
  } else {
    const auto& prod = std::get<ProductLaw>(mixing);
    validate_law(prod.u_law, "mixture u-law", false);
    validate_law(prod.sigma_law, "mixture sigma-law", true);
  }
  if (A && (!std::isfinite(*A) || *A < sigma0_sq))
    throw ValidationError("mixture: variance cap A must be >= sigma0_sq");
  if (delta_n && (!std::isfinite(*delta_n) || *delta_n < 0.0))
    throw ValidationError("mixture: delta_n must be >= 0");
}

double MixtureSpec::variance_cap() const {
  if (A) return *A;
  return std::max(sigma_sq_support_max(mixing), sigma0_sq);
}

bool MixtureSpec::variance_cap_exact() const {
  if (A) return true;
  if (std::holds_alternative<PointMass>(mixing)) return true;
  return !std::holds_alternative<GammaShifted>(std::get<ProductLaw>(mixing).sigma_law);
}

bool MixtureSpec::gem_admissible() const {
  if (const auto* pm = std::get_if<PointMass>(&mixing)) return pm->u > u0;
  const auto& u_law = std::get<ProductLaw>(mixing).u_law;
  const double lo = law_support_min(u_law);
  if (std::holds_alternative<Const>(u_law)) return lo > u0;
  return lo >= u0;  // continuous law: no atom at the boundary
}

bool MixtureSpec::gev_admissible() const {
  if (const auto* pm = std::get_if<PointMass>(&mixing)) return pm->sigma_sq >= sigma0_sq;
  const double lo = law_support_min(std::get<ProductLaw>(mixing).sigma_law);
  return lo * lo >= sigma0_sq;
}

std::size_t null_count(const MixtureSpec& spec, std::size_t n) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - spec.eps)));
}

SampleSet sample_iid(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw ValidationError("sample_iid: n must be >= 1");
  rng::Engine eng(seed);
  const std::size_t nulls = null_count(spec, n);
  const double sigma0 = std::sqrt(spec.sigma0_sq);

  SampleSet out;
  out.values.reserve(n);
  out.seed = seed;
  for (std::size_t j = 0; j < nulls; ++j) {
    out.values.push_back(spec.u0 + sigma0 * eng.normal());
  }
  for (std::size_t j = nulls; j < n; ++j) {
    double u, sigma;
    if (const auto* pm = std::get_if<PointMass>(&spec.mixing)) {
      u = pm->u;
      sigma = std::sqrt(pm->sigma_sq);
    } else {
      const auto& prod = std::get<ProductLaw>(spec.mixing);
      u = law_draw(prod.u_law, eng);
      sigma = law_draw(prod.sigma_law, eng);
    }
    out.values.push_back(u + sigma * eng.normal());
  }
  return out;
}

SampleSet sample_block_dependent(const MixtureSpec& spec, std::size_t n, std::size_t L,
                                 std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw ValidationError("sample_block_dependent: n must be >= 1");
  rng::Engine eng(seed);
  const std::size_t nulls = null_count(spec, n);
  const double sigma0 = std::sqrt(spec.sigma0_sq);

  std::vector<double> mu(n), sig(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j < nulls) {
      mu[j] = spec.u0;
      sig[j] = sigma0;
    } else if (const auto* pm = std::get_if<PointMass>(&spec.mixing)) {
      mu[j] = pm->u;
      sig[j] = std::sqrt(pm->sigma_sq);
    } else {
      const auto& prod = std::get<ProductLaw>(spec.mixing);
      mu[j] = law_draw(prod.u_law, eng);
      sig[j] = law_draw(prod.sigma_law, eng);
    }
  }

  // Prefix sums of the white noise; z_j = (S[j+L] - S[j-1]) / sqrt(L+1).
  std::vector<double> prefix(n + L + 1);
  prefix[0] = 0.0;
  for (std::size_t i = 1; i <= n + L; ++i) prefix[i] = prefix[i - 1] + eng.normal();
  const double scale = 1.0 / std::sqrt(static_cast<double>(L + 1));

  SampleSet out;
  out.values.resize(n);
  out.seed = seed;
  out.block_len = L;
  for (std::size_t j = 1; j <= n; ++j) {
    const double z = (prefix[j + L] - prefix[j - 1]) * scale;
    out.values[j - 1] = mu[j - 1] + sig[j - 1] * z;
  }
  return out;
}

Complex phi0(double t, const MixtureSpec& spec) {
  const double re = -spec.u0 * t * kInvSqrt2;
  exponent_guard(re, "phi0");
  return (1.0 - spec.eps) * std::exp(Complex{re, re + 0.5 * spec.sigma0_sq * t * t});
}

Complex phi0_deriv(double t, const MixtureSpec& spec) {
  return (kOmega * spec.u0 + Complex{0.0, spec.sigma0_sq * t}) * phi0(t, spec);
}

Complex r_of_t(double t, const MixtureSpec& spec, Eval eval) {
  if (spec.eps == 0.0) return {0.0, 0.0};
  const double pref = spec.eps / (1.0 - spec.eps);
  if (const auto* pm = std::get_if<PointMass>(&spec.mixing)) {
    const double delta = pm->u - spec.u0;
    const double kappa = pm->sigma_sq - spec.sigma0_sq;
    const double re = -delta * t * kInvSqrt2;
    exponent_guard(re, "r point mass");
    return pref * std::exp(Complex{re, re + 0.5 * kappa * t * t});
  }
  const auto& prod = std::get<ProductLaw>(spec.mixing);
  const Complex z = kOmega * t;
  const Complex c{0.0, 0.5 * t * t};
  return pref * delta_moment(z, prod.u_law, spec.u0, false, eval) *
         kappa_moment(c, prod.sigma_law, spec.sigma0_sq, false, eval);
}

Complex r_deriv(double t, const MixtureSpec& spec, Eval eval) {
  if (spec.eps == 0.0) return {0.0, 0.0};
  const double pref = spec.eps / (1.0 - spec.eps);
  if (const auto* pm = std::get_if<PointMass>(&spec.mixing)) {
    const double delta = pm->u - spec.u0;
    const double kappa = pm->sigma_sq - spec.sigma0_sq;
    const double re = -delta * t * kInvSqrt2;
    exponent_guard(re, "r' point mass");
    const Complex weight = kOmega * delta + Complex{0.0, kappa * t};
    return pref * weight * std::exp(Complex{re, re + 0.5 * kappa * t * t});
  }
  const auto& prod = std::get<ProductLaw>(spec.mixing);
  const Complex z = kOmega * t;
  const Complex c{0.0, 0.5 * t * t};
  const Complex u_plain = delta_moment(z, prod.u_law, spec.u0, false, eval);
  const Complex u_weighted = delta_moment(z, prod.u_law, spec.u0, true, eval);
  const Complex k_plain = kappa_moment(c, prod.sigma_law, spec.sigma0_sq, false, eval);
  const Complex k_weighted = kappa_moment(c, prod.sigma_law, spec.sigma0_sq, true, eval);
  return pref * (kOmega * u_weighted * k_plain + Complex{0.0, t} * u_plain * k_weighted);
}

Complex s_of_t(double t, const MixtureSpec& spec, Eval eval) {
  if (spec.eps == 0.0) return {0.0, 0.0};
  const double pref = spec.eps / (1.0 - spec.eps);
  if (const auto* pm = std::get_if<PointMass>(&spec.mixing)) {
    const double delta = pm->u - spec.u0;
    const double kappa = pm->sigma_sq - spec.sigma0_sq;
    const double re = -0.5 * kappa * t * t;
    exponent_guard(re, "s point mass");
    return pref * std::exp(Complex{re, delta * t});
  }
  const auto& prod = std::get<ProductLaw>(spec.mixing);
  const Complex z{0.0, t};
  const Complex c{-0.5 * t * t, 0.0};
  return pref * delta_moment(z, prod.u_law, spec.u0, false, eval) *
         kappa_moment(c, prod.sigma_law, spec.sigma0_sq, false, eval);
}

PopulationGchar population_gchar(double t, const MixtureSpec& spec) {
  const Complex base = phi0(t, spec);
  const Complex base_deriv = phi0_deriv(t, spec);
  if (spec.eps == 0.0) return {base, base_deriv};
  const Complex r = r_of_t(t, spec);
  const Complex rd = r_deriv(t, spec);
  return {base * (1.0 + r), base_deriv * (1.0 + r) + base * rd};
}

VarianceBound variance_bound(double t, std::size_t n, const MixtureSpec& spec) {
  if (n == 0) throw ValidationError("variance_bound: n must be >= 1");
  const double cap = spec.variance_cap();
  const double s0 = spec.sigma0_sq;
  const double u0 = spec.u0;
  const double eps = spec.eps;
  const double base = std::exp(-kSqrt2 * u0 * t + s0 * t * t) / static_cast<double>(n);
  const double bump = std::exp((cap - s0) * t * t);
  VarianceBound out;
  out.v_phi = base * ((1.0 - eps) + eps * bump);
  out.v_phi_prime =
      base * ((1.0 - eps) * (s0 + 2.0 * u0 * u0 + 4.0 * s0 * s0 * t * t) +
              eps * (cap + 2.0 * u0 * u0 + 4.0 * cap * cap * t * t) * bump);
  return out;
}

double bias_rate_bound(double t, const MixtureSpec& spec) {
  if (!spec.delta_n) throw MissingDeltaError();
  if (!(t > 0.0)) throw ZeroFrequencyError("bias_rate_bound requires t > 0");
  if (spec.eps == 0.0) return 0.0;
  const double delta = *spec.delta_n;
  const double cap = spec.variance_cap();
  const double pref = spec.eps / (1.0 - spec.eps);
  return pref * (delta + kSqrt2 / (std::numbers::e * t) + cap * t) *
         std::exp(-delta * t * kInvSqrt2);
}

}  // namespace nulllab::mix
