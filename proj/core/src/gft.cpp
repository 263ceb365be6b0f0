#include "nulllab/gft.hpp"

#include <cmath>

#include "nulllab/errors.hpp"

namespace nulllab::gft {

namespace {

void require_finite(const FunctionalInput& in, const char* who) {
  if (!std::isfinite(in.g.real()) || !std::isfinite(in.g.imag()) ||
      !std::isfinite(in.g_prime.real()) || !std::isfinite(in.g_prime.imag()) ||
      !std::isfinite(in.t)) {
    throw ValidationError(std::string(who) + ": non-finite functional input");
  }
}

}  // namespace

GcharPair gchar(std::span<const double> samples, double t) {
  if (samples.empty()) throw EmptySampleError();
  if (!std::isfinite(t)) throw ValidationError("gchar: non-finite frequency");

  // exp(omega t x) = exp(-a) * (cos a - i sin a) with a = t*x/sqrt(2).
  KahanSum val_re, val_im, x_re, x_im;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double x = samples[j];
    if (!std::isfinite(x)) throw ValidationError("gchar: non-finite sample");
    const double a = t * x * kInvSqrt2;
    if (-a > kExpGuard) {
      throw OverflowError("gchar summand exponent " + std::to_string(-a) + " exceeds guard", j);
    }
    const double mod = std::exp(-a);
    const double c = mod * std::cos(a);
    const double s = mod * std::sin(a);
    val_re.add(c);
    val_im.add(-s);
    x_re.add(x * c);
    x_im.add(-(x * s));
  }
  const double n = static_cast<double>(samples.size());
  const Complex value{val_re.sum / n, val_im.sum / n};
  const Complex x_mean{x_re.sum / n, x_im.sum / n};
  return {value, kOmega * x_mean, t, samples.size()};
}

double u0_functional(const FunctionalInput& in) {
  require_finite(in, "u0_functional");
  const double mod_sq = std::norm(in.g);
  if (mod_sq == 0.0) throw ZeroModulusError();
  return -kSqrt2 * std::real(std::conj(in.g) * in.g_prime) / mod_sq;
}

double sigma0_sq_functional(const FunctionalInput& in) {
  require_finite(in, "sigma0_sq_functional");
  if (in.t == 0.0) throw ZeroFrequencyError("sigma0_sq functional requires t != 0");
  const double mod_sq = std::norm(in.g);
  if (mod_sq == 0.0) throw ZeroModulusError();
  return kSqrt2 * std::real(kOmega * std::conj(in.g) * in.g_prime) / (in.t * mod_sq);
}

EpsResult eps_functional(Complex g_value, double t, double u0, double sigma0_sq) {
  if (!(t > 0.0)) throw ZeroFrequencyError("eps functional requires t > 0");
  if (!std::isfinite(g_value.real()) || !std::isfinite(g_value.imag()) ||
      !std::isfinite(u0) || !std::isfinite(sigma0_sq)) {
    throw ValidationError("eps_functional: non-finite input");
  }
  // -omega u0 t - i sigma0^2 t^2/2 has real part u0 t / sqrt(2).
  const double re_exp = u0 * t * kInvSqrt2;
  if (re_exp > kExpGuard) {
    throw OverflowError("eps functional exponent " + std::to_string(re_exp) + " exceeds guard");
  }
  const Complex unwind = std::exp(Complex{re_exp, re_exp - 0.5 * sigma0_sq * t * t});
  const Complex raw = 1.0 - unwind * g_value;
  double eps = raw.real();
  if (eps < 0.0) eps = 0.0;
  if (eps > 1.0) eps = 1.0;
  return {eps, raw};
}

PerturbationBounds perturbation_bound_check(const FunctionalInput& f, const FunctionalInput& g) {
  if (f.t != g.t) throw ValidationError("perturbation bound: f and g must share t");
  const double u0_f = u0_functional(f);
  const double u0_g = u0_functional(g);
  const double sig_f = sigma0_sq_functional(f);
  const double sig_g = sigma0_sq_functional(g);

  const double abs_f = std::abs(f.g);
  const double abs_g = std::abs(g.g);
  const double diff = std::abs(f.g - g.g);
  const double diff_prime = std::abs(f.g_prime - g.g_prime);
  const double t = f.t;

  PerturbationBounds out;
  out.lhs_u0 = std::fabs(u0_g - u0_f);
  out.rhs_u0 = ((std::fabs(u0_g) * (abs_f + abs_g) + kSqrt2 * std::abs(g.g_prime)) * diff +
                kSqrt2 * abs_f * diff_prime) /
               (abs_f * abs_f);
  out.lhs_sigma = std::fabs(sig_g - sig_f);
  out.rhs_sigma = ((std::fabs(sig_g) * t * (abs_f + abs_g) + kSqrt2 * std::abs(g.g_prime)) * diff +
                   kSqrt2 * abs_f * diff_prime) /
                  (t * abs_f * abs_f);
  return out;
}

}  // namespace nulllab::gft
