#include "nulllab/cft.hpp"

#include <cmath>

#include "nulllab/errors.hpp"

namespace nulllab::cft {

CharPair echar(std::span<const double> samples, double t) {
  if (samples.empty()) throw EmptySampleError();
  if (!std::isfinite(t)) throw ValidationError("echar: non-finite frequency");

  KahanSum val_re, val_im, x_re, x_im;
  for (const double x : samples) {
    if (!std::isfinite(x)) throw ValidationError("echar: non-finite sample");
    const double b = t * x;
    const double c = std::cos(b);
    const double s = std::sin(b);
    val_re.add(c);
    val_im.add(s);
    x_re.add(x * c);
    x_im.add(x * s);
  }
  const double n = static_cast<double>(samples.size());
  const Complex value{val_re.sum / n, val_im.sum / n};
  // deriv = i * mean(x exp(itx))
  const Complex deriv{-x_im.sum / n, x_re.sum / n};
  return {value, deriv, t, samples.size()};
}

double u0_functional(const gft::FunctionalInput& in) {
  const double mod_sq = std::norm(in.g);
  if (mod_sq == 0.0) throw ZeroModulusError();
  return std::imag(std::conj(in.g) * in.g_prime) / mod_sq;
}

double sigma0_sq_functional(const gft::FunctionalInput& in) {
  if (in.t == 0.0) throw ZeroFrequencyError("classical sigma0_sq functional requires t != 0");
  const double mod_sq = std::norm(in.g);
  if (mod_sq == 0.0) throw ZeroModulusError();
  return -std::real(std::conj(in.g) * in.g_prime) / (in.t * mod_sq);
}

gft::EpsResult eps_functional(Complex g_value, double t, double u0, double sigma0_sq) {
  if (!std::isfinite(g_value.real()) || !std::isfinite(g_value.imag()) ||
      !std::isfinite(u0) || !std::isfinite(sigma0_sq) || !std::isfinite(t)) {
    throw ValidationError("eps_functional: non-finite input");
  }
  const double re_exp = 0.5 * sigma0_sq * t * t;
  if (re_exp > kExpGuard) {
    throw OverflowError("classical eps functional exponent " + std::to_string(re_exp) +
                        " exceeds guard");
  }
  const Complex unwind = std::exp(Complex{re_exp, -u0 * t});
  const Complex raw = 1.0 - unwind * g_value;
  double eps = raw.real();
  if (eps < 0.0) eps = 0.0;
  if (eps > 1.0) eps = 1.0;
  return {eps, raw};
}

}  // namespace nulllab::cft
