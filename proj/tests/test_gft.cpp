#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "nulllab/errors.hpp"
#include "nulllab/gft.hpp"
#include "nulllab/rng.hpp"

using nulllab::Complex;
using nulllab::kOmega;
using nulllab::kSqrt2;
namespace gft = nulllab::gft;

namespace {

// Independent forward model of the null generalized characteristic function,
// used as the inversion oracle for the functionals.
Complex phi0_ref(double t, double u0, double s0, double eps) {
  return (1.0 - eps) * std::exp(kOmega * u0 * t + Complex{0.0, 0.5 * s0 * t * t});
}

Complex phi0_ref_deriv(double t, double u0, double s0, double eps) {
  return (kOmega * u0 + Complex{0.0, s0 * t}) * phi0_ref(t, u0, s0, eps);
}

gft::FunctionalInput phi0_input(double t, double u0, double s0, double eps) {
  return {phi0_ref(t, u0, s0, eps), phi0_ref_deriv(t, u0, s0, eps), t};
}

}  // namespace

TEST_CASE("gchar at t = 0 is exactly one") {
  const std::vector<double> samples{1.25, -3.5, 0.0, 17.0, 2.75};
  const auto pair = gft::gchar(samples, 0.0);
  CHECK(pair.value.real() == 1.0);
  CHECK(pair.value.imag() == 0.0);
  // deriv at 0 is omega times the sample mean
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  CHECK(pair.deriv.real() == doctest::Approx((kOmega * mean).real()).epsilon(1e-15));
  CHECK(pair.deriv.imag() == doctest::Approx((kOmega * mean).imag()).epsilon(1e-15));
}

TEST_CASE("gchar on a zero sample kills value and derivative") {
  const std::vector<double> samples{0.0};
  const auto pair = gft::gchar(samples, 3.7);
  CHECK(pair.value.real() == 1.0);
  CHECK(pair.value.imag() == 0.0);
  CHECK(pair.deriv.real() == 0.0);
  CHECK(pair.deriv.imag() == 0.0);
}

TEST_CASE("gchar single sample matches direct complex exponential") {
  const std::vector<double> samples{kSqrt2};
  const auto pair = gft::gchar(samples, 1.0);
  const Complex expected = std::exp(Complex{-1.0, -1.0});
  CHECK(std::abs(pair.value - expected) < 1e-15);
  CHECK(pair.value.real() == doctest::Approx(0.198766).epsilon(1e-5));
  CHECK(pair.value.imag() == doctest::Approx(-0.309560).epsilon(1e-5));
  const Complex expected_deriv = kOmega * kSqrt2 * expected;
  CHECK(std::abs(pair.deriv - expected_deriv) < 1e-15);
}

TEST_CASE("gchar errors") {
  CHECK_THROWS_AS(gft::gchar(std::vector<double>{}, 1.0), nulllab::EmptySampleError);
  // the second sample drives the modulus exponent past the guard
  const std::vector<double> samples{0.0, -1e6};
  try {
    gft::gchar(samples, 1.0);
    FAIL("expected OverflowError");
  } catch (const nulllab::OverflowError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("gchar modulus bounds") {
  nulllab::rng::Engine eng(42);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> samples(50);
    for (auto& x : samples) x = 3.0 * eng.normal();
    const double t = 0.3 + 2.0 * eng.uniform01();
    const auto pair = gft::gchar(samples, t);
    double sum_mod = 0.0;
    double min_x = samples[0];
    for (double x : samples) {
      sum_mod += std::exp(-t * x / kSqrt2);
      min_x = std::min(min_x, x);
    }
    sum_mod /= static_cast<double>(samples.size());
    CHECK(std::abs(pair.value) <= sum_mod * (1.0 + 1e-12));
    CHECK(std::abs(pair.value) <= std::exp(-t * min_x / kSqrt2) * (1.0 + 1e-12));
  }
}

TEST_CASE("gchar is bit-reproducible") {
  nulllab::rng::Engine eng(7);
  std::vector<double> samples(1000);
  for (auto& x : samples) x = eng.normal();
  const auto a = gft::gchar(samples, 1.37);
  const auto b = gft::gchar(samples, 1.37);
  CHECK(a.value.real() == b.value.real());
  CHECK(a.value.imag() == b.value.imag());
  CHECK(a.deriv.real() == b.deriv.real());
  CHECK(a.deriv.imag() == b.deriv.imag());
}

TEST_CASE("functionals invert phi0 exactly on a parameter grid") {
  const double u0s[] = {-5.0, -3.0, -1.0, 0.0, 1.0, 3.0, 5.0};
  const double s0s[] = {0.1, 0.5, 1.0, 1.5, 2.5, 4.0, 5.0};
  const double epss[] = {0.0, 0.05, 0.1, 0.25, 0.45};
  const double ts[] = {0.1, 0.5, 1.0, 2.0, 5.0};
  for (const double u0 : u0s)
    for (const double s0 : s0s)
      for (const double eps : epss)
        for (const double t : ts) {
          const auto in = phi0_input(t, u0, s0, eps);
          const double u0_est = gft::u0_functional(in);
          const double s0_est = gft::sigma0_sq_functional(in);
          CHECK(std::abs(u0_est - u0) <= 1e-12 * std::max(1.0, std::abs(u0)));
          CHECK(std::abs(s0_est - s0) <= 1e-12 * std::max(1.0, s0));
        }
}

TEST_CASE("u0 functional on a pure phase-decay input") {
  // point mass at 3: g = exp(omega 3 t), |g| = exp(-3t/sqrt(2))
  const double t = 1.0;
  const Complex g = std::exp(kOmega * 3.0 * t);
  const Complex gp = kOmega * 3.0 * g;
  CHECK(gft::u0_functional({g, gp, t}) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(gft::u0_functional(phi0_input(2.0, 0.0, 1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("sigma0_sq functional cases") {
  CHECK(gft::sigma0_sq_functional(phi0_input(1.5, -1.0, 1.0, 0.05)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gft::sigma0_sq_functional(phi0_input(0.7, 5.0, 0.25, 0.3)) ==
        doctest::Approx(0.25).epsilon(1e-13));
  // no quadratic phase: sigma0_sq = 0
  const double t = 1.3;
  const Complex g = std::exp(kOmega * 2.0 * t);
  const Complex gp = kOmega * 2.0 * g;
  CHECK(std::abs(gft::sigma0_sq_functional({g, gp, t})) < 1e-13);

  CHECK_THROWS_AS(gft::sigma0_sq_functional(phi0_input(0.0, 1.0, 1.0, 0.0)),
                  nulllab::ZeroFrequencyError);
  CHECK_THROWS_AS(gft::sigma0_sq_functional({Complex{0, 0}, Complex{1, 0}, 1.0}),
                  nulllab::ZeroModulusError);
  CHECK_THROWS_AS(gft::u0_functional({Complex{0, 0}, Complex{1, 0}, 1.0}),
                  nulllab::ZeroModulusError);
}

TEST_CASE("functionals are invariant to rescaling of g") {
  nulllab::rng::Engine eng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const double u0 = -3.0 + 6.0 * eng.uniform01();
    const double s0 = 0.2 + 3.0 * eng.uniform01();
    const double eps = 0.4 * eng.uniform01();
    const double t = 0.2 + 3.0 * eng.uniform01();
    const auto in = phi0_input(t, u0, s0, eps);
    const Complex scale{eng.normal(), eng.normal()};
    if (std::abs(scale) < 1e-3) continue;
    const gft::FunctionalInput scaled{in.g * scale, in.g_prime * scale, t};
    CHECK(std::abs(gft::u0_functional(scaled) - gft::u0_functional(in)) <
          1e-12 * std::max(1.0, std::abs(u0)));
    CHECK(std::abs(gft::sigma0_sq_functional(scaled) - gft::sigma0_sq_functional(in)) <
          1e-12 * std::max(1.0, s0));
  }
}

TEST_CASE("eps functional recovers the proportion from phi0") {
  const double t = 1.4711;
  const double u0 = -1.0;
  const double s0 = 1.0;
  for (const double eps : {0.0, 0.05, 0.3}) {
    const auto res = gft::eps_functional(phi0_ref(t, u0, s0, eps), t, u0, s0);
    CHECK(res.eps == doctest::Approx(eps).epsilon(1e-12));
    CHECK(std::abs(res.raw - Complex{eps, 0.0}) < 1e-12);
  }
}

TEST_CASE("eps functional on a contaminated transform matches the closed form") {
  // population transform phi = phi0 (1 + r) for a point mass at u0 + 2.5 with
  // kappa = 0; the functional picks up eps (1 - Re exp(omega delta t)).
  const double t = 1.4711;
  const double u0 = -1.0;
  const double s0 = 1.0;
  const double eps = 0.05;
  const double delta = 2.5;
  const Complex r = eps / (1.0 - eps) * std::exp(kOmega * delta * t);
  const Complex phi = phi0_ref(t, u0, s0, eps) * (1.0 + r);
  const auto res = gft::eps_functional(phi, t, u0, s0);
  const double expected = eps * (1.0 - std::exp(kOmega * delta * t).real());
  CHECK(res.eps == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.053186).epsilon(2e-4));
}

TEST_CASE("eps functional clamps to the unit interval") {
  const auto low = gft::eps_functional(Complex{10.0, 0.0}, 1.0, 0.0, 0.0);
  CHECK(low.eps == 0.0);
  CHECK(low.raw.real() == doctest::Approx(-9.0));
  const auto high = gft::eps_functional(Complex{-5.0, 0.0}, 1.0, 0.0, 0.0);
  CHECK(high.eps == 1.0);
  CHECK(high.raw.real() == doctest::Approx(6.0));
  CHECK_THROWS_AS(gft::eps_functional(Complex{1.0, 0.0}, 0.0, 0.0, 1.0),
                  nulllab::ZeroFrequencyError);
  CHECK_THROWS_AS(gft::eps_functional(Complex{1.0, 0.0}, 2.0, 1e6, 1.0), nulllab::OverflowError);
}

TEST_CASE("perturbation bounds: identical inputs give zero on both sides") {
  const auto in = phi0_input(1.0, -1.0, 1.0, 0.05);
  const auto b = gft::perturbation_bound_check(in, in);
  CHECK(b.lhs_u0 == 0.0);
  CHECK(b.rhs_u0 == 0.0);
  CHECK(b.lhs_sigma == 0.0);
  CHECK(b.rhs_sigma == 0.0);
}

TEST_CASE("perturbation bounds hold for nearby null transforms") {
  nulllab::rng::Engine eng(123);
  for (int rep = 0; rep < 200; ++rep) {
    const double u0 = -2.0 + 4.0 * eng.uniform01();
    const double s0 = 0.3 + 2.0 * eng.uniform01();
    const double eps = 0.3 * eng.uniform01();
    const double t = 0.3 + 2.5 * eng.uniform01();
    const double du = 0.3 * (eng.uniform01() - 0.5);
    const double ds = 0.2 * eng.uniform01();
    const auto f = phi0_input(t, u0, s0, eps);
    const auto g = phi0_input(t, u0 + du, s0 + ds, eps);
    const auto b = gft::perturbation_bound_check(f, g);
    CHECK(b.lhs_u0 <= b.rhs_u0 * (1.0 + 1e-9));
    CHECK(b.lhs_sigma <= b.rhs_sigma * (1.0 + 1e-9));
  }
}

TEST_CASE("perturbation bounds: rescaling leaves the functionals fixed") {
  const auto f = phi0_input(2.0, 0.0, 1.0, 0.0);
  const gft::FunctionalInput g{f.g * 1.01, f.g_prime * 1.01, f.t};
  const auto b = gft::perturbation_bound_check(f, g);
  CHECK(b.lhs_u0 <= 1e-12);
  CHECK(b.rhs_u0 >= 0.0);
}
