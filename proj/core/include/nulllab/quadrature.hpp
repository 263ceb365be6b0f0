#pragma once

#include <array>
#include <cmath>

#include "nulllab/common.hpp"
#include "nulllab/errors.hpp"

namespace nulllab::quad {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric half listed).
inline constexpr std::array<double, 8> kGLNodes = {
    0.00000000000000000, 0.20119409399743452, 0.39415134707756337, 0.57097217260853885,
    0.72441773136017005, 0.84820658341042722, 0.93727339240070590, 0.98799251802048543,
};
inline constexpr std::array<double, 8> kGLWeights = {
    0.20257824192556127, 0.19843148532711158, 0.18616100001556221, 0.16626920581699393,
    0.13957067792615431, 0.10715922046717194, 0.07036604748810812, 0.03075324199611727,
};

struct Options {
  double abs_tol = 1e-10;
  int max_depth = 48;
};

template <class F>
Complex gauss_legendre_15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex acc = kGLWeights[0] * f(mid);
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGLNodes[i];
    acc += kGLWeights[i] * (f(mid + dx) + f(mid - dx));
  }
  return half * acc;
}

namespace detail {

template <class F>
Complex adapt(const F& f, double a, double b, double tol, int depth, const Options& opt) {
  const double mid = 0.5 * (a + b);
  const Complex whole = gauss_legendre_15(f, a, b);
  const Complex left = gauss_legendre_15(f, a, mid);
  const Complex right = gauss_legendre_15(f, mid, b);
  const Complex refined = left + right;
  const double err = std::abs(refined - whole);
  if (err <= tol || err <= 1e-16 * std::abs(refined)) return refined;
  if (depth >= opt.max_depth) {
    throw QuadratureError("tolerance " + std::to_string(tol) + " not met after " +
                          std::to_string(opt.max_depth) + " subdivisions");
  }
  return adapt(f, a, mid, 0.5 * tol, depth + 1, opt) +
         adapt(f, mid, b, 0.5 * tol, depth + 1, opt);
}

}  // namespace detail

// Adaptive complex-valued integration of f over [a, b]. Error control is
// absolute: bisect until the GL15 refinement changes by at most the local
// share of abs_tol.
template <class F>
Complex integrate(const F& f, double a, double b, const Options& opt = {}) {
  if (!(a <= b)) throw ValidationError("integrate: requires a <= b");
  if (a == b) return {0.0, 0.0};
  return detail::adapt(f, a, b, opt.abs_tol, 0, opt);
}

}  // namespace nulllab::quad
