#pragma once
// Element-level quadrature: an 8-point Gauss-Legendre rule for smooth
// integrands, and closed-form integrals of delta^s r^(N-1) for the elements
// that touch a distance-singular boundary, where the power weight makes
// polynomial quadrature lossy.

#include <array>
#include <cmath>
#include <stdexcept>

namespace hardygap {

/// Gauss-Legendre abscissae/weights on [-1, 1], 8 points (exact to degree 15).
struct Gauss8 {
  static constexpr std::array<double, 8> x = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
      0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> w = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
};

template <class F>
double gauss8(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int q = 0; q < 8; ++q) sum += Gauss8::w[q] * f(mid + half * Gauss8::x[q]);
  return sum * half;
}

/// integral of u^s du over [lo, hi]; the s = -1 case falls back to log.
inline double power_primitive_integral(double s, double lo, double hi) {
  if (std::abs(s + 1.0) < 1e-13) return std::log(hi / lo);
  return (std::pow(hi, s + 1.0) - std::pow(lo, s + 1.0)) / (s + 1.0);
}

/// Exact integral of delta^s r^(N-1) dr over an element adjacent to a flat
/// boundary at radius rb, parametrized by delta in [d_lo, d_hi] with
/// r = rb + orientation * delta (orientation +1: boundary below the element,
/// -1: boundary above).  weight_exp = N-1 must be a small nonnegative integer
/// (0 for Interval kinds), so the binomial expansion is finite.
inline double power_weight_integral(double s, double d_lo, double d_hi,
                                    double rb, double orientation, int weight_exp) {
  if (!(d_hi > d_lo) || !(d_lo > 0.0))
    throw std::invalid_argument("power_weight_integral: need 0 < d_lo < d_hi");
  double total = 0.0;
  double binom = 1.0;  // C(weight_exp, k) accumulated iteratively
  double rb_pow = std::pow(rb, weight_exp);
  for (int k = 0; k <= weight_exp; ++k) {
    const double sign = (orientation < 0.0 && (k % 2)) ? -1.0 : 1.0;
    total += binom * rb_pow * sign * power_primitive_integral(s + k, d_lo, d_hi);
    if (k < weight_exp) {
      binom *= static_cast<double>(weight_exp - k) / (k + 1);
      rb_pow /= rb;
    }
  }
  return total;
}

}  // namespace hardygap
