#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "tubehs/cone.hpp"
#include "tubehs/quadrature.hpp"

namespace tt {

using tubehs::Complex;
using tubehs::Vec;
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

inline Vec v1(double a) { return Vec::Constant(1, a); }
inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
inline Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline double rel(Complex a, Complex b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

inline double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

/// Random point of the closed dual cone, sampled from its own description.
inline Vec sample_dual(Rng& r, const tubehs::Cone& cone, double scale) {
  if (!cone.polyhedral()) {
    const double h = uni(r, 0.0, scale);
    const double s = uni(r, 0.0, h);
    const double t = uni(r, 0.0, 2.0 * kPi);
    return v3(s * std::cos(t), s * std::sin(t), h);
  }
  const tubehs::Mat a = tubehs::dual_view(cone).ray_matrix;
  Vec c(cone.dim());
  for (int i = 0; i < cone.dim(); ++i) c[i] = uni(r, 0.0, scale);
  return a * c;
}

/// Random interior point of the primal cone.
inline Vec sample_interior(Rng& r, const tubehs::Cone& cone, double lo, double hi) {
  if (!cone.polyhedral()) {
    const double h = uni(r, lo, hi);
    const double s = uni(r, 0.0, 0.5 * h);
    const double t = uni(r, 0.0, 2.0 * kPi);
    return v3(s * std::cos(t), s * std::sin(t), h);
  }
  Vec c(cone.dim());
  for (int i = 0; i < cone.dim(); ++i) c[i] = uni(r, lo, hi);
  return cone.generators() * c;
}

}  // namespace tt
