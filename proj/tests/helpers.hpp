#pragma once

#include <algorithm>
#include <numbers>
#include <random>
#include <vector>

#include "mahler/poly.hpp"

namespace testing {

using mahler::Complex;
using mahler::ComplexPolynomial;

inline Complex random_point(std::mt19937_64& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(r_min * r_min + (r_max * r_max - r_min * r_min) * u(rng));
  return std::polar(r, 2.0 * std::numbers::pi * u(rng));
}

/// Roots drawn from |z| <= r_max, rejecting anything within `gap` of the unit circle.
inline std::vector<Complex> random_roots(std::mt19937_64& rng, int count, double r_max, double gap = 0.0) {
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < count) {
    const Complex z = random_point(rng, 0.0, r_max);
    if (std::abs(std::abs(z) - 1.0) >= gap) out.push_back(z);
  }
  return out;
}

inline ComplexPolynomial from_roots(const std::vector<Complex>& r, Complex leading = 1.0) {
  return ComplexPolynomial::from_roots(r, leading);
}

inline ComplexPolynomial lehmer_sequence(int n) {
  ComplexPolynomial::Coeffs c = ComplexPolynomial::Coeffs::Zero(n + 1);
  c[0] = 1.0;
  c[1] = 1.0;
  c[n] = 1.0;
  return ComplexPolynomial(c);
}

}  // namespace testing
