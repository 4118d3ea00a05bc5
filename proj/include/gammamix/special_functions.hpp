#pragma once

// Log-gamma and the polygamma family on the positive real axis.
//
// digamma/trigamma/tetragamma shift the argument above kAsymptoticThreshold
// with the upward recurrences and then sum the Bernoulli asymptotic series.
// Arguments <= 1e-300 or non-finite are rejected with DomainError.

#include <cmath>
#include <limits>
#include <string>

#include "gammamix/errors.hpp"

namespace gammamix {

inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

inline constexpr double kAsymptoticThreshold = 10.0;
inline constexpr double kMinArgument = 1e-300;

inline void check_positive(double x, const char* fn) {
  if (!std::isfinite(x) || x <= kMinArgument) {
    throw DomainError(std::string(fn) + ": argument must be finite and > 1e-300, got " +
                      std::to_string(x));
  }
}

}  // namespace detail

inline double log_gamma(double x) {
  detail::check_positive(x, "log_gamma");
  return std::lgamma(x);
}

inline double digamma(double x) {
  detail::check_positive(x, "digamma");
  double acc = 0.0;
  while (x < detail::kAsymptoticThreshold) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double z = 1.0 / (x * x);
  // -sum B_2k / (2k x^2k), k = 1..7
  const double series =
      z * (-1.0 / 12 +
           z * (1.0 / 120 +
                z * (-1.0 / 252 +
                     z * (1.0 / 240 + z * (-1.0 / 132 + z * (691.0 / 32760 + z * (-1.0 / 12)))))));
  return acc + std::log(x) - 0.5 / x + series;
}

inline double trigamma(double x) {
  detail::check_positive(x, "trigamma");
  double acc = 0.0;
  while (x < detail::kAsymptoticThreshold) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double z = 1.0 / (x * x);
  // sum B_2k / x^(2k+1), k = 1..7
  const double series =
      z / x *
      (1.0 / 6 +
       z * (-1.0 / 30 +
            z * (1.0 / 42 + z * (-1.0 / 30 + z * (5.0 / 66 + z * (-691.0 / 2730 + z * (7.0 / 6)))))));
  return acc + 1.0 / x + 0.5 * z + series;
}

inline double tetragamma(double x) {
  detail::check_positive(x, "tetragamma");
  double acc = 0.0;
  while (x < detail::kAsymptoticThreshold) {
    acc -= 2.0 / (x * x * x);
    x += 1.0;
  }
  const double z = 1.0 / (x * x);
  // -sum (2k+1) B_2k / x^(2k+2), k = 1..7
  const double series =
      z * z *
      (-1.0 / 2 +
       z * (1.0 / 6 +
            z * (-1.0 / 6 + z * (3.0 / 10 + z * (-5.0 / 6 + z * (691.0 / 210 + z * (-35.0 / 2)))))));
  return acc - z - z / x + series;
}

/// Inverse of digamma on (0, inf): Newton iteration on digamma(x) - y.
inline double inv_digamma(double y) {
  if (!std::isfinite(y)) {
    throw DomainError("inv_digamma: argument must be finite");
  }
  double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + kEulerGamma);
  if (!std::isfinite(x)) {
    throw DomainError("inv_digamma: argument " + std::to_string(y) + " out of range");
  }
  for (int it = 0; it < 50; ++it) {
    const double residual = digamma(x) - y;
    if (std::abs(residual) < 1e-12) break;
    double next = x - residual / trigamma(x);
    // digamma is concave, so Newton never overshoots to the right; guard the left edge.
    if (next <= 0.0) next = 0.5 * x;
    if (next <= detail::kMinArgument) {
      throw DomainError("inv_digamma: argument " + std::to_string(y) + " out of range");
    }
    x = next;
  }
  return x;
}

}  // namespace gammamix
