#pragma once

// Component densities, samplers and method-of-moments estimators.
//
// Activation components are Gamma (shape s, rate r) or inverse-Gamma
// (shape s, scale r) on x > 0, or their mirrors on x < 0 evaluated at -x.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gammamix/errors.hpp"
#include "gammamix/random.hpp"
#include "gammamix/special_functions.hpp"

namespace gammamix {

inline constexpr double kLogTwoPi = 1.83787706640934548356;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class Family { gaussian, gamma, inverse_gamma };
enum class Sign { positive, negative };

/// Family choice for the two activation components of a model.
enum class ActivationFamily { gamma, inverse_gamma };

class ComponentFamily {
 public:
  static constexpr ComponentFamily gaussian() { return {Family::gaussian, std::nullopt}; }
  static constexpr ComponentFamily gamma(Sign s) { return {Family::gamma, s}; }
  static constexpr ComponentFamily inverse_gamma(Sign s) { return {Family::inverse_gamma, s}; }
  static constexpr ComponentFamily activation(ActivationFamily f, Sign s) {
    return f == ActivationFamily::gamma ? gamma(s) : inverse_gamma(s);
  }

  constexpr Family tag() const { return tag_; }
  constexpr std::optional<Sign> sign() const { return sign_; }
  constexpr bool is_negative() const { return sign_ == Sign::negative; }
  constexpr bool operator==(const ComponentFamily&) const = default;

 private:
  constexpr ComponentFamily(Family t, std::optional<Sign> s) : tag_(t), sign_(s) {}
  Family tag_;
  std::optional<Sign> sign_;
};

inline std::string to_string(ActivationFamily f) {
  return f == ActivationFamily::gamma ? "gamma" : "inverse_gamma";
}

struct GaussianParams {
  double mu = 0.0;
  double tau = 1.0;  // precision

  double variance() const { return 1.0 / tau; }
  void validate() const {
    if (!std::isfinite(mu) || !std::isfinite(tau) || tau <= 0.0) {
      throw DomainError("GaussianParams: need finite mu and tau > 0");
    }
  }
};

struct ShapeRateParams {
  double shape = 1.0;
  double rate_or_scale = 1.0;  // rate for Gamma, scale for inverse-Gamma
  ComponentFamily family = ComponentFamily::gamma(Sign::positive);

  void validate() const {
    if (family.tag() == Family::gaussian) {
      throw DomainError("ShapeRateParams: family must be Gamma or inverse-Gamma");
    }
    if (!(shape > 0.0) || !(rate_or_scale > 0.0) || !std::isfinite(shape) ||
        !std::isfinite(rate_or_scale)) {
      throw DomainError("ShapeRateParams: need finite shape > 0 and rate/scale > 0");
    }
  }

  /// Mean of the positive twin (infinite for inverse-Gamma with shape <= 1).
  double abs_mean() const {
    if (family.tag() == Family::gamma) return shape / rate_or_scale;
    return shape > 1.0 ? rate_or_scale / (shape - 1.0) : std::numeric_limits<double>::infinity();
  }
  double variance() const {
    if (family.tag() == Family::gamma) return shape / (rate_or_scale * rate_or_scale);
    if (shape <= 2.0) return std::numeric_limits<double>::infinity();
    const double m = rate_or_scale / (shape - 1.0);
    return m * m / (shape - 2.0);
  }
};

inline double log_pdf(const GaussianParams& p, double x) {
  if (!std::isfinite(x)) throw DomainError("log_pdf: non-finite x");
  const double d = x - p.mu;
  return 0.5 * std::log(p.tau) - 0.5 * kLogTwoPi - 0.5 * p.tau * d * d;
}

/// -inf outside the support, including x == 0 for every family.
inline double log_pdf(const ShapeRateParams& p, double x) {
  if (!std::isfinite(x)) throw DomainError("log_pdf: non-finite x");
  const double t = p.family.is_negative() ? -x : x;
  if (t <= 0.0) return kNegInf;
  const double s = p.shape;
  const double r = p.rate_or_scale;
  const double lt = std::log(t);
  if (p.family.tag() == Family::gamma) {
    return s * std::log(r) - log_gamma(s) + (s - 1.0) * lt - r * t;
  }
  return s * std::log(r) - log_gamma(s) - (s + 1.0) * lt - r / t;
}

using ComponentParams = std::variant<GaussianParams, ShapeRateParams>;

inline double log_pdf(const ComponentParams& p, double x) {
  return std::visit([x](const auto& c) { return log_pdf(c, x); }, p);
}

inline double draw(const GaussianParams& p, Rng& rng) {
  return p.mu + rng.normal() / std::sqrt(p.tau);
}

inline double draw(const ShapeRateParams& p, Rng& rng) {
  double t;
  if (p.family.tag() == Family::gamma) {
    t = rng.gamma(p.shape, p.rate_or_scale);
  } else {
    // 1/G ~ InvGamma(s, scale r) when G ~ Gamma(s, rate r).
    t = 1.0 / rng.gamma(p.shape, p.rate_or_scale);
  }
  return p.family.is_negative() ? -t : t;
}

template <class Params>
std::vector<double> sample(const Params& p, std::size_t n, Rng& rng) {
  p.validate();
  std::vector<double> out(n);
  for (auto& v : out) v = draw(p, rng);
  return out;
}

inline std::vector<double> sample(const ComponentParams& p, std::size_t n, Rng& rng) {
  return std::visit([&](const auto& c) { return sample(c, n, rng); }, p);
}

inline void check_moments(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0) || !std::isfinite(mean) || !std::isfinite(variance)) {
    throw EstimationError("method of moments: need finite mean > 0 and variance > 0");
  }
}

/// Method of moments for Gamma: s = m^2/v, r = m/v.
inline ShapeRateParams mom_gamma(double mean, double variance, Sign sign = Sign::positive) {
  check_moments(mean, variance);
  return {mean * mean / variance, mean / variance, ComponentFamily::gamma(sign)};
}

/// Method of moments for inverse-Gamma: s = m^2/v + 2, r = m (m^2/v + 1).
inline ShapeRateParams mom_invgamma(double mean, double variance, Sign sign = Sign::positive) {
  check_moments(mean, variance);
  const double q = mean * mean / variance;
  return {q + 2.0, mean * (q + 1.0), ComponentFamily::inverse_gamma(sign)};
}

inline ShapeRateParams mom(ActivationFamily f, double mean, double variance, Sign sign) {
  return f == ActivationFamily::gamma ? mom_gamma(mean, variance, sign)
                                      : mom_invgamma(mean, variance, sign);
}

/// Point estimate of a three-component mixture: Gaussian noise, positive and
/// negative activation.
struct MixtureParams {
  std::array<double, 3> pi{1.0 / 3, 1.0 / 3, 1.0 / 3};
  GaussianParams noise;
  ShapeRateParams positive{1.0, 1.0, ComponentFamily::gamma(Sign::positive)};
  ShapeRateParams negative{1.0, 1.0, ComponentFamily::gamma(Sign::negative)};

  double log_component(std::size_t k, double x) const {
    switch (k) {
      case 0: return log_pdf(noise, x);
      case 1: return log_pdf(positive, x);
      default: return log_pdf(negative, x);
    }
  }

  void validate() const {
    double sum = 0.0;
    for (double p : pi) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("MixtureParams: pi must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("MixtureParams: pi must sum to 1");
    noise.validate();
    positive.validate();
    negative.validate();
    if (positive.family.sign() != Sign::positive || negative.family.sign() != Sign::negative) {
      throw DomainError("MixtureParams: component support signs are positive, negative");
    }
  }
};

}  // namespace gammamix
