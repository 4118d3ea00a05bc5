#pragma once

// Maximum-likelihood EM with moment-matched M-steps: GGM (Gaussian + Gamma)
// and GIM (Gaussian + inverse-Gamma).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gammamix/distributions.hpp"
#include "gammamix/mixture.hpp"

namespace gammamix {

struct MLFitConfig {
  int max_iterations = 1000;
  double rel_tolerance = 1e-6;      // on the observed-data log-likelihood
  double min_component_mass = 1.0;  // components with N_k below this are frozen
  std::uint64_t seed = 0;           // k-means seed when the caller initializes
};

struct MLFitResult {
  MixtureParams params;
  Responsibilities responsibilities;
  std::vector<double> loglik_trace;
  int iterations = 0;
  double wall_time_seconds = 0.0;
  bool converged = false;
};

namespace detail {

inline constexpr double kMLVarianceFloor = 1e-10;
inline constexpr double kMinShape = 1e-3;
inline constexpr double kMaxShape = 1e6;

struct WeightedMoments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// Two-pass weighted mean/variance of sign * x over entries with sign * x > 0
// (or over all entries when sign == 0).
inline WeightedMoments weighted_moments(std::span<const double> data, const Responsibilities& g,
                                        int k, int sign) {
  WeightedMoments m;
  double sum = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const double t = sign < 0 ? -data[n] : data[n];
    if (sign != 0 && t <= 0.0) continue;
    m.mass += g[n][k];
    sum += g[n][k] * t;
  }
  if (m.mass <= 0.0) return m;
  m.mean = sum / m.mass;
  double ss = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const double t = sign < 0 ? -data[n] : data[n];
    if (sign != 0 && t <= 0.0) continue;
    ss += g[n][k] * (t - m.mean) * (t - m.mean);
  }
  m.variance = std::max(ss / m.mass, kMLVarianceFloor);
  return m;
}

// Method of moments with the shape clamped to [kMinShape, kMaxShape]; the
// scale parameter is re-derived so the clamped component keeps the mean.
inline ShapeRateParams clamped_mom(ActivationFamily f, double mean, double variance, Sign sign) {
  ShapeRateParams p = mom(f, mean, variance, sign);
  const double s = std::clamp(p.shape, kMinShape, kMaxShape);
  if (s != p.shape) {
    p.shape = s;
    p.rate_or_scale = f == ActivationFamily::gamma ? s / mean : mean * std::max(s - 1.0, kMinShape);
  }
  return p;
}

}  // namespace detail

/// One moment-matching M-step. Components whose soft count falls below
/// min_component_mass keep their previous parameters; pi_k = N_k / N always.
inline MixtureParams m_step(std::span<const double> data, const Responsibilities& gamma,
                            ActivationFamily family, const MixtureParams& previous,
                            double min_component_mass = 1.0) {
  MixtureParams next = previous;
  const auto counts = gamma.column_sums();
  const double total = counts[0] + counts[1] + counts[2];
  for (int k = 0; k < 3; ++k) next.pi[k] = counts[k] / total;

  if (counts[0] >= min_component_mass) {
    const auto m = detail::weighted_moments(data, gamma, 0, 0);
    next.noise = {m.mean, 1.0 / m.variance};
  }
  const auto pos = detail::weighted_moments(data, gamma, 1, +1);
  if (pos.mass >= min_component_mass) {
    next.positive = detail::clamped_mom(family, pos.mean, pos.variance, Sign::positive);
  }
  const auto neg = detail::weighted_moments(data, gamma, 2, -1);
  if (neg.mass >= min_component_mass) {
    next.negative = detail::clamped_mom(family, neg.mean, neg.variance, Sign::negative);
  }
  return next;
}

inline MLFitResult fit_ml(std::span<const double> data, ActivationFamily family,
                          const MixtureParams& init, const MLFitConfig& cfg) {
  if (cfg.max_iterations < 1 || !(cfg.rel_tolerance > 0.0)) {
    throw DomainError("MLFitConfig: need max_iterations >= 1 and rel_tolerance > 0");
  }
  init.validate();
  const Family want = family == ActivationFamily::gamma ? Family::gamma : Family::inverse_gamma;
  if (init.positive.family.tag() != want || init.negative.family.tag() != want) {
    throw DomainError("fit_ml: initial activation components do not match the model family");
  }
  const auto start = std::chrono::steady_clock::now();

  MLFitResult res;
  res.params = init;
  EStepResult e = e_step_with_loglik(data, res.params);
  res.loglik_trace.push_back(e.log_likelihood);
  while (res.iterations < cfg.max_iterations) {
    res.params = m_step(data, e.gamma, family, res.params, cfg.min_component_mass);
    ++res.iterations;
    e = e_step_with_loglik(data, res.params);
    const double prev = res.loglik_trace.back();
    res.loglik_trace.push_back(e.log_likelihood);
    if (!std::isfinite(e.log_likelihood)) throw NumericError("ML EM: log-likelihood not finite");
    if (std::abs(e.log_likelihood - prev) < cfg.rel_tolerance * std::abs(prev)) {
      res.converged = true;
      break;
    }
  }
  res.responsibilities = std::move(e.gamma);
  res.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// Gaussian/Gamma maximum-likelihood mixture (GGM).
inline MLFitResult fit_ggm(std::span<const double> data, const MixtureParams& init,
                           const MLFitConfig& cfg = {}) {
  return fit_ml(data, ActivationFamily::gamma, init, cfg);
}

/// Gaussian/inverse-Gamma maximum-likelihood mixture (GIM).
inline MLFitResult fit_gim(std::span<const double> data, const MixtureParams& init,
                           const MLFitConfig& cfg = {}) {
  return fit_ml(data, ActivationFamily::inverse_gamma, init, cfg);
}

}  // namespace gammamix
