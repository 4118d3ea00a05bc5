#pragma once

// Responsibilities and the density-weighted E-step shared by the ML fitters
// and the initialization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gammamix/distributions.hpp"

namespace gammamix {

/// N x 3 posterior membership probabilities, columns (noise, positive, negative).
struct Responsibilities {
  std::vector<std::array<double, 3>> rows;
  /// Rows with zero weight under every component, hard-assigned to the noise.
  std::size_t degenerate_rows = 0;

  std::size_t size() const { return rows.size(); }
  const std::array<double, 3>& operator[](std::size_t n) const { return rows[n]; }
  std::array<double, 3>& operator[](std::size_t n) { return rows[n]; }

  std::array<double, 3> column_sums() const {
    std::array<double, 3> s{0.0, 0.0, 0.0};
    for (const auto& r : rows)
      for (int k = 0; k < 3; ++k) s[k] += r[k];
    return s;
  }
};

/// Normalizes log-weights into probabilities with a max shift. Returns the
/// log of the normalizer, or -inf when every weight is zero (the row is then
/// assigned to the noise component).
inline double normalize_log_row(const std::array<double, 3>& log_w, std::array<double, 3>& out) {
  const double m = std::max({log_w[0], log_w[1], log_w[2]});
  if (m == kNegInf) {
    out = {1.0, 0.0, 0.0};
    return kNegInf;
  }
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    out[k] = std::exp(log_w[k] - m);
    sum += out[k];
  }
  for (auto& v : out) v /= sum;
  return m + std::log(sum);
}

struct EStepResult {
  Responsibilities gamma;
  double log_likelihood = 0.0;  // sum over non-degenerate rows
};

/// log(pi_k p_k(x)) with the per-component constants hoisted out of the data loop.
class WeightedLogDensity {
 public:
  explicit WeightedLogDensity(const MixtureParams& p) : p_(p) {
    for (int k = 0; k < 3; ++k) log_pi_[k] = p.pi[k] > 0.0 ? std::log(p.pi[k]) : kNegInf;
    noise_const_ = log_pi_[0] + 0.5 * std::log(p.noise.tau) - 0.5 * kLogTwoPi;
    act_const_[0] = log_pi_[1] + activation_const(p.positive);
    act_const_[1] = log_pi_[2] + activation_const(p.negative);
  }

  std::array<double, 3> operator()(double x) const {
    std::array<double, 3> lw;
    const double d = x - p_.noise.mu;
    lw[0] = noise_const_ - 0.5 * p_.noise.tau * d * d;
    lw[1] = activation(p_.positive, act_const_[0], x);
    lw[2] = activation(p_.negative, act_const_[1], -x);
    return lw;
  }

 private:
  static double activation_const(const ShapeRateParams& c) {
    return c.shape * std::log(c.rate_or_scale) - log_gamma(c.shape);
  }
  // t is the mirrored value (x for positive, -x for negative support).
  static double activation(const ShapeRateParams& c, double constant, double t) {
    if (t <= 0.0 || constant == kNegInf) return kNegInf;
    const double lt = std::log(t);
    if (c.family.tag() == Family::gamma) {
      return constant + (c.shape - 1.0) * lt - c.rate_or_scale * t;
    }
    return constant - (c.shape + 1.0) * lt - c.rate_or_scale / t;
  }

  const MixtureParams& p_;
  std::array<double, 3> log_pi_;
  double noise_const_;
  std::array<double, 2> act_const_;
};

inline EStepResult e_step_with_loglik(std::span<const double> data, const MixtureParams& params) {
  const WeightedLogDensity weighted(params);
  EStepResult res;
  res.gamma.rows.resize(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) {
    const double x = data[n];
    if (!std::isfinite(x)) throw DomainError("e_step: non-finite data value");
    const std::array<double, 3> lw = weighted(x);
    const double lse = normalize_log_row(lw, res.gamma.rows[n]);
    if (lse == kNegInf) {
      ++res.gamma.degenerate_rows;
    } else {
      res.log_likelihood += lse;
    }
  }
  return res;
}

/// gamma_k(x_n) = pi_k p_k(x_n) / sum_j pi_j p_j(x_n).
inline Responsibilities e_step(std::span<const double> data, const MixtureParams& params) {
  return e_step_with_loglik(data, params).gamma;
}

inline double log_likelihood(std::span<const double> data, const MixtureParams& params) {
  return e_step_with_loglik(data, params).log_likelihood;
}

}  // namespace gammamix
