#pragma once

// Variational Bayes learners for the Gaussian + Gamma (bGGM) and
// Gaussian + inverse-Gamma (bGIM) mixtures.
//
// Factors: q(Z) q(pi) q(mu1) q(tau1) prod_k q(r_k) q(s_k), with
//   q(pi)   = Dirichlet(lambda_hat)
//   q(mu1)  = Normal(m_hat, precision tau_hat)
//   q(tau1) = Gamma(shape c_hat, scale b_hat)
//   q(r_k)  = Gamma(shape d_hat, rate e_hat)
//   q(s_k)  proportional to a_hat^(+-s - 1) r^(s c_hat) / Gamma(s)^b_hat, summarized
//           by its Laplace approximation Normal(mode, precision b_hat psi1(mode)).
//
// Component 2 lives on x > 0, component 3 on x < 0 and sees the mirrored
// value -x. For inverse-Gamma components the rate statistic accumulated for
// q(r_k) is sum gamma_nk / x, the term multiplying r_k in the likelihood.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gammamix/distributions.hpp"
#include "gammamix/errors.hpp"
#include "gammamix/initialization.hpp"
#include "gammamix/mixture.hpp"
#include "gammamix/special_functions.hpp"

namespace gammamix {

/// Priors for one activation component.
struct ShapePrior {
  ActivationFamily family = ActivationFamily::gamma;
  double d0 = 1.0;      // Gamma shape prior on r
  double e0 = 1.0;      // Gamma rate prior on r
  double log_a0 = 0.0;  // unnormalized shape prior a0^(+-s-1) r^(s c0) / Gamma(s)^b0
  double b0 = 1.0;
  double c0 = 1.0;
};

struct HyperPriors {
  double lambda0 = 5.0;  // symmetric Dirichlet
  double m0 = 0.0;       // Normal prior on mu1: mean
  double tau0 = 1.0;     // ... and precision
  double c0_tau = 0.01;  // Gamma prior on tau1: shape
  double b0_tau = 100.0; // ... and scale
  std::array<ShapePrior, 2> activation;  // [0] positive, [1] negative

  void validate() const {
    auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!pos(lambda0) || !pos(tau0) || !pos(c0_tau) || !pos(b0_tau) || !std::isfinite(m0)) {
      throw DomainError("HyperPriors: lambda0, tau0, c0_tau, b0_tau must be > 0");
    }
    for (const auto& a : activation) {
      if (!pos(a.d0) || !pos(a.e0) || !pos(a.b0) || !pos(a.c0) || !std::isfinite(a.log_a0)) {
        throw DomainError("HyperPriors: d0, e0, b0, c0 must be > 0");
      }
    }
  }
};

/// Shape prior centred on s0 with rate/scale r0 taken from mean = variance = 10.
inline ShapePrior default_shape_prior(ActivationFamily family) {
  const ShapeRateParams p0 = mom(family, 10.0, 10.0, Sign::positive);
  const double s0 = p0.shape;
  const double r0 = p0.rate_or_scale;
  ShapePrior sp;
  sp.family = family;
  sp.d0 = r0;
  sp.e0 = 1.0;
  sp.b0 = sp.c0 = 1.0 / (s0 * trigamma(s0));
  if (family == ActivationFamily::gamma) {
    sp.log_a0 = sp.b0 * digamma(s0) - sp.c0 * std::log(r0);
  } else {
    sp.log_a0 = -sp.b0 * digamma(s0) + sp.c0 * std::log(r0);
  }
  return sp;
}

inline HyperPriors default_hyperpriors(ActivationFamily positive, ActivationFamily negative) {
  HyperPriors hp;
  hp.activation = {default_shape_prior(positive), default_shape_prior(negative)};
  return hp;
}

inline HyperPriors default_hyperpriors(ActivationFamily family) {
  return default_hyperpriors(family, family);
}

struct ActivationPosterior {
  double d_hat = 1.0;
  double e_hat = 1.0;
  double log_a_hat = 0.0;
  double b_hat = 1.0;
  double c_hat = 1.0;
};

struct VBState {
  std::array<double, 3> lambda_hat{};
  double m_hat = 0.0;
  double tau_hat = 1.0;
  double c_hat = 1.0;  // q(tau1) shape
  double b_hat = 1.0;  // q(tau1) scale
  std::array<ActivationPosterior, 2> activation;

  static VBState from_prior(const HyperPriors& hp) {
    VBState s;
    s.lambda_hat = {hp.lambda0, hp.lambda0, hp.lambda0};
    s.m_hat = hp.m0;
    s.tau_hat = hp.tau0;
    s.c_hat = hp.c0_tau;
    s.b_hat = hp.b0_tau;
    for (int k = 0; k < 2; ++k) {
      const auto& p = hp.activation[k];
      s.activation[k] = {p.d0, p.e0, p.log_a0, p.b0, p.c0};
    }
    return s;
  }
};

struct ActivationExpectations {
  double r = 1.0;
  double log_r = 0.0;
  double s = 1.0;            // Laplace mode of q(s)
  double log_gamma_s = 0.0;  // <log Gamma(s)>
  double s_precision = 1.0;  // b_hat psi1(<s>)
};

struct ExpectationCache {
  std::array<double, 3> pi{};
  std::array<double, 3> log_pi{};
  double mu = 0.0;
  double mu2 = 0.0;
  double tau = 1.0;
  double log_tau = 0.0;
  std::array<ActivationExpectations, 2> activation;
};

struct SufficientStats {
  std::array<double, 3> counts{};      // N_k
  std::array<double, 3> sum_x{};       // sum gamma_nk x~_n (x~ = x for noise, mirrored otherwise)
  double sum_x2_noise = 0.0;           // sum gamma_n1 x_n^2
  std::array<double, 2> sum_log_x{};   // sum gamma_nk log x~_n
  std::array<double, 2> sum_inv_x{};   // sum gamma_nk / x~_n
  double entropy = 0.0;                // -sum gamma log gamma

  /// Statistic multiplying <r_k> in the expected log-likelihood.
  double rate_stat(int k, ActivationFamily f) const {
    return f == ActivationFamily::gamma ? sum_x[k + 1] : sum_inv_x[k];
  }

  SufficientStats& operator+=(const SufficientStats& o) {
    for (int k = 0; k < 3; ++k) {
      counts[k] += o.counts[k];
      sum_x[k] += o.sum_x[k];
    }
    for (int k = 0; k < 2; ++k) {
      sum_log_x[k] += o.sum_log_x[k];
      sum_inv_x[k] += o.sum_inv_x[k];
    }
    sum_x2_noise += o.sum_x2_noise;
    entropy += o.entropy;
    return *this;
  }
};

namespace detail {

inline constexpr std::size_t kStatsChunk = 4096;

// Runs body(begin, end, chunk_index) over fixed-size chunks, on up to
// `threads` workers. Chunk boundaries do not depend on the worker count.
template <class Body>
void for_each_chunk(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t chunks = (n + kStatsChunk - 1) / kStatsChunk;
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride) {
      body(c * kStatsChunk, std::min(n, (c + 1) * kStatsChunk), c);
    }
  };
  if (threads <= 1 || chunks <= 1) {
    run(0, 1);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, chunks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  for (auto& t : pool) t.join();
}

inline void add_row(SufficientStats& s, double x, const std::array<double, 3>& g) {
  s.counts[0] += g[0];
  s.sum_x[0] += g[0] * x;
  s.sum_x2_noise += g[0] * x * x;
  if (x != 0.0) {
    const int k = x > 0.0 ? 0 : 1;  // activation slot that can own x
    const double t = std::abs(x);
    const double gk = g[k + 1];
    s.counts[k + 1] += gk;
    s.sum_x[k + 1] += gk * t;
    s.sum_log_x[k] += gk * std::log(t);
    s.sum_inv_x[k] += gk / t;
  }
  for (double v : g)
    if (v > 0.0) s.entropy -= v * std::log(v);
}

inline double kl_gamma_rate(double a_q, double rate_q, double a_p, double rate_p) {
  return (a_q - a_p) * digamma(a_q) - log_gamma(a_q) + log_gamma(a_p) +
         a_p * (std::log(rate_q) - std::log(rate_p)) + a_q * (rate_p - rate_q) / rate_q;
}

inline double kl_normal(double mean_q, double prec_q, double mean_p, double prec_p) {
  const double d = mean_q - mean_p;
  return 0.5 * (std::log(prec_q / prec_p) + prec_p / prec_q + prec_p * d * d - 1.0);
}

inline double kl_dirichlet(const std::array<double, 3>& q, double prior) {
  const double q0 = q[0] + q[1] + q[2];
  double kl = log_gamma(q0) - log_gamma(3.0 * prior);
  const double psi0 = digamma(q0);
  for (double qk : q) kl += log_gamma(prior) - log_gamma(qk) + (qk - prior) * (digamma(qk) - psi0);
  return kl;
}

inline double laplace_mode_argument(ActivationFamily f, double log_a, double b, double c,
                                    double log_r) {
  const double sign = f == ActivationFamily::gamma ? 1.0 : -1.0;
  return (sign * log_a + c * log_r) / b;
}

}  // namespace detail

/// Laplace mode of the unnormalized shape density: a zero of its log-derivative.
inline double shape_mode(ActivationFamily f, double log_a, double b, double c, double log_r) {
  return inv_digamma(detail::laplace_mode_argument(f, log_a, b, c, log_r));
}

/// Second-order expansion of <log Gamma(s)> around the Laplace mode.
inline double expected_log_gamma(double mode, double b) {
  return log_gamma(mode) + 1.0 / b + tetragamma(mode) * mode / (trigamma(mode) * b);
}

inline SufficientStats accumulate_stats(std::span<const double> data, const Responsibilities& g) {
  SufficientStats s;
  for (std::size_t n = 0; n < data.size(); ++n) detail::add_row(s, data[n], g[n]);
  return s;
}

struct ResponsibilityUpdate {
  Responsibilities gamma;
  SufficientStats stats;
};

/// q(Z) update: log rho from the current expectations, normalized per row.
/// Statistics are reduced chunk by chunk in index order, so results do not
/// depend on the worker count.
inline ResponsibilityUpdate update_responsibilities(std::span<const double> data,
                                                    const HyperPriors& priors,
                                                    const ExpectationCache& e,
                                                    unsigned threads = 1) {
  const double noise_const = e.log_pi[0] + 0.5 * e.log_tau - 0.5 * kLogTwoPi -
                             0.5 * e.tau * (e.mu2 - e.mu * e.mu);
  std::array<double, 2> act_const;
  std::array<bool, 2> is_gamma;
  for (int k = 0; k < 2; ++k) {
    const auto& a = e.activation[k];
    act_const[k] = e.log_pi[k + 1] + a.s * a.log_r - a.log_gamma_s;
    is_gamma[k] = priors.activation[k].family == ActivationFamily::gamma;
  }

  ResponsibilityUpdate out;
  out.gamma.rows.resize(data.size());
  const std::size_t chunks = (data.size() + detail::kStatsChunk - 1) / detail::kStatsChunk;
  std::vector<SufficientStats> partial(chunks);
  std::vector<std::size_t> degenerate(chunks, 0);

  detail::for_each_chunk(data.size(), threads, [&](std::size_t b, std::size_t end, std::size_t c) {
    SufficientStats& st = partial[c];
    for (std::size_t n = b; n < end; ++n) {
      const double x = data[n];
      const double d = x - e.mu;
      std::array<double, 3> lw{noise_const - 0.5 * e.tau * d * d, kNegInf, kNegInf};
      if (x != 0.0) {
        const int k = x > 0.0 ? 0 : 1;
        const double t = std::abs(x);
        const double lt = std::log(t);
        const auto& a = e.activation[k];
        lw[k + 1] = is_gamma[k] ? act_const[k] + (a.s - 1.0) * lt - a.r * t
                                : act_const[k] - (a.s + 1.0) * lt - a.r / t;
      }
      auto& row = out.gamma.rows[n];
      if (normalize_log_row(lw, row) == kNegInf) ++degenerate[c];
      detail::add_row(st, x, row);
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    out.stats += partial[c];
    out.gamma.degenerate_rows += degenerate[c];
  }
  return out;
}

/// lambda_hat_k = lambda0 + N_k.
inline std::array<double, 3> update_pi(const SufficientStats& s, const HyperPriors& hp) {
  return {hp.lambda0 + s.counts[0], hp.lambda0 + s.counts[1], hp.lambda0 + s.counts[2]};
}

/// (m_hat, tau_hat): tau_hat = tau0 + <tau1> N_1, m_hat = (tau0 m0 + <tau1> xbar_1) / tau_hat.
inline std::pair<double, double> update_mu(const SufficientStats& s, const HyperPriors& hp,
                                           double e_tau) {
  const double tau_hat = hp.tau0 + e_tau * s.counts[0];
  const double m_hat = (hp.tau0 * hp.m0 + e_tau * s.sum_x[0]) / tau_hat;
  return {m_hat, tau_hat};
}

/// (c_hat, b_hat) of q(tau1) in shape/scale form.
inline std::pair<double, double> update_tau(const SufficientStats& s, const HyperPriors& hp,
                                            double e_mu, double e_mu2) {
  const double quad = s.sum_x2_noise - 2.0 * e_mu * s.sum_x[0] + s.counts[0] * e_mu2;
  const double b_hat = 1.0 / (1.0 / hp.b0_tau + 0.5 * quad);
  const double c_hat = hp.c0_tau + 0.5 * s.counts[0];
  return {c_hat, b_hat};
}

/// (d_hat, e_hat) per activation component: d0 + <s> N_k and e0 + rate statistic.
inline std::array<std::pair<double, double>, 2> update_r(const SufficientStats& s,
                                                         const HyperPriors& hp,
                                                         const std::array<double, 2>& e_s) {
  std::array<std::pair<double, double>, 2> out;
  for (int k = 0; k < 2; ++k) {
    const auto& p = hp.activation[k];
    out[k] = {p.d0 + e_s[k] * s.counts[k + 1], p.e0 + s.rate_stat(k, p.family)};
  }
  return out;
}

struct ShapeUpdate {
  double log_a_hat;
  double b_hat;
  double c_hat;
};

/// log a_hat = log a0 + sum gamma log x~, b_hat = b0 + N_k, c_hat = c0 + N_k.
inline std::array<ShapeUpdate, 2> update_shape(const SufficientStats& s, const HyperPriors& hp) {
  std::array<ShapeUpdate, 2> out;
  for (int k = 0; k < 2; ++k) {
    const auto& p = hp.activation[k];
    out[k] = {p.log_a0 + s.sum_log_x[k], p.b0 + s.counts[k + 1], p.c0 + s.counts[k + 1]};
  }
  return out;
}

inline std::string describe(const VBState& st) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda_hat=(" << st.lambda_hat[0] << "," << st.lambda_hat[1] << "," << st.lambda_hat[2]
     << ") m_hat=" << st.m_hat << " tau_hat=" << st.tau_hat << " c_hat=" << st.c_hat
     << " b_hat=" << st.b_hat;
  for (int k = 0; k < 2; ++k) {
    const auto& a = st.activation[k];
    os << " comp" << k + 2 << "{d_hat=" << a.d_hat << " e_hat=" << a.e_hat
       << " log_a_hat=" << a.log_a_hat << " b_hat=" << a.b_hat << " c_hat=" << a.c_hat << "}";
  }
  return os.str();
}

inline ExpectationCache expectations(const VBState& st, const HyperPriors& hp) {
  ExpectationCache e;
  const double l0 = st.lambda_hat[0] + st.lambda_hat[1] + st.lambda_hat[2];
  const double psi0 = digamma(l0);
  for (int k = 0; k < 3; ++k) {
    e.pi[k] = st.lambda_hat[k] / l0;
    e.log_pi[k] = digamma(st.lambda_hat[k]) - psi0;
  }
  e.mu = st.m_hat;
  e.mu2 = st.m_hat * st.m_hat + 1.0 / st.tau_hat;
  e.tau = st.b_hat * st.c_hat;
  e.log_tau = digamma(st.c_hat) + std::log(st.b_hat);
  for (int k = 0; k < 2; ++k) {
    const auto& a = st.activation[k];
    auto& x = e.activation[k];
    x.r = a.d_hat / a.e_hat;
    x.log_r = digamma(a.d_hat) - std::log(a.e_hat);
    try {
      x.s = shape_mode(hp.activation[k].family, a.log_a_hat, a.b_hat, a.c_hat, x.log_r);
      x.log_gamma_s = expected_log_gamma(x.s, a.b_hat);
      x.s_precision = a.b_hat * trigamma(x.s);
    } catch (const DomainError& err) {
      throw NumericError(std::string("shape expectation failed for component ") +
                         std::to_string(k + 2) + ": " + err.what() + "; state: " + describe(st));
    }
  }
  return e;
}

struct FreeEnergyTerms {
  double expected_loglik = 0.0;  // <log p(x, Z | theta)>
  double entropy = 0.0;          // H[q(Z)]
  double kl_pi = 0.0;
  double kl_mu = 0.0;
  double kl_tau = 0.0;
  std::array<double, 2> kl_r{};
  std::array<double, 2> kl_s{};

  double total() const {
    return expected_loglik + entropy - kl_pi - kl_mu - kl_tau - kl_r[0] - kl_r[1] - kl_s[0] -
           kl_s[1];
  }
};

/// Term-by-term negative free energy. KL[s_k] is the KL divergence between
/// the Laplace Gaussians of the posterior and prior shape densities, both
/// evaluated at the current <log r_k>.
inline FreeEnergyTerms free_energy_terms(const SufficientStats& s, const VBState& st,
                                         const HyperPriors& hp, const ExpectationCache& e) {
  FreeEnergyTerms f;
  double ll = 0.0;
  for (int k = 0; k < 3; ++k) ll += s.counts[k] * e.log_pi[k];
  ll += s.counts[0] * (0.5 * e.log_tau - 0.5 * kLogTwoPi) -
        0.5 * e.tau * (s.sum_x2_noise - 2.0 * e.mu * s.sum_x[0] + s.counts[0] * e.mu2);
  for (int k = 0; k < 2; ++k) {
    const auto& a = e.activation[k];
    const auto& p = hp.activation[k];
    const double n = s.counts[k + 1];
    const double common = a.s * n * a.log_r - n * a.log_gamma_s - a.r * s.rate_stat(k, p.family);
    if (p.family == ActivationFamily::gamma) {
      ll += (a.s - 1.0) * s.sum_log_x[k] + common;
    } else {
      ll += -(a.s + 1.0) * s.sum_log_x[k] + common;
    }
  }
  f.expected_loglik = ll;
  f.entropy = s.entropy;
  f.kl_pi = detail::kl_dirichlet(st.lambda_hat, hp.lambda0);
  f.kl_mu = detail::kl_normal(st.m_hat, st.tau_hat, hp.m0, hp.tau0);
  f.kl_tau = detail::kl_gamma_rate(st.c_hat, 1.0 / st.b_hat, hp.c0_tau, 1.0 / hp.b0_tau);
  for (int k = 0; k < 2; ++k) {
    const auto& a = st.activation[k];
    const auto& p = hp.activation[k];
    f.kl_r[k] = detail::kl_gamma_rate(a.d_hat, a.e_hat, p.d0, p.e0);
    const double prior_mode = shape_mode(p.family, p.log_a0, p.b0, p.c0, e.activation[k].log_r);
    const double prior_prec = p.b0 * trigamma(prior_mode);
    f.kl_s[k] = detail::kl_normal(e.activation[k].s, e.activation[k].s_precision, prior_mode,
                                  prior_prec);
  }
  return f;
}

inline double negative_free_energy(const SufficientStats& s, const VBState& st,
                                   const HyperPriors& hp, const ExpectationCache& e) {
  const double f = free_energy_terms(s, st, hp, e).total();
  if (!std::isfinite(f)) throw NumericError("negative free energy is not finite; state: " + describe(st));
  return f;
}

inline double negative_free_energy(std::span<const double> data, const Responsibilities& gamma,
                                   const VBState& st, const HyperPriors& hp,
                                   const ExpectationCache& e) {
  return negative_free_energy(accumulate_stats(data, gamma), st, hp, e);
}

struct VBFitConfig {
  int max_iterations = 500;
  double tolerance = 1e-6;  // on |dF| / (1 + |F|)
  std::uint64_t seed = 0;   // k-means seed
  unsigned threads = 1;
  std::optional<HyperPriors> priors;  // defaults when empty
};

struct VBFitResult {
  HyperPriors priors;
  VBState state;
  ExpectationCache expectations;
  Responsibilities responsibilities;
  std::vector<double> nfe_trace;
  int iterations = 0;
  double wall_time_seconds = 0.0;
  bool converged = false;
};

/// Expectations implied by a point estimate; used to seed the first sweep.
inline ExpectationCache expectations_from_point(const MixtureParams& p) {
  ExpectationCache e;
  for (int k = 0; k < 3; ++k) {
    e.pi[k] = p.pi[k];
    e.log_pi[k] = p.pi[k] > 0.0 ? std::log(p.pi[k]) : kNegInf;
  }
  e.mu = p.noise.mu;
  e.mu2 = p.noise.mu * p.noise.mu;
  e.tau = p.noise.tau;
  e.log_tau = std::log(p.noise.tau);
  const std::array<const ShapeRateParams*, 2> comps{&p.positive, &p.negative};
  for (int k = 0; k < 2; ++k) {
    auto& a = e.activation[k];
    a.s = comps[k]->shape;
    a.r = comps[k]->rate_or_scale;
    a.log_r = std::log(a.r);
    a.log_gamma_s = log_gamma(a.s);
    a.s_precision = trigamma(a.s);
  }
  return e;
}

/// Variational fit from k-means initialization. Each sweep updates, in order,
/// q(Z), q(pi), q(mu1), q(tau1), q(r), q(s) and then the expectations; the
/// first sweep takes q(Z) from the initialization.
inline VBFitResult fit_vb(std::span<const double> data, ActivationFamily positive,
                          ActivationFamily negative, const VBFitConfig& cfg = {}) {
  if (cfg.max_iterations < 1 || !(cfg.tolerance > 0.0)) {
    throw DomainError("VBFitConfig: need max_iterations >= 1 and tolerance > 0");
  }
  const auto start = std::chrono::steady_clock::now();
  VBFitResult res;
  res.priors = cfg.priors ? *cfg.priors : default_hyperpriors(positive, negative);
  res.priors.activation[0].family = positive;
  res.priors.activation[1].family = negative;
  res.priors.validate();
  const HyperPriors& hp = res.priors;

  Initialization init = initialize(data, positive, negative, cfg.seed);
  ResponsibilityUpdate z{std::move(init.responsibilities), {}};
  z.stats = accumulate_stats(data, z.gamma);

  VBState& st = res.state;
  st = VBState::from_prior(hp);
  ExpectationCache e = expectations_from_point(init.params);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (it > 1) z = update_responsibilities(data, hp, e, cfg.threads);
    const SufficientStats& s = z.stats;

    st.lambda_hat = update_pi(s, hp);
    std::tie(st.m_hat, st.tau_hat) = update_mu(s, hp, e.tau);
    e.mu = st.m_hat;
    e.mu2 = st.m_hat * st.m_hat + 1.0 / st.tau_hat;
    std::tie(st.c_hat, st.b_hat) = update_tau(s, hp, e.mu, e.mu2);
    const auto r = update_r(s, hp, {e.activation[0].s, e.activation[1].s});
    const auto shape = update_shape(s, hp);
    for (int k = 0; k < 2; ++k) {
      auto& a = st.activation[k];
      std::tie(a.d_hat, a.e_hat) = r[k];
      a.log_a_hat = shape[k].log_a_hat;
      a.b_hat = shape[k].b_hat;
      a.c_hat = shape[k].c_hat;
    }
    e = expectations(st, hp);

    const double f = negative_free_energy(s, st, hp, e);
    res.iterations = it;
    const bool has_prev = !res.nfe_trace.empty();
    const double prev = has_prev ? res.nfe_trace.back() : 0.0;
    res.nfe_trace.push_back(f);
    if (has_prev && std::abs(f - prev) / (1.0 + std::abs(f)) < cfg.tolerance) {
      res.converged = true;
      break;
    }
  }
  res.expectations = e;
  res.responsibilities = update_responsibilities(data, hp, e, cfg.threads).gamma;
  res.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// Variational Gaussian/Gamma mixture (bGGM).
inline VBFitResult fit_bggm(std::span<const double> data, const VBFitConfig& cfg = {}) {
  return fit_vb(data, ActivationFamily::gamma, ActivationFamily::gamma, cfg);
}

/// Variational Gaussian/inverse-Gamma mixture (bGIM).
inline VBFitResult fit_bgim(std::span<const double> data, const VBFitConfig& cfg = {}) {
  return fit_vb(data, ActivationFamily::inverse_gamma, ActivationFamily::inverse_gamma, cfg);
}

}  // namespace gammamix
