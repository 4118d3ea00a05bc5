#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gammamix/experiments.hpp"
#include "gammamix/initialization.hpp"
#include "gammamix/ml_em.hpp"

namespace gm = gammamix;
using gm::ActivationFamily;
using gm::ComponentFamily;
using gm::Sign;

namespace {

gm::Responsibilities one_hot(std::size_t n, int k) {
  gm::Responsibilities g;
  g.rows.assign(n, {0.0, 0.0, 0.0});
  for (auto& r : g.rows) r[k] = 1.0;
  return g;
}

gm::MixtureParams start(ActivationFamily f) {
  gm::MixtureParams p;
  p.pi = {0.8, 0.1, 0.1};
  p.positive = gm::mom(f, 3.0, 1.0, Sign::positive);
  p.negative = gm::mom(f, 3.0, 1.0, Sign::negative);
  return p;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  gm::Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST(MStep, AllMassOnNoise) {
  const std::vector<double> x{-1.0, 0.5, 2.0, 3.5};
  const auto p = gm::m_step(x, one_hot(x.size(), 0), ActivationFamily::gamma, start(ActivationFamily::gamma));
  const double mean = 1.25;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size();
  EXPECT_NEAR(p.noise.mu, mean, 1e-14);
  EXPECT_NEAR(1.0 / p.noise.tau, var, 1e-13);
  EXPECT_EQ(p.pi[0], 1.0);
  EXPECT_EQ(p.pi[1], 0.0);
  EXPECT_EQ(p.pi[2], 0.0);
}

TEST(MStep, InverseGammaFromWeightedMoments) {
  const double d = std::sqrt(10.0);
  const std::vector<double> x{10.0 - d, 10.0 + d};
  const auto p = gm::m_step(x, one_hot(2, 1), ActivationFamily::inverse_gamma,
                            start(ActivationFamily::inverse_gamma));
  EXPECT_NEAR(p.positive.shape, 12.0, 1e-12);
  EXPECT_NEAR(p.positive.rate_or_scale, 110.0, 1e-11);
}

TEST(MStep, NegativeGammaUsesMirroredData) {
  const std::vector<double> x{-4.0, -6.0};
  const auto p = gm::m_step(x, one_hot(2, 2), ActivationFamily::gamma, start(ActivationFamily::gamma));
  EXPECT_NEAR(p.negative.shape, 25.0, 1e-12);
  EXPECT_NEAR(p.negative.rate_or_scale, 5.0, 1e-12);
  EXPECT_TRUE(p.negative.family.is_negative());
}

TEST(MStep, EmptyComponentIsFrozen) {
  const std::vector<double> x{-1.0, 0.5, 2.0};
  const auto prev = start(ActivationFamily::gamma);
  auto g = one_hot(3, 0);
  g.rows[2] = {0.5, 0.5, 0.0};  // positive mass 0.5 < 1
  const auto p = gm::m_step(x, g, ActivationFamily::gamma, prev, 1.0);
  EXPECT_EQ(p.positive.shape, prev.positive.shape);
  EXPECT_EQ(p.positive.rate_or_scale, prev.positive.rate_or_scale);
  EXPECT_NEAR(p.pi[1], 0.5 / 3.0, 1e-15);
}

TEST(FitMl, PureNoise) {
  const auto x = noise(10000, 3);
  for (auto f : {ActivationFamily::gamma, ActivationFamily::inverse_gamma}) {
    const auto init = gm::initialize(x, f, 1);
    const auto r = gm::fit_ml(x, f, init.params, {});
    if (f == ActivationFamily::inverse_gamma) {
      EXPECT_GE(r.params.pi[0], 0.95);
    } else {
      // Gamma components split the noise into two half-normals.
      EXPECT_GT(r.params.pi[1], 0.1);
      EXPECT_GT(r.params.pi[2], 0.1);
    }
  }
}

TEST(FitMl, Deterministic) {
  const auto spec = gm::SyntheticSpec::make(1, 4.0, 1, 5000, 1, 9);
  const auto d = gm::generate(spec, 0);
  const auto init = gm::initialize(d.values, ActivationFamily::gamma, 4);
  const auto a = gm::fit_ggm(d.values, init.params);
  const auto b = gm::fit_ggm(d.values, init.params);
  EXPECT_EQ(a.loglik_trace, b.loglik_trace);
  EXPECT_EQ(a.params.positive.shape, b.params.positive.shape);
  EXPECT_EQ(a.responsibilities.rows, b.responsibilities.rows);
}

TEST(FitMl, RejectsMismatchedFamily) {
  const auto x = noise(100, 1);
  EXPECT_THROW(gm::fit_ggm(x, start(ActivationFamily::inverse_gamma)), gm::DomainError);
}

TEST(FitMl, InvariantsAndEndpointImprovement) {
  for (int rep = 0; rep < 10; ++rep) {
    const auto spec = gm::SyntheticSpec::make(1, 2.0 + rep % 4, 1 + rep % 3, 10000, 10, 17);
    const auto d = gm::generate(spec, rep);
    for (auto f : {ActivationFamily::gamma, ActivationFamily::inverse_gamma}) {
      const auto init = gm::initialize(d.values, f, rep);
      const auto r = gm::fit_ml(d.values, f, init.params, {});
      ASSERT_TRUE(std::isfinite(r.loglik_trace.back()));
      EXPECT_GE(r.loglik_trace.back(), r.loglik_trace.front()) << spec.scenario_id() << " " << gm::to_string(f);
      EXPECT_NEAR(r.params.pi[0] + r.params.pi[1] + r.params.pi[2], 1.0, 1e-12);
      for (std::size_t n = 0; n < d.values.size(); ++n) {
        const auto& g = r.responsibilities[n];
        ASSERT_NEAR(g[0] + g[1] + g[2], 1.0, 1e-12);
        if (d.values[n] <= 0) { ASSERT_EQ(g[1], 0.0); }
        if (d.values[n] >= 0) { ASSERT_EQ(g[2], 0.0); }
      }
    }
  }
}

TEST(FitMl, ProportionsOnlyConvergeToTruth) {
  gm::MixtureParams truth;
  truth.pi = {0.8, 0.12, 0.08};
  truth.noise = {0.0, 1.0};
  truth.positive = gm::mom_gamma(4.0, 1.0, Sign::positive);
  truth.negative = gm::mom_invgamma(4.0, 1.0, Sign::negative);
  gm::Rng rng(5);
  const std::size_t n = 10000;
  std::vector<double> x(n);
  for (auto& v : x) {
    const double u = rng.uniform();
    v = u < 0.8 ? gm::draw(truth.noise, rng)
                : u < 0.92 ? gm::draw(truth.positive, rng) : gm::draw(truth.negative, rng);
  }
  gm::MixtureParams p = truth;
  p.pi = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (int it = 0; it < 300; ++it) {
    const auto cs = gm::e_step(x, p).column_sums();
    for (int k = 0; k < 3; ++k) p.pi[k] = cs[k] / n;
  }
  for (int k = 0; k < 3; ++k) {
    const double sd = std::sqrt(truth.pi[k] * (1 - truth.pi[k]) / n);
    EXPECT_NEAR(p.pi[k], truth.pi[k], 4 * sd) << k;
  }
}

TEST(FitMl, GimSparserThanBggm) {
  const auto spec = gm::SyntheticSpec::make(1, 5.0, 1, 10000, 100, 31);
  int sparser = 0;
  for (int rep = 0; rep < spec.repeats; ++rep) {
    const auto d = gm::generate(spec, rep);
    const auto gim = gm::evaluate_run(spec, rep, gm::Model::gim, d);
    const auto bggm = gm::evaluate_run(spec, rep, gm::Model::bggm, d);
    sparser += gim.pos_frac <= bggm.pos_frac;
  }
  EXPECT_GE(sparser, 80);
}
