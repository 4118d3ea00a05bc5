#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "gammamix/evaluation.hpp"
#include "gammamix/random.hpp"

namespace gm = gammamix;
using gm::Label;

TEST(Standardize, TwoPoint) {
  const std::vector<double> x{0.0, 1.0, 3.0};
  const auto z = gm::standardize(x);
  ASSERT_EQ(z.size(), 2u);
  EXPECT_DOUBLE_EQ(z[0], -1.0);
  EXPECT_DOUBLE_EQ(z[1], 1.0);
}

TEST(Standardize, MomentsAndIdempotence) {
  gm::Rng rng(1);
  std::vector<double> x(1000);
  for (auto& v : x) v = 3.0 + 2.0 * rng.normal();
  const auto z = gm::standardize(x);
  const double m = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double var = 0;
  for (double v : z) var += (v - m) * (v - m);
  EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(var / z.size(), 1.0, 1e-12);
  const auto z2 = gm::standardize(z);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(z2[i], z[i], 1e-12);
}

TEST(Standardize, Errors) {
  EXPECT_THROW(gm::standardize(std::vector<double>{2.0, 2.0, 0.0}), gm::EstimationError);
  EXPECT_THROW(gm::standardize(std::vector<double>{0.0, 1.0}), gm::EstimationError);
}

TEST(ActivationMap, Rows) {
  gm::Responsibilities g;
  g.rows = {{0.2, 0.7, 0.1}, {0.4, 0.35, 0.25}, {0.1, 0.1, 0.8}};
  const auto l = gm::activation_map(g);
  EXPECT_EQ(l[0], Label::positive);
  EXPECT_EQ(l[1], Label::null);
  EXPECT_EQ(l[2], Label::negative);
  const auto f = gm::activation_fractions(l);
  EXPECT_DOUBLE_EQ(f.positive, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.negative, 1.0 / 3.0);
}

TEST(RestrictedAuc, PerfectReversedAndChance) {
  const std::vector<double> s{0.9, 0.8, 0.7, 0.2, 0.1, 0.05};
  const std::vector<std::uint8_t> y{1, 1, 1, 0, 0, 0};
  const std::vector<std::uint8_t> rev{0, 0, 0, 1, 1, 1};
  EXPECT_EQ(gm::restricted_auc(s, y), 1.0);
  EXPECT_EQ(gm::restricted_auc(s, rev), 0.0);
  const std::vector<double> same(6, 0.5);
  EXPECT_NEAR(gm::restricted_auc(same, y), 0.025, 1e-15);
}

TEST(RestrictedAuc, SingleClassIsUndefined) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<std::uint8_t> y{1, 1};
  EXPECT_THROW(gm::restricted_auc(s, y), gm::UndefinedMetric);
}

TEST(RestrictedAuc, MonotoneTransformInvariance) {
  gm::Rng rng(3);
  std::vector<double> s(2000), t(2000);
  std::vector<std::uint8_t> y(2000);
  for (int i = 0; i < 2000; ++i) {
    y[i] = rng.uniform() < 0.1;
    s[i] = rng.normal() + 2.0 * y[i];
    t[i] = std::exp(3.0 * s[i]) + 1.0;
  }
  EXPECT_EQ(gm::restricted_auc(s, y), gm::restricted_auc(t, y));
}

TEST(RestrictedAuc, ResponsibilityTasks) {
  gm::Responsibilities g;
  g.rows = {{0.1, 0.9, 0.0}, {0.2, 0.0, 0.8}, {0.9, 0.1, 0.0}, {0.95, 0.0, 0.05}};
  const std::vector<Label> truth{Label::positive, Label::negative, Label::null, Label::null};
  EXPECT_EQ(gm::restricted_auc(g, truth, gm::AucTask::any_activation), 1.0);
  EXPECT_EQ(gm::restricted_auc(g, truth, gm::AucTask::positive), 1.0);
  EXPECT_EQ(gm::restricted_auc(g, truth, gm::AucTask::negative), 1.0);
}

TEST(PairedTTest, Basics) {
  const std::vector<double> a{0.5, 0.6, 0.7};
  auto r = gm::paired_t_test(a, a);
  EXPECT_EQ(r.p, 1.0);
  EXPECT_EQ(r.t, 0.0);
  const std::vector<double> b{0.4, 0.5, 0.6};
  r = gm::paired_t_test(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.p, 0.0);
  EXPECT_GT(r.t, 0.0);
}

TEST(PairedTTest, TextbookTenPairs) {
  const std::vector<double> a{200, 190, 185, 210, 198, 205, 188, 195, 202, 199};
  const std::vector<double> b{195, 185, 187, 200, 190, 204, 180, 190, 195, 196};
  // d = 5 5 -2 10 8 1 8 5 7 3: mean 5, sample sd sqrt(116/9)
  const double t = 5.0 / (std::sqrt(116.0 / 9.0) / std::sqrt(10.0));
  const auto r = gm::paired_t_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-10);
  EXPECT_NEAR(r.t, 4.404151646360276, 1e-10);
  EXPECT_NEAR(r.p, 0.0017100412118013805, 1e-12);  // two-sided, 9 degrees of freedom
  const auto flipped = gm::paired_t_test(b, a);
  EXPECT_NEAR(flipped.t, -r.t, 1e-12);
  EXPECT_NEAR(flipped.p, r.p, 1e-15);
}

TEST(WinMatrix, IdenticalAndDominant) {
  gm::Rng rng(5);
  std::vector<double> base(100);
  for (auto& v : base) v = 0.5 + 0.1 * rng.normal();
  std::vector<double> better = base;
  for (auto& v : better) v += 0.1;
  std::vector<gm::ScenarioAucs> sc{{"s1", {{"A", base}, {"B", base}, {"C", better}}}};
  const auto t = gm::win_matrix(sc);
  EXPECT_EQ(t.pair_win_percent.at({"A", "B"}), 0.0);
  EXPECT_EQ(t.pair_win_percent.at({"B", "A"}), 0.0);
  EXPECT_EQ(t.pair_win_percent.at({"C", "A"}), 100.0);
  EXPECT_EQ(t.pair_win_percent.at({"A", "C"}), 0.0);
  EXPECT_EQ(t.model_win_percent.at("C"), 100.0);
}
