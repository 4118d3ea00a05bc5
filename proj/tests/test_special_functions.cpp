#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <gtest/gtest.h>

#include "gammamix/random.hpp"
#include "gammamix/special_functions.hpp"

namespace gm = gammamix;

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(gm::log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(gm::log_gamma(5.0), std::log(24.0), 1e-13);
  EXPECT_NEAR(gm::log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-13);
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(gm::log_gamma(0.0), gm::DomainError);
  EXPECT_THROW(gm::log_gamma(-1.0), gm::DomainError);
  EXPECT_THROW(gm::log_gamma(std::numeric_limits<double>::quiet_NaN()), gm::DomainError);
  EXPECT_THROW(gm::log_gamma(1e-301), gm::DomainError);
}

TEST(Digamma, KnownValues) {
  EXPECT_NEAR(gm::digamma(1.0), -0.5772156649015329, 1e-13);
  EXPECT_NEAR(gm::digamma(10.0), 2.251752589066721, 1e-12);
  EXPECT_NEAR(gm::digamma(4.7), gm::digamma(3.7) + 1.0 / 3.7, 1e-13);
}

TEST(Trigamma, KnownValues) {
  EXPECT_NEAR(gm::trigamma(1.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-13);
  EXPECT_NEAR(gm::trigamma(10.0), 0.10516633568168575, 1e-13);
  EXPECT_NEAR(gm::trigamma(3.5), gm::trigamma(2.5) - 1.0 / 6.25, 1e-13);
}

TEST(Tetragamma, KnownValues) {
  EXPECT_NEAR(gm::tetragamma(1.0), -2.4041138063191885, 1e-12);
  const double h = 1e-5;
  const double fd = (gm::trigamma(5.0 + h) - gm::trigamma(5.0 - h)) / (2 * h);
  EXPECT_LT(gm::tetragamma(5.0), 0.0);
  EXPECT_NEAR(gm::tetragamma(5.0), fd, 1e-6 * std::abs(fd));
  EXPECT_NEAR(gm::tetragamma(5.0), gm::tetragamma(4.0) + 2.0 / 64.0, 1e-13);
}

TEST(InvDigamma, RoundTrips) {
  EXPECT_NEAR(gm::inv_digamma(gm::digamma(10.0)), 10.0, 1e-10);
  EXPECT_NEAR(gm::inv_digamma(gm::digamma(0.1)), 0.1, 1e-10);
  EXPECT_NEAR(gm::inv_digamma(-0.5772156649), 1.0, 1e-8);
  EXPECT_THROW(gm::inv_digamma(std::numeric_limits<double>::infinity()), gm::DomainError);
}

TEST(InvDigamma, GridRoundTrip) {
  for (int i = 0; i < 1000; ++i) {
    const double y = -20.0 + 30.0 * i / 999.0;
    const double x = gm::inv_digamma(y);
    ASSERT_GT(x, 0.0);
    ASSERT_NEAR(gm::digamma(x), y, 1e-10) << "y=" << y;
  }
}

TEST(Polygamma, RecurrencesAtRandomPoints) {
  gm::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(std::log(1e-3) + rng.uniform() * (std::log(1e3) - std::log(1e-3)));
    // Errors are relative to the largest term; near zero both sides cancel.
    auto rel = [](double lhs, double a, double b) {
      return std::abs(lhs - (a + b)) / std::max({1.0, std::abs(a), std::abs(b)});
    };
    ASSERT_LT(rel(gm::digamma(x + 1), gm::digamma(x), 1 / x), 1e-10) << x;
    ASSERT_LT(rel(gm::trigamma(x + 1), gm::trigamma(x), -1 / (x * x)), 1e-10) << x;
    ASSERT_LT(rel(gm::tetragamma(x + 1), gm::tetragamma(x), 2 / (x * x * x)), 1e-10) << x;
  }
}

TEST(Polygamma, MatchesBoost) {
  gm::Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(std::log(1e-3) + rng.uniform() * (std::log(1e3) - std::log(1e-3)));
    const double d = boost::math::digamma(x);
    const double t = boost::math::trigamma(x);
    const double q = boost::math::polygamma(2, x);
    ASSERT_NEAR(gm::digamma(x), d, 1e-12 * std::max(1.0, std::abs(d))) << x;
    ASSERT_NEAR(gm::trigamma(x), t, 1e-12 * std::max(1.0, t)) << x;
    ASSERT_NEAR(gm::tetragamma(x), q, 1e-12 * std::max(1.0, std::abs(q))) << x;
  }
}

TEST(Polygamma, SignsAndMonotonicity) {
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2000; ++i) {
    const double x = 1e-3 + i * 0.05;
    const double d = gm::digamma(x);
    ASSERT_GT(d, prev);
    prev = d;
    ASSERT_GT(gm::trigamma(x), 0.0);
    ASSERT_LT(gm::tetragamma(x), 0.0);
  }
}

TEST(Digamma, FiniteDifferenceOfLogGamma) {
  gm::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const double x = 0.5 + 50.0 * rng.uniform();
    const double h = 1e-5 * x;
    const double fd = (gm::log_gamma(x + h) - gm::log_gamma(x - h)) / (2 * h);
    ASSERT_NEAR(gm::digamma(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << x;
  }
}
