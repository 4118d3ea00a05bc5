#pragma once

// k-means based initialization shared by all four fitters.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "gammamix/distributions.hpp"
#include "gammamix/errors.hpp"
#include "gammamix/mixture.hpp"
#include "gammamix/random.hpp"

namespace gammamix {

inline constexpr double kClusterVarianceFloor = 1e-6;

struct KMeansResult {
  std::array<double, 3> centers{};  // ascending
  std::vector<int> assignments;     // index into centers
  std::array<double, 3> cluster_means{};
  std::array<double, 3> cluster_vars{};
  std::array<std::size_t, 3> cluster_counts{};
  int iterations = 0;
  bool degenerate = false;  // all values equal

  double sse(std::span<const double> data) const {
    double s = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      const double d = data[n] - centers[assignments[n]];
      s += d * d;
    }
    return s;
  }
};

namespace detail {

inline int nearest_center(double x, const std::array<double, 3>& c) {
  int best = 0;
  double bd = std::abs(x - c[0]);
  for (int j = 1; j < 3; ++j) {
    const double d = std::abs(x - c[j]);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

inline void cluster_stats(std::span<const double> data, KMeansResult& km) {
  std::array<double, 3> sum{}, ss{};
  km.cluster_counts = {0, 0, 0};
  for (std::size_t n = 0; n < data.size(); ++n) {
    const int j = km.assignments[n];
    ++km.cluster_counts[j];
    sum[j] += data[n];
  }
  for (int j = 0; j < 3; ++j) {
    km.cluster_means[j] = km.cluster_counts[j] ? sum[j] / km.cluster_counts[j] : km.centers[j];
  }
  for (std::size_t n = 0; n < data.size(); ++n) {
    const int j = km.assignments[n];
    const double d = data[n] - km.cluster_means[j];
    ss[j] += d * d;
  }
  for (int j = 0; j < 3; ++j) {
    const double v = km.cluster_counts[j] ? ss[j] / km.cluster_counts[j] : 0.0;
    km.cluster_vars[j] = std::max(v, kClusterVarianceFloor);
  }
}

}  // namespace detail

/// Lloyd's algorithm on scalars with k-means++ seeding (k = 3), run to an
/// assignment fixpoint or 100 iterations. Centers are returned ascending.
inline KMeansResult kmeans_1d(std::span<const double> data, std::uint64_t seed) {
  constexpr int k = 3;
  if (data.size() < static_cast<std::size_t>(k)) {
    throw EstimationError("kmeans_1d: need at least 3 samples");
  }
  KMeansResult km;
  km.assignments.assign(data.size(), 0);

  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (*lo == *hi) {
    km.degenerate = true;
    km.centers = {*lo, *lo, *lo};
    km.cluster_means = km.centers;
    km.cluster_vars = {kClusterVarianceFloor, kClusterVarianceFloor, kClusterVarianceFloor};
    km.cluster_counts = {0, data.size(), 0};
    km.assignments.assign(data.size(), 1);
    return km;
  }

  Rng rng(seed);
  std::array<double, 3> c{};
  c[0] = data[rng.below(data.size())];
  std::vector<double> d2(data.size());
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < j; ++i) best = std::min(best, (data[n] - c[i]) * (data[n] - c[i]));
      d2[n] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      for (pick = 0; pick + 1 < data.size(); ++pick) {
        u -= d2[pick];
        if (u < 0.0) break;
      }
    } else {
      pick = rng.below(data.size());
    }
    c[j] = data[pick];
  }
  std::sort(c.begin(), c.end());

  for (std::size_t n = 0; n < data.size(); ++n) km.assignments[n] = detail::nearest_center(data[n], c);
  for (km.iterations = 1; km.iterations <= 100; ++km.iterations) {
    std::array<double, 3> sum{};
    std::array<std::size_t, 3> cnt{};
    for (std::size_t n = 0; n < data.size(); ++n) {
      sum[km.assignments[n]] += data[n];
      ++cnt[km.assignments[n]];
    }
    for (int j = 0; j < k; ++j)
      if (cnt[j]) c[j] = sum[j] / cnt[j];
    std::sort(c.begin(), c.end());
    bool changed = false;
    for (std::size_t n = 0; n < data.size(); ++n) {
      const int a = detail::nearest_center(data[n], c);
      changed |= a != km.assignments[n];
      km.assignments[n] = a;
    }
    if (!changed) break;
  }
  km.iterations = std::min(km.iterations, 100);
  km.centers = c;
  detail::cluster_stats(data, km);
  return km;
}

struct Initialization {
  MixtureParams params;
  Responsibilities responsibilities;
  bool used_fallback = false;
};

inline constexpr double kFallbackMoment = 10.0;

/// Middle cluster -> noise, top cluster -> positive, bottom cluster ->
/// negative (method of moments on the mirrored mean). A side cluster whose
/// mirrored mean is not positive falls back to mean = variance = 10.
inline Initialization init_mixture(std::span<const double> data, const KMeansResult& km,
                                   ActivationFamily positive, ActivationFamily negative) {
  Initialization init;
  auto& p = init.params;
  const double total =
      static_cast<double>(km.cluster_counts[0] + km.cluster_counts[1] + km.cluster_counts[2]);
  // pi order is (noise, positive, negative); clusters are (low, mid, high).
  p.pi = {km.cluster_counts[1] / total, km.cluster_counts[2] / total, km.cluster_counts[0] / total};
  p.noise = {km.cluster_means[1], 1.0 / km.cluster_vars[1]};

  auto side = [&](ActivationFamily family, double mirrored_mean, double var, Sign sign) {
    if (mirrored_mean > 0.0) return mom(family, mirrored_mean, var, sign);
    init.used_fallback = true;
    return mom(family, kFallbackMoment, kFallbackMoment, sign);
  };
  p.positive = side(positive, km.cluster_means[2], km.cluster_vars[2], Sign::positive);
  p.negative = side(negative, -km.cluster_means[0], km.cluster_vars[0], Sign::negative);
  p.validate();
  init.responsibilities = e_step(data, p);
  return init;
}

inline Initialization init_mixture(std::span<const double> data, const KMeansResult& km,
                                   ActivationFamily family) {
  return init_mixture(data, km, family, family);
}

inline Initialization initialize(std::span<const double> data, ActivationFamily positive,
                                 ActivationFamily negative, std::uint64_t seed) {
  return init_mixture(data, kmeans_1d(data, seed), positive, negative);
}

inline Initialization initialize(std::span<const double> data, ActivationFamily family,
                                 std::uint64_t seed) {
  return initialize(data, family, family, seed);
}

}  // namespace gammamix
