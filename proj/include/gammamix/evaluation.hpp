#pragma once

// Preprocessing, activation maps, restricted ROC area, paired t-tests and
// win matrices for comparing fitted models.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "gammamix/errors.hpp"
#include "gammamix/mixture.hpp"

namespace gammamix {

enum class Label : std::uint8_t { null = 0, positive = 1, negative = 2 };

/// Drops exact zeros, then centres and scales to unit population variance.
inline std::vector<double> standardize(std::span<const double> data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (double v : data) {
    if (!std::isfinite(v)) throw DomainError("standardize: non-finite value");
    if (v != 0.0) out.push_back(v);
  }
  if (out.size() < 2) throw EstimationError("standardize: need at least 2 nonzero values");
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / out.size();
  double ss = 0.0;
  for (double v : out) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / out.size());
  if (!(sd > 0.0)) throw EstimationError("standardize: constant input");
  for (double& v : out) v = (v - mean) / sd;
  return out;
}

inline std::vector<Label> activation_map(const Responsibilities& gamma, double threshold = 0.5) {
  std::vector<Label> out(gamma.size(), Label::null);
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    if (gamma[n][1] > threshold) {
      out[n] = Label::positive;
    } else if (gamma[n][2] > threshold) {
      out[n] = Label::negative;
    }
  }
  return out;
}

struct ActivationFractions {
  double positive = 0.0;
  double negative = 0.0;
};

inline ActivationFractions activation_fractions(std::span<const Label> labels) {
  ActivationFractions f;
  if (labels.empty()) return f;
  for (Label l : labels) {
    if (l == Label::positive) f.positive += 1.0;
    if (l == Label::negative) f.negative += 1.0;
  }
  f.positive /= labels.size();
  f.negative /= labels.size();
  return f;
}

struct LabeledScores {
  std::vector<double> scores;
  std::vector<Label> truth;
};

/// Area under the ROC curve on FPR in [0, fpr_max], divided by fpr_max.
/// Equal scores form one ROC step; the curve is interpolated linearly at
/// fpr_max.
inline double restricted_auc(std::span<const double> scores, std::span<const std::uint8_t> active,
                             double fpr_max = 0.05) {
  if (scores.size() != active.size()) throw DomainError("restricted_auc: length mismatch");
  if (!(fpr_max > 0.0 && fpr_max <= 1.0)) throw DomainError("restricted_auc: fpr_max in (0, 1]");
  std::size_t npos = 0;
  for (auto a : active) npos += a ? 1 : 0;
  const std::size_t nneg = active.size() - npos;
  if (npos == 0 || nneg == 0) throw UndefinedMetric("restricted_auc: truth has a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double fpr0 = 0.0, tpr0 = 0.0;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (active[order[i]]) {
        ++tp;
      } else {
        ++fp;
      }
    }
    const double fpr1 = static_cast<double>(fp) / nneg;
    const double tpr1 = static_cast<double>(tp) / npos;
    if (fpr1 >= fpr_max) {
      const double tpr_at = fpr1 > fpr0 ? tpr0 + (tpr1 - tpr0) * (fpr_max - fpr0) / (fpr1 - fpr0)
                                        : tpr1;
      area += 0.5 * (tpr0 + tpr_at) * (fpr_max - fpr0);
      return area / fpr_max;
    }
    area += 0.5 * (tpr0 + tpr1) * (fpr1 - fpr0);
    fpr0 = fpr1;
    tpr0 = tpr1;
  }
  return area / fpr_max;  // unreachable: the last vertex has FPR = 1
}

/// Any-activation task: truth positive or negative counts as active.
inline double restricted_auc(const LabeledScores& ls, double fpr_max = 0.05) {
  if (ls.scores.size() != ls.truth.size()) throw DomainError("restricted_auc: length mismatch");
  std::vector<std::uint8_t> active(ls.truth.size());
  for (std::size_t n = 0; n < active.size(); ++n) active[n] = ls.truth[n] != Label::null;
  return restricted_auc(ls.scores, active, fpr_max);
}

enum class AucTask { any_activation, positive, negative };

/// Score gamma2 + gamma3 (any), gamma2 (positive) or gamma3 (negative)
/// against the matching truth.
inline double restricted_auc(const Responsibilities& gamma, std::span<const Label> truth,
                             AucTask task = AucTask::any_activation, double fpr_max = 0.05) {
  if (gamma.size() != truth.size()) throw DomainError("restricted_auc: length mismatch");
  std::vector<double> score(gamma.size());
  std::vector<std::uint8_t> active(gamma.size());
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    switch (task) {
      case AucTask::any_activation:
        score[n] = gamma[n][1] + gamma[n][2];
        active[n] = truth[n] != Label::null;
        break;
      case AucTask::positive:
        score[n] = gamma[n][1];
        active[n] = truth[n] == Label::positive;
        break;
      case AucTask::negative:
        score[n] = gamma[n][2];
        active[n] = truth[n] == Label::negative;
        break;
    }
  }
  return restricted_auc(score, active, fpr_max);
}

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  bool degenerate = false;  // zero-variance differences
};

/// Classical paired t-test on a - b.
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw DomainError("paired_t_test: need equal lengths >= 2");
  }
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  TTestResult r;
  const double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) {
    r.degenerate = true;
    if (mean == 0.0) return r;
    r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = 0.0;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
  r.p = boost::math::ibeta(0.5 * df, 0.5, df / (df + r.t * r.t));
  return r;
}

/// AUC samples per model for one scenario, aligned by repeat index.
struct ScenarioAucs {
  std::string scenario_id;
  std::map<std::string, std::vector<double>> auc_by_model;
};

struct PairComparison {
  std::string scenario_id;
  std::string model_a;
  std::string model_b;
  double mean_diff = 0.0;  // mean(a - b)
  double t = 0.0;
  double p = 1.0;
  bool win = false;  // a significantly higher than b
};

struct ComparisonTable {
  std::vector<PairComparison> pairs;
  /// (a, b) -> percentage of scenarios where a beats b.
  std::map<std::pair<std::string, std::string>, double> pair_win_percent;
  /// model -> percentage of (scenario, other model) comparisons it wins.
  std::map<std::string, double> model_win_percent;
};

/// Ordered-pair comparisons: a wins when mean(a - b) > 0 and p < alpha.
/// Repeats where either AUC is NaN (failed fit) are dropped from that pair.
inline ComparisonTable win_matrix(std::span<const ScenarioAucs> scenarios, double alpha = 0.01) {
  ComparisonTable table;
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> pair_counts;
  std::map<std::string, std::pair<int, int>> model_counts;
  for (const auto& sc : scenarios) {
    for (const auto& [ma, va] : sc.auc_by_model) {
      for (const auto& [mb, vb] : sc.auc_by_model) {
        if (ma == mb) continue;
        std::vector<double> xa, xb;
        for (std::size_t i = 0; i < std::min(va.size(), vb.size()); ++i) {
          if (std::isnan(va[i]) || std::isnan(vb[i])) continue;
          xa.push_back(va[i]);
          xb.push_back(vb[i]);
        }
        PairComparison pc{sc.scenario_id, ma, mb};
        if (xa.size() >= 2) {
          const auto tt = paired_t_test(xa, xb);
          pc.t = tt.t;
          pc.p = tt.p;
          double md = 0.0;
          for (std::size_t i = 0; i < xa.size(); ++i) md += xa[i] - xb[i];
          pc.mean_diff = md / xa.size();
          pc.win = pc.mean_diff > 0.0 && pc.p < alpha;
        }
        auto& c = pair_counts[{ma, mb}];
        c.first += pc.win;
        ++c.second;
        auto& m = model_counts[ma];
        m.first += pc.win;
        ++m.second;
        table.pairs.push_back(pc);
      }
    }
  }
  for (const auto& [k, c] : pair_counts) table.pair_win_percent[k] = 100.0 * c.first / c.second;
  for (const auto& [k, c] : model_counts) table.model_win_percent[k] = 100.0 * c.first / c.second;
  return table;
}

}  // namespace gammamix
