#pragma once

// Synthetic datasets, the model dispatcher and the benchmark harness.
//
// Dataset I draws each sample from N(0,1), N(+snr,1) or N(-snr,1) with
// symmetric activation proportions; dataset II has no negative activation.
// Every dataset is a pure function of (seed, dataset, snr, sparsity, repeat)
// through Rng::substream.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gammamix/distributions.hpp"
#include "gammamix/evaluation.hpp"
#include "gammamix/initialization.hpp"
#include "gammamix/io.hpp"
#include "gammamix/ml_em.hpp"
#include "gammamix/random.hpp"
#include "gammamix/vb_em.hpp"

namespace gammamix {

inline constexpr const char* kVersion = "1.0.0";

enum class Model { bggm, bgim, ggm, gim };

inline constexpr std::array<Model, 4> kAllModels{Model::bggm, Model::bgim, Model::ggm, Model::gim};

inline std::string to_string(Model m) {
  switch (m) {
    case Model::bggm: return "bGGM";
    case Model::bgim: return "bGIM";
    case Model::ggm: return "GGM";
    case Model::gim: return "GIM";
  }
  return "?";
}

/// Case-insensitive model name.
inline Model parse_model(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "bggm") return Model::bggm;
  if (s == "bgim") return Model::bgim;
  if (s == "ggm") return Model::ggm;
  if (s == "gim") return Model::gim;
  throw FormatError("unknown model '" + s + "' (expected bggm, bgim, ggm or gim)");
}

inline ActivationFamily family_of(Model m) {
  return m == Model::bggm || m == Model::ggm ? ActivationFamily::gamma
                                             : ActivationFamily::inverse_gamma;
}

inline bool is_variational(Model m) { return m == Model::bggm || m == Model::bgim; }

struct FitOutcome {
  Model model = Model::bggm;
  MixtureParams point;  // posterior means for the variational models
  Responsibilities gamma;
  std::vector<double> trace;  // NFE or log-likelihood per iteration
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;  // initialization + fit
  std::optional<VBFitResult> vb;
  std::optional<MLFitResult> ml;
};

inline MixtureParams point_estimate(const VBFitResult& r) {
  MixtureParams p;
  p.pi = r.expectations.pi;
  p.noise = {r.state.m_hat, r.expectations.tau};
  const std::array<Sign, 2> signs{Sign::positive, Sign::negative};
  std::array<ShapeRateParams, 2> comps;
  for (int k = 0; k < 2; ++k) {
    comps[k] = {r.expectations.activation[k].s, r.expectations.activation[k].r,
                ComponentFamily::activation(r.priors.activation[k].family, signs[k])};
  }
  p.positive = comps[0];
  p.negative = comps[1];
  return p;
}

/// k-means initialization followed by the chosen learner.
inline FitOutcome fit_model(Model model, std::span<const double> data, std::uint64_t seed,
                            unsigned threads = 1) {
  const auto start = std::chrono::steady_clock::now();
  FitOutcome out;
  out.model = model;
  if (is_variational(model)) {
    VBFitConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    VBFitResult r = fit_vb(data, family_of(model), family_of(model), cfg);
    out.point = point_estimate(r);
    out.gamma = r.responsibilities;
    out.trace = r.nfe_trace;
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.vb = std::move(r);
  } else {
    MLFitConfig cfg;
    cfg.seed = seed;
    const Initialization init = initialize(data, family_of(model), seed);
    MLFitResult r = fit_ml(data, family_of(model), init.params, cfg);
    out.point = r.params;
    out.gamma = r.responsibilities;
    out.trace = r.loglik_trace;
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.ml = std::move(r);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct SyntheticSpec {
  int dataset = 1;  // 1 or 2
  double snr = 5.0;
  int sparsity = 1;  // 1..3
  std::array<double, 3> pi{0.8, 0.1, 0.1};
  std::size_t n = 10000;
  int repeats = 100;
  std::uint64_t seed = 0;

  static std::array<double, 3> proportions(int dataset, int sparsity) {
    static constexpr std::array<std::array<double, 3>, 3> d1{
        {{0.8, 0.1, 0.1}, {0.9, 0.05, 0.05}, {0.99, 0.005, 0.005}}};
    static constexpr std::array<std::array<double, 3>, 3> d2{
        {{0.9, 0.1, 0.0}, {0.95, 0.05, 0.0}, {0.99, 0.01, 0.0}}};
    if (sparsity < 1 || sparsity > 3) throw DomainError("sparsity must be 1, 2 or 3");
    if (dataset == 1) return d1[sparsity - 1];
    if (dataset == 2) return d2[sparsity - 1];
    throw DomainError("dataset must be 1 or 2");
  }

  static SyntheticSpec make(int dataset, double snr, int sparsity, std::size_t n = 10000,
                            int repeats = 100, std::uint64_t seed = 0) {
    SyntheticSpec s;
    s.dataset = dataset;
    s.snr = snr;
    s.sparsity = sparsity;
    s.pi = proportions(dataset, sparsity);
    s.n = n;
    s.repeats = repeats;
    s.seed = seed;
    s.validate();
    return s;
  }

  void validate() const {
    if (dataset != 1 && dataset != 2) throw DomainError("dataset must be 1 or 2");
    if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr must be > 0");
    if (n < 3) throw DomainError("n must be >= 3");
    double sum = 0.0;
    for (double p : pi) {
      if (!(p >= 0.0)) throw DomainError("pi must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("pi must sum to 1");
  }

  std::string scenario_id() const {
    return "d" + std::to_string(dataset) + "_snr" + format_double(snr) + "_s" +
           std::to_string(sparsity);
  }

  std::uint64_t snr_tag() const { return static_cast<std::uint64_t>(std::llround(snr * 1e6)); }
};

/// Stream tags separating data generation from model seeding.
inline constexpr std::uint64_t kDataStream = 1;
inline constexpr std::uint64_t kModelStream = 2;

struct LabeledDataset {
  std::vector<double> values;
  std::vector<std::uint8_t> labels;  // 1 = noise, 2 = positive, 3 = negative

  std::vector<Label> truth() const {
    std::vector<Label> t(labels.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = labels[i] == 2 ? Label::positive : labels[i] == 3 ? Label::negative : Label::null;
    }
    return t;
  }
};

inline LabeledDataset generate(const SyntheticSpec& spec, int repeat) {
  spec.validate();
  Rng rng = Rng::substream(spec.seed, {kDataStream, static_cast<std::uint64_t>(spec.dataset),
                                       spec.snr_tag(), static_cast<std::uint64_t>(spec.sparsity),
                                       spec.n, static_cast<std::uint64_t>(repeat)});
  LabeledDataset d;
  d.values.resize(spec.n);
  d.labels.resize(spec.n);
  const double c1 = spec.pi[0];
  const double c2 = spec.pi[0] + spec.pi[1];
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double u = rng.uniform();
    std::uint8_t label = 1;
    double mean = 0.0;
    if (u >= c1 && u < c2) {
      label = 2;
      mean = spec.snr;
    } else if (u >= c2) {
      label = 3;
      mean = -spec.snr;
    }
    d.labels[i] = label;
    d.values[i] = mean + rng.normal();
  }
  return d;
}

inline std::uint64_t model_seed(const SyntheticSpec& spec, int repeat) {
  return derive_seed(spec.seed, {kModelStream, static_cast<std::uint64_t>(spec.dataset),
                                 spec.snr_tag(), static_cast<std::uint64_t>(spec.sparsity), spec.n,
                                 static_cast<std::uint64_t>(repeat)});
}

struct EvalReport {
  std::string scenario_id;
  Model model = Model::bggm;
  int repeat = 0;
  std::uint64_t fit_seed = 0;
  double auc = std::numeric_limits<double>::quiet_NaN();
  double auc_positive = std::numeric_limits<double>::quiet_NaN();
  double auc_negative = std::numeric_limits<double>::quiet_NaN();
  double pos_frac = std::numeric_limits<double>::quiet_NaN();
  double neg_frac = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 3> pi_hat{std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN()};
  double seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // non-empty when the fit failed
};

inline double auc_or_nan(const Responsibilities& g, std::span<const Label> truth, AucTask task,
                         double fpr_max) {
  try {
    return restricted_auc(g, truth, task, fpr_max);
  } catch (const UndefinedMetric&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

/// Fits one model to one dataset and scores it. Failures are captured in
/// EvalReport::error rather than thrown.
inline EvalReport evaluate_run(const SyntheticSpec& spec, int repeat, Model model,
                               const LabeledDataset& data, double fpr_max = 0.05) {
  EvalReport row;
  row.scenario_id = spec.scenario_id();
  row.model = model;
  row.repeat = repeat;
  row.fit_seed = model_seed(spec, repeat);
  try {
    const FitOutcome fit = fit_model(model, data.values, row.fit_seed);
    const auto truth = data.truth();
    row.auc = auc_or_nan(fit.gamma, truth, AucTask::any_activation, fpr_max);
    row.auc_positive = auc_or_nan(fit.gamma, truth, AucTask::positive, fpr_max);
    row.auc_negative = auc_or_nan(fit.gamma, truth, AucTask::negative, fpr_max);
    const auto labels = activation_map(fit.gamma);
    const auto frac = activation_fractions(labels);
    row.pos_frac = frac.positive;
    row.neg_frac = frac.negative;
    row.pi_hat = fit.point.pi;
    row.seconds = fit.seconds;
    row.iterations = fit.iterations;
    row.converged = fit.converged;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

struct BenchmarkPlan {
  std::vector<SyntheticSpec> grid;
  std::vector<Model> models{kAllModels.begin(), kAllModels.end()};
  unsigned threads = 1;
  double fpr_max = 0.05;
  double alpha = 0.01;
  bool record_timing = false;
};

struct RunManifest {
  int schema_version = 1;
  std::string software_version = kVersion;
  BenchmarkPlan plan;
  std::vector<EvalReport> rows;  // scenario, repeat, model order
};

/// Grid names: "default" / "dataset1" (dataset I, SNR 2..5, sparsity 1..3),
/// "dataset2", "all", or a single scenario "D:SNR:SPARSITY".
inline std::vector<SyntheticSpec> make_grid(const std::string& name, std::size_t n, int repeats,
                                            std::uint64_t seed) {
  std::vector<SyntheticSpec> grid;
  auto add_dataset = [&](int d) {
    for (double snr : {2.0, 3.0, 4.0, 5.0})
      for (int sp = 1; sp <= 3; ++sp) grid.push_back(SyntheticSpec::make(d, snr, sp, n, repeats, seed));
  };
  if (name == "default" || name == "dataset1") {
    add_dataset(1);
  } else if (name == "dataset2") {
    add_dataset(2);
  } else if (name == "all") {
    add_dataset(1);
    add_dataset(2);
  } else {
    const auto a = name.find(':');
    const auto b = a == std::string::npos ? a : name.find(':', a + 1);
    if (b == std::string::npos) throw FormatError("unknown grid '" + name + "'");
    const int d = static_cast<int>(detail::parse_double(name.substr(0, a), "grid dataset"));
    const double snr = detail::parse_double(name.substr(a + 1, b - a - 1), "grid snr");
    const int sp = static_cast<int>(detail::parse_double(name.substr(b + 1), "grid sparsity"));
    grid.push_back(SyntheticSpec::make(d, snr, sp, n, repeats, seed));
  }
  return grid;
}

/// Runs every scenario x repeat x model. Work items may run on several
/// threads; rows are stored by index so output order is fixed.
inline RunManifest run_benchmark(const BenchmarkPlan& plan) {
  RunManifest m;
  m.plan = plan;
  struct Item {
    std::size_t scenario;
    int repeat;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < plan.grid.size(); ++s)
    for (int r = 0; r < plan.grid[s].repeats; ++r) items.push_back({s, r});
  const std::size_t nm = plan.models.size();
  m.rows.resize(items.size() * nm);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const auto& spec = plan.grid[items[i].scenario];
      const LabeledDataset data = generate(spec, items[i].repeat);
      for (std::size_t j = 0; j < nm; ++j) {
        EvalReport row = evaluate_run(spec, items[i].repeat, plan.models[j], data, plan.fpr_max);
        if (!plan.record_timing) row.seconds = 0.0;
        m.rows[i * nm + j] = std::move(row);
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(plan.threads, items.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return m;
}

inline ComparisonTable compare_models(const RunManifest& m) {
  std::vector<ScenarioAucs> scenarios;
  for (const auto& spec : m.plan.grid) {
    ScenarioAucs sc{spec.scenario_id(), {}};
    for (Model model : m.plan.models) {
      sc.auc_by_model[to_string(model)].assign(spec.repeats, std::numeric_limits<double>::quiet_NaN());
    }
    scenarios.push_back(std::move(sc));
  }
  for (const auto& row : m.rows) {
    for (auto& sc : scenarios) {
      if (sc.scenario_id == row.scenario_id) {
        sc.auc_by_model[to_string(row.model)][row.repeat] = row.error.empty() ? row.auc : std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return win_matrix(scenarios, m.plan.alpha);
}

inline void write_runs_csv(std::ostream& out, const RunManifest& m) {
  out << "scenario_id,model,repeat,auc,pos_frac,neg_frac,seconds,iterations,converged\n";
  for (const auto& r : m.rows) {
    out << r.scenario_id << ',' << to_string(r.model) << ',' << r.repeat << ','
        << format_double(r.auc) << ',' << format_double(r.pos_frac) << ','
        << format_double(r.neg_frac) << ',' << format_double(r.seconds) << ',' << r.iterations
        << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

inline void write_wins_csv(std::ostream& out, const ComparisonTable& t) {
  out << "scenario_id,model_a,model_b,mean_auc_diff,t,p,win\n";
  for (const auto& p : t.pairs) {
    out << p.scenario_id << ',' << p.model_a << ',' << p.model_b << ','
        << format_double(p.mean_diff) << ',' << format_double(p.t) << ',' << format_double(p.p)
        << ',' << (p.win ? 1 : 0) << '\n';
  }
}

}  // namespace gammamix
