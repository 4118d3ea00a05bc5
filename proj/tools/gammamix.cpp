// gammamix command-line tool: fit, simulate, bench, eval.
//
// Exit codes: 0 ok, 1 usage error, 2 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gammamix/gammamix.hpp"
#include "gammamix/json_io.hpp"

namespace gm = gammamix;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw gm::FormatError("cannot write " + path);
  return out;
}

std::vector<gm::Model> parse_models(const std::string& list) {
  std::vector<gm::Model> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(gm::parse_model(item));
    } catch (const gm::FormatError& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--models is empty");
  return out;
}

// Truth is either a simulate CSV (value,label; label 1 is null) or one 0/1
// value per line.
std::vector<std::uint8_t> read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gm::FormatError("cannot open " + path);
  std::vector<std::uint8_t> out;
  std::string line;
  int label_col = -1;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = gm::detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (label_col < 0 && out.empty() && s.find(',') != std::string_view::npos &&
        s.find("label") != std::string_view::npos) {
      label_col = 0;
      std::stringstream hs{std::string(s)};
      std::string h;
      for (int c = 0; std::getline(hs, h, ','); ++c) {
        if (gm::detail::trim(h) == "label") label_col = c;
      }
      continue;
    }
    const std::string where = path + ":" + std::to_string(lineno);
    if (label_col >= 0) {
      std::stringstream ls{std::string(s)};
      std::string field;
      for (int c = 0; c <= label_col; ++c) {
        if (!std::getline(ls, field, ',')) throw gm::FormatError(where + ": missing label column");
      }
      const double v = gm::detail::parse_double(gm::detail::trim(field), where);
      if (v != 1.0 && v != 2.0 && v != 3.0) throw gm::FormatError(where + ": label must be 1, 2 or 3");
      out.push_back(v != 1.0);
    } else {
      const double v = gm::detail::parse_double(s, where);
      if (v != 0.0 && v != 1.0) throw gm::FormatError(where + ": truth must be 0 or 1");
      out.push_back(v == 1.0);
    }
  }
  return out;
}

// Plain decimal; integral values keep a trailing ".0".
std::string print_number(double v) {
  std::string s = gm::format_double(v);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

struct FitArgs {
  std::string model, input, format = "txt", output, gamma_out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool standardize = false, record_timing = false;
};

int run_fit(const FitArgs& a) {
  const gm::Model model = gm::parse_model(a.model);
  const auto fmt = a.format == "f64le" ? gm::VectorFormat::f64le : gm::VectorFormat::txt;
  std::vector<double> data = gm::read_vector(a.input, fmt);
  if (a.standardize) data = gm::standardize(data);
  const gm::FitOutcome fit = gm::fit_model(model, data, a.seed, a.threads);
  const auto j = gm::fit_result_json(fit, a.seed, data.size(), a.standardize, a.record_timing);
  open_out(a.output) << j.dump(2) << '\n';
  if (!a.gamma_out.empty()) {
    auto out = open_out(a.gamma_out);
    out << "gamma_noise,gamma_positive,gamma_negative\n";
    for (std::size_t n = 0; n < fit.gamma.size(); ++n) {
      out << gm::format_double(fit.gamma[n][0]) << ',' << gm::format_double(fit.gamma[n][1]) << ','
          << gm::format_double(fit.gamma[n][2]) << '\n';
    }
  }
  return 0;
}

struct SimArgs {
  int dataset = 1, sparsity = 1;
  double snr = 5.0;
  std::size_t n = 10000;
  int repeat = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_simulate(const SimArgs& a) {
  const auto spec = gm::SyntheticSpec::make(a.dataset, a.snr, a.sparsity, a.n, a.repeat + 1, a.seed);
  const auto d = gm::generate(spec, a.repeat);
  auto out = open_out(a.output);
  out << "value,label\n";
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    out << gm::format_double(d.values[i]) << ',' << int(d.labels[i]) << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string grid = "default", models = "bggm,bgim,ggm,gim", outdir, from_manifest;
  int repeats = 100;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool record_timing = false;
};

int run_bench(const BenchArgs& a) {
  gm::RunManifest stored;
  gm::BenchmarkPlan plan;
  if (!a.from_manifest.empty()) {
    std::ifstream in(a.from_manifest);
    if (!in) throw gm::FormatError("cannot open " + a.from_manifest);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw gm::FormatError(a.from_manifest + ": " + e.what());
    }
    stored = gm::manifest_from_json(j);
    plan = stored.plan;
  } else {
    if (a.repeats < 1) throw UsageError("--repeats must be >= 1");
    try {
      plan.grid = gm::make_grid(a.grid, a.n, a.repeats, a.seed);
    } catch (const gm::FormatError& e) {
      throw UsageError(e.what());
    }
    plan.models = parse_models(a.models);
    plan.record_timing = a.record_timing;
  }
  plan.threads = a.threads;

  const gm::RunManifest m = gm::run_benchmark(plan);
  std::filesystem::create_directories(a.outdir);
  const std::filesystem::path dir(a.outdir);
  open_out((dir / "manifest.json").string()) << gm::manifest_json(m).dump(2) << '\n';
  {
    auto out = open_out((dir / "runs.csv").string());
    gm::write_runs_csv(out, m);
  }
  {
    auto out = open_out((dir / "wins.csv").string());
    gm::write_wins_csv(out, gm::compare_models(m));
  }
  std::size_t failures = 0;
  for (const auto& r : m.rows) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "fit failed: " << r.scenario_id << ' ' << gm::to_string(r.model) << " repeat "
                << r.repeat << ": " << r.error << '\n';
    }
  }
  std::cerr << m.rows.size() << " runs, " << failures << " failed\n";
  if (!a.from_manifest.empty() && !stored.rows.empty()) {
    const auto diff = gm::replay_mismatches(stored, m);
    if (!diff.empty()) {
      for (const auto& d : diff) std::cerr << "replay mismatch: " << d << '\n';
      return 2;
    }
    std::cerr << "replay matches stored manifest\n";
  }
  return 0;
}

struct EvalArgs {
  std::string scores, truth;
  double fpr_max = 0.05;
};

int run_eval(const EvalArgs& a) {
  const auto scores = gm::read_vector(a.scores, gm::VectorFormat::txt);
  const auto truth = read_truth(a.truth);
  if (scores.size() != truth.size()) {
    throw gm::FormatError("scores has " + std::to_string(scores.size()) + " values, truth has " +
                          std::to_string(truth.size()));
  }
  std::cout << print_number(gm::restricted_auc(scores, truth, a.fpr_max)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian / Gamma / inverse-Gamma mixture models for statistical maps"};
  app.set_version_flag("--version", std::string(gm::kVersion));
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "fit one model to a value vector");
  fit->add_option("--model", fa.model, "bggm, bgim, ggm or gim")
      ->required()
      ->check(CLI::IsMember({"bggm", "bgim", "ggm", "gim"}, CLI::ignore_case));
  fit->add_option("--input", fa.input, "value file")->required();
  fit->add_option("--format", fa.format, "txt or f64le")->check(CLI::IsMember({"txt", "f64le"}));
  fit->add_option("--seed", fa.seed, "initialization seed");
  fit->add_option("--output", fa.output, "result JSON")->required();
  fit->add_option("--gamma-out", fa.gamma_out, "per-sample responsibilities CSV");
  fit->add_option("--threads", fa.threads, "worker threads for the variational E-step")
      ->check(CLI::PositiveNumber);
  fit->add_flag("--standardize", fa.standardize, "drop zeros and scale to zero mean, unit variance");
  fit->add_flag("--record-timing", fa.record_timing, "store wall time in the result");

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "write a synthetic labelled dataset as CSV");
  sim->add_option("--dataset", sa.dataset, "1 (symmetric) or 2 (positive only)")
      ->check(CLI::IsMember({1, 2}));
  sim->add_option("--snr", sa.snr, "activation mean")->required()->check(CLI::PositiveNumber);
  sim->add_option("--sparsity", sa.sparsity, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
  sim->add_option("--n", sa.n, "number of samples")->check(CLI::Range(3, 1 << 30));
  sim->add_option("--seed", sa.seed, "seed");
  sim->add_option("--repeat", sa.repeat, "repeat index")->check(CLI::NonNegativeNumber);
  sim->add_option("--output", sa.output, "output CSV")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "run the benchmark protocol");
  bench->add_option("--grid", ba.grid, "default, dataset1, dataset2, all or D:SNR:SPARSITY");
  bench->add_option("--models", ba.models, "comma-separated model list");
  bench->add_option("--repeats", ba.repeats, "repeats per scenario");
  bench->add_option("--n", ba.n, "samples per dataset")->check(CLI::Range(3, 1 << 30));
  bench->add_option("--seed", ba.seed, "master seed");
  bench->add_option("--outdir", ba.outdir, "output directory")->required();
  bench->add_option("--from-manifest", ba.from_manifest, "re-run the plan stored in a manifest");
  bench->add_option("--threads", ba.threads, "parallel repeats")->check(CLI::PositiveNumber);
  bench->add_flag("--record-timing", ba.record_timing, "store wall time (makes output non-reproducible)");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "restricted ROC area of scores against truth");
  ev->add_option("--scores", ea.scores, "one score per line")->required();
  ev->add_option("--truth", ea.truth, "simulate CSV or 0/1 per line")->required();
  ev->add_option("--fpr-max", ea.fpr_max, "upper FPR bound")->check(CLI::Range(1e-12, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit) return run_fit(fa);
    if (*sim) return run_simulate(sa);
    if (*bench) return run_bench(ba);
    if (*ev) return run_eval(ea);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
