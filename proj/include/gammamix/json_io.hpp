#pragma once

// JSON documents: fit results and benchmark manifests. Needs nlohmann/json
// ("json.hpp") on the include path.

#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"

#include "gammamix/experiments.hpp"

namespace gammamix {

inline constexpr int kSchemaVersion = 1;

namespace detail {

using nlohmann::json;

// NaN and infinities are not valid JSON numbers; they travel as strings.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw FormatError("expected a number, got '" + s + "'");
}

inline json to_json(const ShapeRateParams& p) {
  const bool gamma = p.family.tag() == Family::gamma;
  return {{"family", gamma ? "gamma" : "inverse_gamma"},
          {"sign", p.family.is_negative() ? "negative" : "positive"},
          {"shape", num(p.shape)},
          {gamma ? "rate" : "scale", num(p.rate_or_scale)}};
}

inline json to_json(const MixtureParams& p) {
  return {{"pi", {num(p.pi[0]), num(p.pi[1]), num(p.pi[2])}},
          {"noise", {{"mean", num(p.noise.mu)}, {"precision", num(p.noise.tau)}}},
          {"positive", to_json(p.positive)},
          {"negative", to_json(p.negative)}};
}

inline json to_json(const VBState& st) {
  json acts = json::array();
  for (const auto& a : st.activation) {
    acts.push_back({{"d_hat", num(a.d_hat)},
                    {"e_hat", num(a.e_hat)},
                    {"log_a_hat", num(a.log_a_hat)},
                    {"b_hat", num(a.b_hat)},
                    {"c_hat", num(a.c_hat)}});
  }
  return {{"lambda_hat", {num(st.lambda_hat[0]), num(st.lambda_hat[1]), num(st.lambda_hat[2])}},
          {"m_hat", num(st.m_hat)},
          {"tau_hat", num(st.tau_hat)},
          {"tau_shape", num(st.c_hat)},
          {"tau_scale", num(st.b_hat)},
          {"activation", acts}};
}

inline json to_json(const ExpectationCache& e) {
  json acts = json::array();
  for (const auto& a : e.activation) {
    acts.push_back({{"r", num(a.r)},
                    {"log_r", num(a.log_r)},
                    {"s", num(a.s)},
                    {"log_gamma_s", num(a.log_gamma_s)},
                    {"s_precision", num(a.s_precision)}});
  }
  return {{"pi", {num(e.pi[0]), num(e.pi[1]), num(e.pi[2])}},
          {"mu", num(e.mu)},
          {"mu2", num(e.mu2)},
          {"tau", num(e.tau)},
          {"log_tau", num(e.log_tau)},
          {"activation", acts}};
}

inline json to_json(const SyntheticSpec& s) {
  return {{"dataset", s.dataset},  {"snr", num(s.snr)},   {"sparsity", s.sparsity},
          {"pi", {num(s.pi[0]), num(s.pi[1]), num(s.pi[2])}},
          {"n", s.n},              {"repeats", s.repeats}, {"seed", s.seed}};
}

inline SyntheticSpec spec_from_json(const json& j) {
  SyntheticSpec s;
  s.dataset = j.at("dataset").get<int>();
  s.snr = get_num(j.at("snr"));
  s.sparsity = j.at("sparsity").get<int>();
  for (int k = 0; k < 3; ++k) s.pi[k] = get_num(j.at("pi").at(k));
  s.n = j.at("n").get<std::size_t>();
  s.repeats = j.at("repeats").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.validate();
  return s;
}

inline json to_json(const EvalReport& r) {
  return {{"scenario_id", r.scenario_id},
          {"model", to_string(r.model)},
          {"repeat", r.repeat},
          {"fit_seed", r.fit_seed},
          {"auc", num(r.auc)},
          {"auc_positive", num(r.auc_positive)},
          {"auc_negative", num(r.auc_negative)},
          {"pos_frac", num(r.pos_frac)},
          {"neg_frac", num(r.neg_frac)},
          {"pi_hat", {num(r.pi_hat[0]), num(r.pi_hat[1]), num(r.pi_hat[2])}},
          {"seconds", num(r.seconds)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"error", r.error}};
}

inline EvalReport report_from_json(const json& j) {
  EvalReport r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.model = parse_model(j.at("model").get<std::string>());
  r.repeat = j.at("repeat").get<int>();
  r.fit_seed = j.at("fit_seed").get<std::uint64_t>();
  r.auc = get_num(j.at("auc"));
  r.auc_positive = get_num(j.at("auc_positive"));
  r.auc_negative = get_num(j.at("auc_negative"));
  r.pos_frac = get_num(j.at("pos_frac"));
  r.neg_frac = get_num(j.at("neg_frac"));
  for (int k = 0; k < 3; ++k) r.pi_hat[k] = get_num(j.at("pi_hat").at(k));
  r.seconds = get_num(j.at("seconds"));
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.error = j.at("error").get<std::string>();
  return r;
}

}  // namespace detail

/// Versioned fit document. Wall time is left out unless asked for so that
/// repeated fits produce identical files.
inline nlohmann::json fit_result_json(const FitOutcome& fit, std::uint64_t seed, std::size_t n,
                                      bool standardized, bool record_timing = false) {
  using detail::num;
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["software_version"] = kVersion;
  j["model"] = to_string(fit.model);
  j["seed"] = seed;
  j["n"] = n;
  j["standardized"] = standardized;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["params"] = detail::to_json(fit.point);
  nlohmann::json trace = nlohmann::json::array();
  for (double v : fit.trace) trace.push_back(num(v));
  if (fit.vb) {
    j["posterior"] = detail::to_json(fit.vb->state);
    j["expectations"] = detail::to_json(fit.vb->expectations);
    j["free_energy_trace"] = trace;
  } else {
    j["log_likelihood_trace"] = trace;
  }
  const auto frac = activation_fractions(activation_map(fit.gamma));
  j["activation_fraction"] = {{"positive", num(frac.positive)}, {"negative", num(frac.negative)}};
  if (record_timing) j["seconds"] = num(fit.seconds);
  return j;
}

inline nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["software_version"] = m.software_version;
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& s : m.plan.grid) grid.push_back(detail::to_json(s));
  nlohmann::json models = nlohmann::json::array();
  for (Model model : m.plan.models) models.push_back(to_string(model));
  j["plan"] = {{"grid", grid},
               {"models", models},
               {"fpr_max", detail::num(m.plan.fpr_max)},
               {"alpha", detail::num(m.plan.alpha)},
               {"record_timing", m.plan.record_timing}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : m.rows) rows.push_back(detail::to_json(r));
  j["rows"] = rows;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kSchemaVersion) {
    throw FormatError("manifest schema_version " + std::to_string(m.schema_version) +
                      " is not supported");
  }
  m.software_version = j.at("software_version").get<std::string>();
  const auto& plan = j.at("plan");
  m.plan.grid.clear();
  for (const auto& s : plan.at("grid")) m.plan.grid.push_back(detail::spec_from_json(s));
  m.plan.models.clear();
  for (const auto& s : plan.at("models")) m.plan.models.push_back(parse_model(s.get<std::string>()));
  m.plan.fpr_max = detail::get_num(plan.at("fpr_max"));
  m.plan.alpha = detail::get_num(plan.at("alpha"));
  m.plan.record_timing = plan.at("record_timing").get<bool>();
  if (j.contains("rows")) {
    for (const auto& r : j.at("rows")) m.rows.push_back(detail::report_from_json(r));
  }
  return m;
}

/// Rows whose numeric fields differ bit-wise (wall time excluded unless it
/// was recorded as zero in both).
inline std::vector<std::string> replay_mismatches(const RunManifest& stored,
                                                  const RunManifest& rerun) {
  std::vector<std::string> out;
  if (stored.rows.size() != rerun.rows.size()) {
    out.push_back("row count " + std::to_string(stored.rows.size()) + " vs " +
                  std::to_string(rerun.rows.size()));
    return out;
  }
  auto same = [](double a, double b) {
    return (std::isnan(a) && std::isnan(b)) ||
           std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
  };
  for (std::size_t i = 0; i < stored.rows.size(); ++i) {
    const auto& a = stored.rows[i];
    const auto& b = rerun.rows[i];
    bool ok = a.scenario_id == b.scenario_id && a.model == b.model && a.repeat == b.repeat &&
              a.fit_seed == b.fit_seed && same(a.auc, b.auc) &&
              same(a.auc_positive, b.auc_positive) && same(a.auc_negative, b.auc_negative) &&
              same(a.pos_frac, b.pos_frac) && same(a.neg_frac, b.neg_frac) &&
              a.iterations == b.iterations && a.converged == b.converged && a.error == b.error;
    for (int k = 0; k < 3; ++k) ok = ok && same(a.pi_hat[k], b.pi_hat[k]);
    if (!stored.plan.record_timing) ok = ok && same(a.seconds, b.seconds);
    if (!ok) {
      out.push_back(a.scenario_id + " " + to_string(a.model) + " repeat " +
                    std::to_string(a.repeat));
    }
  }
  return out;
}

}  // namespace gammamix
