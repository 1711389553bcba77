#include "pairstat/report.hpp"

#include <json.hpp>

namespace pairstat {
namespace {

using nlohmann::json;

json exact(double v) { return {{"value", v}, {"exact", true}}; }

json with_error(double v, double err) {
  return {{"value", v}, {"std_error", err}};
}

json estimate(const Estimate& e) {
  return e.std_error ? with_error(e.value, *e.std_error) : exact(e.value);
}

json counts_json(const ClickCounts& c) {
  static constexpr const char* names[] = {"none", "A",  "B",  "H",
                                          "AB",   "AH", "BH", "ABH"};
  json outcomes = json::object();
  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    outcomes[names[i]] = c.outcome_counts[i];
  }
  return {{"n_windows", c.n_windows()}, {"outcomes", outcomes},
          {"seed", c.seed}};
}

json measured_json(const MeasuredProbabilities& m) {
  json out = json::object();
  for (auto [name, p] : {std::pair{"p_h", m.p_h}, std::pair{"p_a", m.p_a},
                         std::pair{"p_b", m.p_b}, std::pair{"p_ah", m.p_ah},
                         std::pair{"p_bh", m.p_bh}, std::pair{"p_ab", m.p_ab},
                         std::pair{"p_abh", m.p_abh}}) {
    out[name] = with_error(p, m.standard_error(p));
  }
  out["n_windows"] = m.n_windows;
  return out;
}

json source_json(const CharacterizedSource& s) {
  const auto& cf = s.closed_form;
  return {
      {"distribution", to_string(s.kind)},
      {"eta_h", estimate(s.eta_h)},
      {"eta_a", estimate(s.eta_a)},
      {"eta_b", estimate(s.eta_b)},
      {"mu", estimate(s.mu)},
      {"mean_pairs", exact(s.distribution().mean_pairs())},
      {"p1", estimate(s.p1)},
      {"r", estimate(s.r)},
      {"closed_form",
       {{"eta_h_via_a", exact(cf.eta_h_via_a)},
        {"eta_h_via_b", exact(cf.eta_h_via_b)},
        {"eta_a", exact(cf.eta_a)},
        {"eta_b", exact(cf.eta_b)},
        {"p1_h_form", exact(cf.p1_h_form)},
        {"p1_a_form", exact(cf.p1_a_form)},
        {"p1_b_form", exact(cf.p1_b_form)},
        {"p1", exact(cf.p1)},
        {"p1_discrepancy", exact(cf.p1_discrepancy)}}},
      {"fit_chi2", exact(s.fit_chi2)},
      {"fit_iterations", s.fit_iterations},
  };
}

json bound_json(const BrightnessBound& b) {
  return {{"mu_max", exact(b.mu_max)},
          {"r_min", exact(b.r_min)},
          {"g_peak", exact(b.g_peak)},
          {"mu_at_peak", exact(b.mu_at_peak)},
          {"saturated", b.saturated}};
}

}  // namespace

std::string to_json(const RunReport& report) {
  json out = json::object();
  out["command"] = report.command;

  json settings = json::object();
  for (const auto& [key, value] : report.settings) {
    std::visit([&settings, &key = key](const auto& v) { settings[key] = v; },
               value);
  }
  out["settings"] = settings;

  if (report.counts) out["counts"] = counts_json(*report.counts);
  if (report.ingest) {
    out["ingest"] = {{"total_periods", report.ingest->total_periods},
                     {"discarded_windows", report.ingest->discarded_windows},
                     {"multi_tag_windows", report.ingest->multi_tag_windows}};
  }
  if (report.measured) out["measured"] = measured_json(*report.measured);
  if (report.correlation_strength) {
    out["correlation_strength"] = estimate(*report.correlation_strength);
  }
  if (report.source) out["source"] = source_json(*report.source);
  if (report.bound) out["bound"] = bound_json(*report.bound);
  if (!report.predictions.empty()) {
    json preds = json::array();
    for (const auto& p : report.predictions) {
      preds.push_back({{"p_h", exact(p.p_h)},
                       {"mu", exact(p.mu)},
                       {"g2", exact(p.g2)},
                       {"g2_approx", exact(p.g2_approx)}});
    }
    out["predictions"] = preds;
  }
  out["warnings"] = report.warnings;
  if (report.error) {
    out["error"] = {{"kind", to_string(report.error->kind)},
                    {"exit_code", exit_code(report.error->kind)},
                    {"message", report.error->message}};
  }
  return out.dump(2) + "\n";
}

}  // namespace pairstat
