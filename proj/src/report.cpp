#include "minijudge/report.hpp"

#include <algorithm>
#include <sstream>

namespace minijudge {

namespace {

using nlohmann::json;

json routes_to_json(const std::array<int, kRouteCount>& counts) {
  json out = json::object();
  for (int i = 0; i < kRouteCount; ++i) out[route_name(static_cast<Route>(i))] = counts[i];
  return out;
}

void append_kv(std::ostringstream& out, const std::string& key, const json& value) {
  out << "  " << key << ": ";
  if (value.is_string()) out << value.get<std::string>();
  else out << value.dump();
  out << "\n";
}

void append_metrics_text(std::ostringstream& out, const std::string& title, const json& m) {
  out << title << "\n";
  out << "  submissions: " << m["submissions"].get<int>() << "\n";
  out << "  checker calls: " << m["checker_calls_total"].get<int>() << " total, "
      << m["checker_calls_post_seed"].get<int>() << " post-seed\n";
  out << "  stored tests replayed: " << m["tests_replayed"].get<int>() << "\n";
  out << "  inconclusive checks: " << m["unknown_verdicts"].get<int>() << "\n";
  if (m.contains("wall_clock_ms"))
    out << "  wall clock ms: " << m["wall_clock_ms"].get<std::int64_t>() << "\n";
  out << "  routes:\n";
  for (const auto& [name, count] : m["routes"].items())
    out << "    " << name << ": " << count.get<int>() << "\n";
}

void append_evaluation_text(std::ostringstream& out, const json& e) {
  out << "  vs ground truth: " << e["accepted_incorrect"].get<int>() << " incorrect accepted of "
      << e["oracle_incorrect_total"].get<int>() << " incorrect, "
      << e["rejected_correct"].get<int>() << " correct rejected of "
      << e["oracle_correct_total"].get<int>() << " correct";
  if (e["empty_denominator"].get<bool>()) out << " (no incorrect submissions)";
  else out << ", error rate " << e["error_rate"].dump();
  out << "\n";
}

}  // namespace

std::vector<PhaseStats> holdout_phase_stats(const std::vector<HoldoutRecord>& records,
                                            const std::map<std::string, bool>* oracle_correct) {
  std::map<int, PhaseStats> by_phase;
  std::map<int, std::pair<int, int>> truth;  // phase -> (true positives, oracle-correct count)
  for (const auto& rec : records) {
    PhaseStats& ps = by_phase[rec.phase];
    ps.phase = rec.phase;
    ++ps.holdout_total;
    if (rec.predicted_correct) ++ps.predicted_correct;
    if (oracle_correct != nullptr) {
      auto it = oracle_correct->find(rec.id);
      if (it == oracle_correct->end())
        throw MissingOracleLabel("no ground-truth label for holdout id '" + rec.id + "'");
      auto& [tp, pos] = truth[rec.phase];
      if (it->second) ++pos;
      if (it->second && rec.predicted_correct) ++tp;
    }
  }
  std::vector<PhaseStats> out;
  for (auto& [phase, ps] : by_phase) {
    if (oracle_correct != nullptr) {
      auto [tp, pos] = truth[phase];
      if (ps.predicted_correct > 0)
        ps.precision = static_cast<double>(tp) / ps.predicted_correct;
      if (pos > 0) ps.recall = static_cast<double>(tp) / pos;
    }
    out.push_back(ps);
  }
  return out;
}

nlohmann::json metrics_to_json(const MetricsCounters& metrics) {
  json out;
  out["submissions"] = static_cast<int>(metrics.log.size());
  out["checker_calls_total"] = metrics.checker_calls_total;
  out["checker_calls_post_seed"] = metrics.checker_calls_post_seed;
  out["tests_replayed"] = metrics.tests_replayed;
  out["unknown_verdicts"] = metrics.unknown_verdicts;
  out["wall_clock_ms"] = metrics.wall_clock_ms;
  out["routes"] = routes_to_json(metrics.route_counts());
  return out;
}

nlohmann::json error_report_to_json(const ErrorReport& report) {
  json out;
  out["accepted_incorrect"] = report.accepted_incorrect;
  out["rejected_correct"] = report.rejected_correct;
  out["oracle_incorrect_total"] = report.oracle_incorrect_total;
  out["oracle_correct_total"] = report.oracle_correct_total;
  out["empty_denominator"] = report.empty_denominator;
  out["error_rate"] = report.error_rate();
  out["route_totals"] = routes_to_json(report.route_totals);
  out["route_errors"] = routes_to_json(report.route_errors);
  return out;
}

nlohmann::json phase_stats_to_json(const std::vector<PhaseStats>& phases) {
  json out = json::array();
  for (const auto& ps : phases) {
    json row;
    row["phase"] = ps.phase;
    row["holdout_total"] = ps.holdout_total;
    row["predicted_correct"] = ps.predicted_correct;
    row["precision"] = ps.precision.has_value() ? json(*ps.precision) : json(nullptr);
    row["recall"] = ps.recall.has_value() ? json(*ps.recall) : json(nullptr);
    out.push_back(row);
  }
  return out;
}

nlohmann::json judge_report(const std::string& mode, const nlohmann::json& config_echo,
                            const JudgeState& state,
                            const std::map<std::string, bool>* oracle_correct) {
  json out;
  out["schema_version"] = 1;
  out["mode"] = mode;
  out["config"] = config_echo;
  out["metrics"] = metrics_to_json(state.metrics);
  out["warnings"] = state.warnings;
  if (oracle_correct != nullptr)
    out["evaluation"] = error_report_to_json(evaluate_against_oracle(state, *oracle_correct));
  if (!state.holdout.empty())
    out["holdout_phases"] = phase_stats_to_json(holdout_phase_stats(state.holdout, oracle_correct));
  return out;
}

nlohmann::json compare_report(const nlohmann::json& config_echo, const JudgeState& baseline,
                              const JudgeState& atas,
                              const std::map<std::string, bool>* oracle_correct) {
  json out;
  out["schema_version"] = 1;
  out["mode"] = "compare";
  out["config"] = config_echo;
  out["baseline"] = judge_report("baseline", json::object(), baseline, oracle_correct);
  out["atas"] = judge_report("atas", json::object(), atas, oracle_correct);
  out["baseline"].erase("config");
  out["atas"].erase("config");

  json calls;
  calls["baseline_total"] = baseline.metrics.checker_calls_total;
  calls["atas_total"] = atas.metrics.checker_calls_total;
  calls["baseline_post_seed"] = baseline.metrics.checker_calls_post_seed;
  calls["atas_post_seed"] = atas.metrics.checker_calls_post_seed;
  calls["post_seed_reduction"] =
      baseline.metrics.checker_calls_post_seed == 0
          ? json(nullptr)
          : json(1.0 - static_cast<double>(atas.metrics.checker_calls_post_seed) /
                           baseline.metrics.checker_calls_post_seed);
  out["checker_calls"] = calls;
  out["insufficient_post_seed_data"] = baseline.metrics.checker_calls_post_seed == 0;
  out["speedup"] = atas.metrics.wall_clock_ms == 0
                       ? json(nullptr)
                       : json(static_cast<double>(baseline.metrics.wall_clock_ms) /
                              atas.metrics.wall_clock_ms);
  return out;
}

nlohmann::json strip_timing_fields(nlohmann::json value) {
  if (value.is_object()) {
    value.erase("wall_clock_ms");
    value.erase("elapsed_ms");
    value.erase("speedup");
    for (auto& [key, child] : value.items()) child = strip_timing_fields(child);
  } else if (value.is_array()) {
    for (auto& child : value) child = strip_timing_fields(child);
  }
  return value;
}

std::string render_run_log(const MetricsCounters& metrics) {
  std::ostringstream out;
  for (const auto& e : metrics.log)
    out << e.id << '\t' << route_name(e.route) << '\t'
        << (e.labeled_correct ? "correct" : "incorrect") << '\t' << e.elapsed_ms << '\t'
        << (e.checker_called ? 1 : 0) << '\n';
  return out.str();
}

std::string render_report_text(const nlohmann::json& report) {
  std::ostringstream out;
  const std::string mode = report["mode"].get<std::string>();
  out << "mode: " << mode << "\n";
  if (report.contains("config") && !report["config"].empty()) {
    out << "config:\n";
    for (const auto& [key, value] : report["config"].items()) append_kv(out, key, value);
  }
  auto section = [&](const json& part, const std::string& title) {
    append_metrics_text(out, title, part["metrics"]);
    if (part.contains("evaluation")) append_evaluation_text(out, part["evaluation"]);
    if (part.contains("holdout_phases")) {
      out << "  holdout phases (phase, size, predicted correct, precision, recall):\n";
      for (const auto& row : part["holdout_phases"])
        out << "    " << row["phase"].get<int>() << "  " << row["holdout_total"].get<int>()
            << "  " << row["predicted_correct"].get<int>() << "  " << row["precision"].dump()
            << "  " << row["recall"].dump() << "\n";
    }
    for (const auto& w : part["warnings"]) out << "  warning: " << w.get<std::string>() << "\n";
  };
  if (mode == "compare") {
    section(report["baseline"], "baseline");
    section(report["atas"], "atas");
    const json& calls = report["checker_calls"];
    out << "checker calls (baseline vs atas):\n";
    out << "  total: " << calls["baseline_total"].get<int>() << " vs "
        << calls["atas_total"].get<int>() << "\n";
    out << "  post-seed: " << calls["baseline_post_seed"].get<int>() << " vs "
        << calls["atas_post_seed"].get<int>() << "\n";
    if (calls["post_seed_reduction"].is_number())
      out << "  post-seed reduction: " << calls["post_seed_reduction"].dump() << "\n";
    if (report["insufficient_post_seed_data"].get<bool>())
      out << "  note: baseline made no post-seed checker calls, comparison is vacuous\n";
    if (report.contains("speedup") && report["speedup"].is_number())
      out << "speedup (baseline wall clock / atas wall clock): " << report["speedup"].dump()
          << "\n";
  } else {
    section(report, "metrics");
  }
  return out.str();
}

}  // namespace minijudge
