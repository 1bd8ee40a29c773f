#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "minijudge/pipeline.hpp"

namespace minijudge {

// Holdout predictions grouped by retrain phase, scored against ground truth
// when it is available.
struct PhaseStats {
  int phase = 0;
  int holdout_total = 0;
  int predicted_correct = 0;
  std::optional<double> precision;  // absent without ground truth or positives
  std::optional<double> recall;     // absent without ground truth or correct holdouts
};

std::vector<PhaseStats> holdout_phase_stats(const std::vector<HoldoutRecord>& records,
                                            const std::map<std::string, bool>* oracle_correct);

nlohmann::json metrics_to_json(const MetricsCounters& metrics);
nlohmann::json error_report_to_json(const ErrorReport& report);
nlohmann::json phase_stats_to_json(const std::vector<PhaseStats>& phases);

// Single-pipeline report. mode is "baseline" or "atas"; evaluation and holdout
// sections appear only when ground truth was supplied.
nlohmann::json judge_report(const std::string& mode, const nlohmann::json& config_echo,
                            const JudgeState& state,
                            const std::map<std::string, bool>* oracle_correct);

// Joint report for both pipelines on one stream: checker-call table with total
// and post-seed columns, plus wall-clock speedup (baseline over gated).
nlohmann::json compare_report(const nlohmann::json& config_echo, const JudgeState& baseline,
                              const JudgeState& atas,
                              const std::map<std::string, bool>* oracle_correct);

// Removes wall-clock-dependent fields (wall_clock_ms, elapsed_ms, speedup) at
// every depth, so two runs of the same experiment compare byte-for-byte.
nlohmann::json strip_timing_fields(nlohmann::json value);

// One line per submission: id, route, verdict, elapsed ms, checker-called flag.
std::string render_run_log(const MetricsCounters& metrics);

std::string render_report_text(const nlohmann::json& report);

}  // namespace minijudge
