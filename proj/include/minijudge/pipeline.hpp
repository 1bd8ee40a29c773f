#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minijudge/corpus.hpp"
#include "minijudge/equiv.hpp"
#include "minijudge/learn.hpp"

namespace minijudge {

enum class Route {
  ReplayFail,
  ClassifierAccept,
  CheckerCorrect,
  CheckerIncorrect,
  CheckerUnknownAssumedCorrect,
};
inline constexpr int kRouteCount = 5;
const char* route_name(Route route);

// A counterexample and the reference outcome on it, computed once so replay
// never re-runs the reference.
struct StoredTest {
  TestCase test;
  ExecutionResult expected;
};

struct RouteEntry {
  std::string id;
  Route route = Route::CheckerCorrect;
  bool labeled_correct = false;
  bool checker_called = false;
  std::int64_t elapsed_ms = 0;
};

struct MetricsCounters {
  int checker_calls_total = 0;
  int checker_calls_post_seed = 0;
  int tests_replayed = 0;  // stored-test executions across all replays
  int unknown_verdicts = 0;
  std::int64_t wall_clock_ms = 0;
  std::vector<RouteEntry> log;  // one entry per processed submission, in order

  std::array<int, kRouteCount> route_counts() const;
};

struct HoldoutRecord {
  std::string id;
  int phase = 0;  // retrains completed when the prediction was recorded
  double prob = 0.0;
  bool predicted_correct = false;
};

struct JudgeState {
  std::set<std::string> accepted;          // judged correct
  std::set<std::string> rejected;          // judged incorrect
  std::set<std::string> checker_accepted;  // subset of accepted labeled by the checker
  std::vector<StoredTest> failing_tests;   // insertion order, deduplicated by input values
  std::optional<FeatureVocab> vocab;
  std::optional<CalibratedModel> model;
  std::vector<HoldoutRecord> holdout;
  std::vector<std::string> warnings;
  MetricsCounters metrics;
};

struct SeedTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingOracleLabel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AtasConfig {
  int seed_count = 50;        // submissions labeled by the checker up front
  int retrain_interval = 50;  // labeled submissions between refits
  double max_fpr = 0.3;
  int ngram = 3;
  ModelConfig classifier = ModelConfig::make_gbt(7, 100);
  ExploreBudget check_budget;
  std::uint64_t rng_seed = 1;
  bool retrain = true;
  // On an untrainable seed (single class), judge the rest checker-only with a
  // warning instead of failing the run.
  bool degrade_to_baseline = false;
  // Record the classifier's prediction on every 10th post-seed submission
  // (instrumentation only; routing is unchanged).
  bool holdout = false;
  // Send every seed submission to the checker without replay short-circuits,
  // making the seed phase order-independent.
  bool parallel_seed = false;
};

struct ReplayResult {
  int tests_run = 0;
  std::optional<std::size_t> failed_index;  // first stored test that distinguishes
};

// Runs the stored tests in insertion order; a structurally different outcome
// (including runtime errors and fuel exhaustion) is a failure.
ReplayResult replay_failing_tests(const Program& program, const std::vector<StoredTest>& tests);

// One checker call: Equivalent joins accepted (via checker_accepted),
// Counterexample joins rejected and appends the validated test, Unknown is
// assumed correct but counted. Returns the route taken.
Route label_with_checker(const std::string& id, const Program& program, const Program& reference,
                         const InputDomain& domain, const ExploreBudget& budget, bool post_seed,
                         JudgeState& state);

// Replay-then-check over the whole queue. Entries after seed_boundary count
// toward checker_calls_post_seed so gated runs can be compared like for like.
JudgeState run_baseline(const std::vector<Submission>& queue, const Program& reference,
                        const InputDomain& domain, const ExploreBudget& budget,
                        int seed_boundary = 0);

// Seed phase labels the first seed_count submissions with the checker, then a
// calibrated classifier accepts confident submissions without checking;
// everything else falls back to replay-then-check. Refits every
// retrain_interval labeled submissions on checker-derived labels only.
JudgeState run_atas(const std::vector<Submission>& queue, const Program& reference,
                    const InputDomain& domain, const AtasConfig& config);

struct ErrorReport {
  int accepted_incorrect = 0;  // judged correct, ground truth incorrect
  int rejected_correct = 0;    // judged incorrect, ground truth correct
  int oracle_incorrect_total = 0;
  int oracle_correct_total = 0;
  bool empty_denominator = false;
  std::array<int, kRouteCount> route_totals{};
  std::array<int, kRouteCount> route_errors{};  // accepted_incorrect by arrival route

  double error_rate() const {
    return oracle_incorrect_total == 0
               ? 0.0
               : static_cast<double>(accepted_incorrect) / oracle_incorrect_total;
  }
};

// oracle_correct maps every processed id to its ground-truth label.
ErrorReport evaluate_against_oracle(const JudgeState& state,
                                    const std::map<std::string, bool>& oracle_correct);

}  // namespace minijudge
