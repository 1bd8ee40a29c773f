#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minijudge/report.hpp"

#include <string>
#include <vector>

using namespace minijudge;
using nlohmann::json;

namespace {

const char* kSquare = "read(inp);\nprint(inp * inp);\n";
const char* kCube = "read(x);\nvar ans = x * x * x;\nprint(ans);\n";
const char* kCubeRenamed = "read(m);\nvar r = m * m * m;\nprint(r);\n";

InputDomain dom1(std::int64_t lo, std::int64_t hi) { return InputDomain{{{lo, hi}}}; }

Submission sub(std::string id, std::string source) {
  Submission s;
  s.id = std::move(id);
  s.source = std::move(source);
  return s;
}

JudgeState walkthrough_state() {
  Program square = parse(kSquare);
  return run_baseline({sub("s1", kSquare), sub("s2", kCube), sub("s3", kCubeRenamed)}, square,
                      dom1(1, 50), ExploreBudget{});
}

HoldoutRecord rec(std::string id, int phase, double prob, bool predicted) {
  return HoldoutRecord{std::move(id), phase, prob, predicted};
}

}  // namespace

TEST_CASE("metrics serialization mirrors the counters") {
  JudgeState s = walkthrough_state();
  json m = metrics_to_json(s.metrics);
  CHECK(m["submissions"] == 3);
  CHECK(m["checker_calls_total"] == 2);
  CHECK(m["checker_calls_post_seed"] == 2);
  CHECK(m["tests_replayed"] == 1);
  CHECK(m["unknown_verdicts"] == 0);
  CHECK(m["routes"]["checker_correct"] == 1);
  CHECK(m["routes"]["checker_incorrect"] == 1);
  CHECK(m["routes"]["replay_fail"] == 1);
  CHECK(m["routes"]["classifier_accept"] == 0);
  CHECK(m["routes"]["checker_unknown_assumed_correct"] == 0);
  int sum = 0;
  for (const auto& [name, count] : m["routes"].items()) sum += count.get<int>();
  CHECK(sum == 3);
}

TEST_CASE("timing fields are stripped at every depth") {
  json doc = {{"wall_clock_ms", 5},
              {"keep", 1},
              {"nested", {{"elapsed_ms", 3}, {"keep", "x"}}},
              {"arr", json::array({json{{"speedup", 2.0}, {"keep", true}}})}};
  json stripped = strip_timing_fields(doc);
  CHECK(!stripped.contains("wall_clock_ms"));
  CHECK(!stripped["nested"].contains("elapsed_ms"));
  CHECK(!stripped["arr"][0].contains("speedup"));
  CHECK(stripped["keep"] == 1);
  CHECK(stripped["nested"]["keep"] == "x");
  CHECK(stripped["arr"][0]["keep"] == true);
}

TEST_CASE("judge report includes evaluation only when ground truth is supplied") {
  JudgeState s = walkthrough_state();
  json bare = judge_report("baseline", json::object(), s, nullptr);
  CHECK(bare["schema_version"] == 1);
  CHECK(bare["mode"] == "baseline");
  CHECK(!bare.contains("evaluation"));
  CHECK(bare["warnings"].is_array());

  std::map<std::string, bool> oracle = {{"s1", true}, {"s2", false}, {"s3", false}};
  json scored = judge_report("baseline", json::object(), s, &oracle);
  REQUIRE(scored.contains("evaluation"));
  CHECK(scored["evaluation"]["accepted_incorrect"] == 0);
  CHECK(scored["evaluation"]["oracle_incorrect_total"] == 2);
  CHECK(scored["evaluation"]["error_rate"] == 0.0);
  CHECK(scored["evaluation"]["route_errors"]["classifier_accept"] == 0);
}

TEST_CASE("compare report tabulates checker calls and flags a vacuous comparison") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("s1", kSquare), sub("s2", kCube),
                                   sub("s3", kCubeRenamed), sub("s4", kSquare)};
  JudgeState base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{}, 2);
  AtasConfig config;
  config.seed_count = 2;
  config.classifier = ModelConfig::make_knn(1);
  JudgeState gated = run_atas(queue, square, dom1(1, 50), config);

  json report = compare_report(json{{"seed_count", 2}}, base, gated, nullptr);
  CHECK(report["mode"] == "compare");
  CHECK(report["checker_calls"]["baseline_total"] == base.metrics.checker_calls_total);
  CHECK(report["checker_calls"]["atas_total"] == gated.metrics.checker_calls_total);
  CHECK(report["checker_calls"]["baseline_post_seed"] == base.metrics.checker_calls_post_seed);
  CHECK(report["checker_calls"]["atas_post_seed"] == gated.metrics.checker_calls_post_seed);
  CHECK(report["insufficient_post_seed_data"] ==
        (base.metrics.checker_calls_post_seed == 0));
  CHECK(report["baseline"]["metrics"]["submissions"] == 4);
  CHECK(report["atas"]["metrics"]["submissions"] == 4);
  if (base.metrics.checker_calls_post_seed > 0) {
    double expect = 1.0 - static_cast<double>(gated.metrics.checker_calls_post_seed) /
                              base.metrics.checker_calls_post_seed;
    CHECK(report["checker_calls"]["post_seed_reduction"] == doctest::Approx(expect));
  }

  JudgeState empty_base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{},
                                       static_cast<int>(queue.size()));
  json vacuous = compare_report(json::object(), empty_base, gated, nullptr);
  CHECK(vacuous["insufficient_post_seed_data"] == true);
  CHECK(vacuous["checker_calls"]["post_seed_reduction"].is_null());
}

TEST_CASE("run log lines are tab-separated and frozen") {
  MetricsCounters m;
  m.log.push_back({"s1", Route::CheckerCorrect, true, true, 7});
  m.log.push_back({"s2", Route::ReplayFail, false, false, 0});
  m.log.push_back({"s3", Route::ClassifierAccept, true, false, 12});
  CHECK(render_run_log(m) ==
        "s1\tchecker_correct\tcorrect\t7\t1\n"
        "s2\treplay_fail\tincorrect\t0\t0\n"
        "s3\tclassifier_accept\tcorrect\t12\t0\n");
}

TEST_CASE("holdout phase stats score precision and recall against ground truth") {
  std::vector<HoldoutRecord> records = {
      rec("a", 0, 0.9, true),   // truly correct: TP
      rec("b", 0, 0.8, true),   // truly incorrect: FP
      rec("c", 0, 0.1, false),  // truly correct, missed
      rec("d", 1, 0.2, false),  // truly correct, missed; phase has no positives
  };
  std::map<std::string, bool> oracle = {{"a", true}, {"b", false}, {"c", true}, {"d", true}};

  auto stats = holdout_phase_stats(records, &oracle);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].phase == 0);
  CHECK(stats[0].holdout_total == 3);
  CHECK(stats[0].predicted_correct == 2);
  REQUIRE(stats[0].precision.has_value());
  CHECK(*stats[0].precision == doctest::Approx(0.5));
  REQUIRE(stats[0].recall.has_value());
  CHECK(*stats[0].recall == doctest::Approx(0.5));
  CHECK(stats[1].phase == 1);
  CHECK(!stats[1].precision.has_value());
  REQUIRE(stats[1].recall.has_value());
  CHECK(*stats[1].recall == doctest::Approx(0.0));

  auto unscored = holdout_phase_stats(records, nullptr);
  CHECK(unscored[0].holdout_total == 3);
  CHECK(!unscored[0].precision.has_value());
  CHECK(!unscored[0].recall.has_value());

  std::map<std::string, bool> incomplete = {{"a", true}};
  CHECK_THROWS_AS(holdout_phase_stats(records, &incomplete), MissingOracleLabel);

  json rows = phase_stats_to_json(stats);
  CHECK(rows[0]["precision"] == 0.5);
  CHECK(rows[1]["precision"].is_null());
}

TEST_CASE("identical runs render byte-identical reports after timing removal") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("s1", kSquare), sub("s2", kCube),
                                   sub("s3", kCubeRenamed), sub("s4", kSquare)};
  std::map<std::string, bool> oracle = {
      {"s1", true}, {"s2", false}, {"s3", false}, {"s4", true}};
  AtasConfig config;
  config.seed_count = 2;
  config.classifier = ModelConfig::make_knn(1);

  auto once = [&]() {
    JudgeState base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{}, 2);
    JudgeState gated = run_atas(queue, square, dom1(1, 50), config);
    return strip_timing_fields(compare_report(json{{"seed_count", 2}}, base, gated, &oracle))
        .dump(2);
  };
  CHECK(once() == once());
}

TEST_CASE("text rendering covers both report shapes") {
  JudgeState s = walkthrough_state();
  std::map<std::string, bool> oracle = {{"s1", true}, {"s2", false}, {"s3", false}};
  std::string single = render_report_text(judge_report("baseline", json::object(), s, &oracle));
  CHECK(single.find("mode: baseline") != std::string::npos);
  CHECK(single.find("checker calls: 2 total") != std::string::npos);
  CHECK(single.find("replay_fail: 1") != std::string::npos);

  std::string joint = render_report_text(
      compare_report(json{{"seed_count", 2}}, s, s, &oracle));
  CHECK(joint.find("mode: compare") != std::string::npos);
  CHECK(joint.find("checker calls (baseline vs atas):") != std::string::npos);
  CHECK(joint.find("post-seed: 2 vs 2") != std::string::npos);
}
