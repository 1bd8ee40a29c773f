#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minijudge/pipeline.hpp"

#include <set>
#include <string>
#include <vector>

using namespace minijudge;

namespace {

const char* kSquare = "read(inp);\nprint(inp * inp);\n";
const char* kCube = "read(x);\nvar ans = x * x * x;\nprint(ans);\n";
const char* kCubeRenamed = "read(m);\nvar r = m * m * m;\nprint(r);\n";
const char* kIdentity = "read(x);\nprint(x);\n";
const char* kSpin = "read(x);\nwhile (1 == 1) x = x + 1;\nprint(x);\n";

InputDomain dom1(std::int64_t lo, std::int64_t hi) { return InputDomain{{{lo, hi}}}; }

Submission sub(std::string id, std::string source) {
  Submission s;
  s.id = std::move(id);
  s.source = std::move(source);
  return s;
}

std::string square_src(const std::string& name) {
  return "read(" + name + ");\nprint(" + name + " * " + name + ");\n";
}
std::string cube_src(const std::string& name) {
  return "read(" + name + ");\nvar out = " + name + " * " + name + " * " + name +
         ";\nprint(out);\n";
}

StoredTest stored(const Program& reference, std::vector<std::int64_t> values) {
  TestCase t{std::move(values)};
  return StoredTest{t, run_concrete(reference, t)};
}

// The log, the partition, and the counters must tell one consistent story.
void check_conservation(const JudgeState& s, std::size_t n) {
  REQUIRE(s.metrics.log.size() == n);
  int checker = 0;
  int unknown = 0;
  std::set<std::string> ids;
  for (const auto& e : s.metrics.log) {
    ids.insert(e.id);
    if (e.checker_called) ++checker;
    if (e.route == Route::CheckerUnknownAssumedCorrect) ++unknown;
    bool in_accepted = s.accepted.count(e.id) > 0;
    bool in_rejected = s.rejected.count(e.id) > 0;
    CHECK(in_accepted != in_rejected);
    CHECK(e.labeled_correct == in_accepted);
  }
  CHECK(ids.size() == n);
  CHECK(s.metrics.checker_calls_total == checker);
  CHECK(s.metrics.unknown_verdicts == unknown);
  CHECK(s.accepted.size() + s.rejected.size() == n);
  for (const auto& id : s.checker_accepted) CHECK(s.accepted.count(id) == 1);
  auto counts = s.metrics.route_counts();
  int sum = 0;
  for (int c : counts) sum += c;
  CHECK(sum == static_cast<int>(n));
}

std::vector<Route> routes_of(const JudgeState& s) {
  std::vector<Route> r;
  for (const auto& e : s.metrics.log) r.push_back(e.route);
  return r;
}

}  // namespace

TEST_CASE("replay finds the cube at the stored distinguishing input") {
  Program square = parse(kSquare);
  Program cube = parse(kCube);
  std::vector<StoredTest> tests = {stored(square, {2})};
  REQUIRE(tests[0].expected.kind == ExecutionResult::Kind::IntOutput);
  REQUIRE(tests[0].expected.int_value == 4);

  auto r = replay_failing_tests(cube, tests);
  REQUIRE(r.failed_index.has_value());
  CHECK(*r.failed_index == 0);
  CHECK(r.tests_run == 1);

  auto pass = replay_failing_tests(square, tests);
  CHECK(!pass.failed_index.has_value());
  CHECK(pass.tests_run == 1);

  auto empty = replay_failing_tests(cube, {});
  CHECK(!empty.failed_index.has_value());
  CHECK(empty.tests_run == 0);
}

TEST_CASE("replay stops at the first failing stored test") {
  Program square = parse(kSquare);
  Program cube = parse(kCube);
  std::vector<StoredTest> tests = {stored(square, {1}), stored(square, {2}),
                                   stored(square, {3})};
  auto r = replay_failing_tests(cube, tests);
  REQUIRE(r.failed_index.has_value());
  CHECK(*r.failed_index == 1);  // cube agrees at 1, differs at 2
  CHECK(r.tests_run == 2);
}

TEST_CASE("replay treats a runtime error as a differing outcome") {
  Program square = parse(kSquare);
  Program trap = parse("read(x);\nprint(10 / (x - 2));\n");
  std::vector<StoredTest> tests = {stored(square, {2})};
  auto r = replay_failing_tests(trap, tests);
  REQUIRE(r.failed_index.has_value());
  CHECK(*r.failed_index == 0);
}

TEST_CASE("checker labeling routes a wrong submission and stores its counterexample") {
  Program square = parse(kSquare);
  Program cube = parse(kCube);
  JudgeState state;
  Route route = label_with_checker("s1", cube, square, dom1(1, 50), ExploreBudget{}, false, state);
  CHECK(route == Route::CheckerIncorrect);
  CHECK(state.rejected.count("s1") == 1);
  CHECK(state.accepted.empty());
  REQUIRE(state.failing_tests.size() == 1);
  CHECK(state.failing_tests[0].test.values == std::vector<std::int64_t>{2});
  REQUIRE(state.failing_tests[0].expected.kind == ExecutionResult::Kind::IntOutput);
  CHECK(state.failing_tests[0].expected.int_value == 4);  // reference output, not the cube's
  CHECK(state.metrics.checker_calls_total == 1);
  CHECK(state.metrics.checker_calls_post_seed == 0);
}

TEST_CASE("checker labeling accepts an equivalent submission without storing tests") {
  Program square = parse(kSquare);
  Program renamed = parse(square_src("q"));
  JudgeState state;
  Route route =
      label_with_checker("s1", renamed, square, dom1(1, 50), ExploreBudget{}, true, state);
  CHECK(route == Route::CheckerCorrect);
  CHECK(state.accepted.count("s1") == 1);
  CHECK(state.checker_accepted.count("s1") == 1);
  CHECK(state.failing_tests.empty());
  CHECK(state.metrics.checker_calls_post_seed == 1);
}

TEST_CASE("an inconclusive check is assumed correct but counted") {
  Program reference = parse(kIdentity);
  Program spin = parse(kSpin);
  JudgeState state;
  ExploreBudget budget;
  budget.max_unroll = 8;
  Route route = label_with_checker("s1", spin, reference, dom1(0, 5), budget, false, state);
  CHECK(route == Route::CheckerUnknownAssumedCorrect);
  CHECK(state.accepted.count("s1") == 1);
  CHECK(state.checker_accepted.count("s1") == 1);
  CHECK(state.metrics.unknown_verdicts == 1);
  CHECK(state.failing_tests.empty());
}

TEST_CASE("counterexamples with identical inputs are stored once") {
  Program square = parse(kSquare);
  JudgeState state;
  label_with_checker("s1", parse(kCube), square, dom1(1, 50), ExploreBudget{}, false, state);
  label_with_checker("s2", parse(kCubeRenamed), square, dom1(1, 50), ExploreBudget{}, false,
                     state);
  CHECK(state.rejected.size() == 2);
  CHECK(state.failing_tests.size() == 1);  // both diverge first at 2
}

TEST_CASE("baseline walkthrough: square, cube, renamed cube") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("s1", kSquare), sub("s2", kCube),
                                   sub("s3", kCubeRenamed)};
  JudgeState s = run_baseline(queue, square, dom1(1, 50), ExploreBudget{});
  CHECK(s.accepted == std::set<std::string>{"s1"});
  CHECK(s.rejected == std::set<std::string>{"s2", "s3"});
  CHECK(s.metrics.checker_calls_total == 2);  // the renamed cube dies on replay
  CHECK(s.metrics.tests_replayed == 1);
  CHECK(routes_of(s) ==
        std::vector<Route>{Route::CheckerCorrect, Route::CheckerIncorrect, Route::ReplayFail});
  CHECK(s.metrics.log[0].checker_called);
  CHECK(s.metrics.log[1].checker_called);
  CHECK(!s.metrics.log[2].checker_called);
  check_conservation(s, 3);
}

TEST_CASE("a queue of references costs one check each and stores nothing") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare), sub("b", kSquare), sub("c", kSquare)};
  JudgeState s = run_baseline(queue, square, dom1(1, 50), ExploreBudget{});
  CHECK(s.metrics.checker_calls_total == 3);
  CHECK(s.failing_tests.empty());
  CHECK(s.accepted.size() == 3);
  CHECK(s.metrics.tests_replayed == 0);
  check_conservation(s, 3);
}

TEST_CASE("an empty queue yields an empty state") {
  Program square = parse(kSquare);
  JudgeState s = run_baseline({}, square, dom1(1, 50), ExploreBudget{});
  CHECK(s.metrics.log.empty());
  CHECK(s.metrics.checker_calls_total == 0);
  CHECK(s.accepted.empty());
  CHECK(s.rejected.empty());
}

TEST_CASE("baseline routes an inconclusive submission to accepted") {
  Program reference = parse(kIdentity);
  ExploreBudget budget;
  budget.max_unroll = 8;
  std::vector<Submission> queue = {sub("ok", kIdentity), sub("spin", kSpin)};
  JudgeState s = run_baseline(queue, reference, dom1(0, 5), budget);
  CHECK(s.accepted == std::set<std::string>{"ok", "spin"});
  CHECK(s.metrics.unknown_verdicts == 1);
  CHECK(routes_of(s)[1] == Route::CheckerUnknownAssumedCorrect);
  check_conservation(s, 2);
}

TEST_CASE("the seed boundary splits the post-seed checker counter") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare), sub("b", kCube), sub("c", square_src("z")),
                                   sub("d", kCubeRenamed)};
  JudgeState s = run_baseline(queue, square, dom1(1, 50), ExploreBudget{}, 2);
  // c is checked post-seed; d fails replay so it never reaches the checker.
  CHECK(s.metrics.checker_calls_total == 3);
  CHECK(s.metrics.checker_calls_post_seed == 1);
  check_conservation(s, 4);
}

TEST_CASE("gate config validation") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare)};
  AtasConfig config;
  SUBCASE("zero seed") { config.seed_count = 0; }
  SUBCASE("zero retrain interval") { config.retrain_interval = 0; }
  SUBCASE("fpr zero") { config.max_fpr = 0.0; }
  SUBCASE("fpr one") { config.max_fpr = 1.0; }
  CHECK_THROWS_AS(run_atas(queue, square, dom1(1, 50), config), std::invalid_argument);
}

TEST_CASE("a stream no longer than the seed fails fast or degrades") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare), sub("b", kCube), sub("c", kCubeRenamed)};
  AtasConfig config;
  config.seed_count = 3;

  CHECK_THROWS_AS(run_atas(queue, square, dom1(1, 50), config), SeedTooSmall);

  config.degrade_to_baseline = true;
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);
  REQUIRE(s.warnings.size() == 1);
  CHECK(!s.model.has_value());
  CHECK(s.metrics.checker_calls_post_seed == 0);

  JudgeState base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{});
  CHECK(s.accepted == base.accepted);
  CHECK(s.rejected == base.rejected);
  CHECK(s.metrics.checker_calls_total == base.metrics.checker_calls_total);
  check_conservation(s, 3);
}

TEST_CASE("a single-class seed fails fast or degrades to checker-only") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare), sub("b", square_src("w")),
                                   sub("c", square_src("z")), sub("d", kCube)};
  AtasConfig config;
  config.seed_count = 3;
  config.classifier = ModelConfig::make_knn(1);

  CHECK_THROWS_AS(run_atas(queue, square, dom1(1, 50), config), SeedTooSmall);

  config.degrade_to_baseline = true;
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);
  REQUIRE(s.warnings.size() == 1);
  CHECK(!s.model.has_value());
  for (const auto& e : s.metrics.log) CHECK(e.route != Route::ClassifierAccept);
  CHECK(s.rejected == std::set<std::string>{"d"});
  check_conservation(s, 4);
}

TEST_CASE("a seed too short for any n-gram fails fast or degrades") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("a", kSquare), sub("b", kCube), sub("c", square_src("z")),
                                   sub("d", kCubeRenamed)};
  AtasConfig config;
  config.seed_count = 2;
  config.ngram = 500;  // longer than any token sequence in the seed

  CHECK_THROWS_AS(run_atas(queue, square, dom1(1, 50), config), SeedTooSmall);

  config.degrade_to_baseline = true;
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);
  REQUIRE(s.warnings.size() == 1);
  CHECK(!s.model.has_value());
  for (const auto& e : s.metrics.log) CHECK(e.route != Route::ClassifierAccept);
  check_conservation(s, 4);
}

TEST_CASE("a separable stream trains a gate that skips redundant checks") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {
      sub("sq1", square_src("a")), sub("cu1", cube_src("b")), sub("sq2", square_src("c")),
      sub("cu2", cube_src("d")),   sub("sq3", square_src("e")), sub("cu3", cube_src("f")),
  };
  std::set<std::string> correct_ids = {"sq1", "sq2", "sq3"};
  std::set<std::string> wrong_ids = {"cu1", "cu2", "cu3"};
  const char* names[] = {"g", "h", "i", "j", "k"};
  for (int n = 0; n < 5; ++n) {
    queue.push_back(sub("psq" + std::to_string(n), square_src(names[n])));
    correct_ids.insert("psq" + std::to_string(n));
    queue.push_back(sub("pcu" + std::to_string(n), cube_src(names[n])));
    wrong_ids.insert("pcu" + std::to_string(n));
  }

  AtasConfig config;
  config.seed_count = 6;
  config.classifier = ModelConfig::make_knn(1);
  config.retrain = false;
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);

  REQUIRE(s.model.has_value());
  REQUIRE(s.vocab.has_value());
  CHECK(s.accepted == correct_ids);
  CHECK(s.rejected == wrong_ids);
  // Renamed squares encode identically, so the nearest neighbor is exact and
  // the calibrated threshold is attainable.
  CHECK(s.metrics.checker_calls_post_seed == 0);
  int classifier_accepts = 0;
  for (const auto& e : s.metrics.log)
    if (e.route == Route::ClassifierAccept) ++classifier_accepts;
  CHECK(classifier_accepts == 5);
  check_conservation(s, queue.size());

  JudgeState base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{}, 6);
  CHECK(base.accepted == s.accepted);
  CHECK(base.rejected == s.rejected);
  CHECK(base.metrics.checker_calls_post_seed > s.metrics.checker_calls_post_seed);
}

TEST_CASE("a degenerate calibration pins the threshold above every probability") {
  Program square = parse(kSquare);
  // One incorrect seed sample leaves no incorrect validation split.
  std::vector<Submission> queue = {sub("sq1", square_src("a")), sub("cu1", cube_src("b")),
                                   sub("sq2", square_src("c")), sub("sq3", square_src("d")),
                                   sub("sq4", square_src("e")),
                                   sub("tricky", "read(k);\nif (k == 2) print(4); else print(k "
                                                 "* k + 1);\n"),
                                   sub("sq5", square_src("f"))};
  AtasConfig config;
  config.seed_count = 4;
  config.classifier = ModelConfig::make_knn(1);
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);

  REQUIRE(s.model.has_value());
  CHECK(s.model->degenerate_validation);
  CHECK(s.model->thresh > 1.0);
  for (const auto& e : s.metrics.log) CHECK(e.route != Route::ClassifierAccept);

  // With the gate unattainable, routing matches the baseline exactly.
  JudgeState base = run_baseline(queue, square, dom1(1, 50), ExploreBudget{}, 4);
  CHECK(s.accepted == base.accepted);
  CHECK(s.rejected == base.rejected);
  CHECK(s.metrics.checker_calls_total == base.metrics.checker_calls_total);
  CHECK(s.metrics.checker_calls_post_seed == base.metrics.checker_calls_post_seed);
  REQUIRE(s.metrics.log.size() == base.metrics.log.size());
  for (std::size_t i = 0; i < s.metrics.log.size(); ++i) {
    CHECK(s.metrics.log[i].id == base.metrics.log[i].id);
    CHECK(s.metrics.log[i].route == base.metrics.log[i].route);
  }
  check_conservation(s, queue.size());
}

TEST_CASE("parallel seeding checks every seed submission and deduplicates tests") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("sq1", square_src("a")), sub("cu1", cube_src("b")),
                                   sub("sq2", square_src("c")), sub("cu2", cube_src("d")),
                                   sub("sq3", square_src("e")), sub("cu3", cube_src("f")),
                                   sub("psq", square_src("g"))};
  AtasConfig config;
  config.seed_count = 6;
  config.classifier = ModelConfig::make_knn(1);

  JudgeState serial = run_atas(queue, square, dom1(1, 50), config);
  CHECK(serial.metrics.checker_calls_total - serial.metrics.checker_calls_post_seed == 4);

  config.parallel_seed = true;
  JudgeState parallel = run_atas(queue, square, dom1(1, 50), config);
  CHECK(parallel.metrics.checker_calls_total - parallel.metrics.checker_calls_post_seed == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(parallel.metrics.log[i].checker_called);
  CHECK(parallel.failing_tests.size() == 1);  // all cubes share the witness at 2
  CHECK(parallel.accepted == serial.accepted);
  CHECK(parallel.rejected == serial.rejected);
}

TEST_CASE("holdout records every 10th post-seed prediction with the retrain phase") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {
      sub("sq1", square_src("a")), sub("cu1", cube_src("b")), sub("sq2", square_src("c")),
      sub("cu2", cube_src("d")),   sub("sq3", square_src("e")), sub("cu3", cube_src("f")),
  };
  std::vector<std::string> post_ids;
  for (int n = 0; n < 30; ++n) {
    std::string id = "p" + std::to_string(n);
    // The 10th post-seed submission is wrong and dies on replay; its
    // prediction must be recorded anyway.
    queue.push_back(sub(id, n == 9 ? cube_src("n9") : square_src("n" + std::to_string(n))));
    post_ids.push_back(id);
  }

  AtasConfig config;
  config.seed_count = 6;
  config.retrain_interval = 3;
  config.classifier = ModelConfig::make_knn(1);
  config.holdout = true;
  JudgeState s = run_atas(queue, square, dom1(1, 50), config);

  REQUIRE(s.holdout.size() == 3);
  CHECK(s.holdout[0].id == post_ids[9]);
  CHECK(s.holdout[1].id == post_ids[19]);
  CHECK(s.holdout[2].id == post_ids[29]);
  // Refits land every 3 labels past the seed, so 3, 6, and 9 have completed.
  CHECK(s.holdout[0].phase == 3);
  CHECK(s.holdout[1].phase == 6);
  CHECK(s.holdout[2].phase == 9);
  CHECK(!s.holdout[0].predicted_correct);  // the replay-failed cube
  CHECK(s.holdout[1].predicted_correct);
  CHECK(s.holdout[2].predicted_correct);
  CHECK(s.rejected.count(post_ids[9]) == 1);
  for (const auto& h : s.holdout) {
    CHECK(h.prob >= 0.0);
    CHECK(h.prob <= 1.0);
  }
  CHECK(s.warnings.empty());

  config.holdout = false;
  JudgeState quiet = run_atas(queue, square, dom1(1, 50), config);
  CHECK(quiet.holdout.empty());
  CHECK(quiet.accepted == s.accepted);  // instrumentation does not change routing
}

TEST_CASE("gated runs are reproducible") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("sq1", square_src("a")), sub("cu1", cube_src("b")),
                                   sub("sq2", square_src("c")), sub("cu2", cube_src("d"))};
  for (int n = 0; n < 8; ++n)
    queue.push_back(sub("p" + std::to_string(n),
                        n % 2 == 0 ? square_src("n" + std::to_string(n))
                                   : cube_src("n" + std::to_string(n))));
  AtasConfig config;
  config.seed_count = 4;
  config.retrain_interval = 2;
  config.classifier = ModelConfig::make_knn(1);
  config.holdout = true;

  JudgeState a = run_atas(queue, square, dom1(1, 50), config);
  JudgeState b = run_atas(queue, square, dom1(1, 50), config);
  CHECK(a.accepted == b.accepted);
  CHECK(a.rejected == b.rejected);
  CHECK(routes_of(a) == routes_of(b));
  CHECK(a.warnings == b.warnings);
  REQUIRE(a.holdout.size() == b.holdout.size());
  for (std::size_t i = 0; i < a.holdout.size(); ++i) {
    CHECK(a.holdout[i].id == b.holdout[i].id);
    CHECK(a.holdout[i].prob == b.holdout[i].prob);
  }
  CHECK(a.metrics.checker_calls_total == b.metrics.checker_calls_total);
}

TEST_CASE("oracle evaluation of a clean baseline run reports zero error") {
  Program square = parse(kSquare);
  std::vector<Submission> queue = {sub("s1", kSquare), sub("s2", kCube),
                                   sub("s3", kCubeRenamed)};
  JudgeState s = run_baseline(queue, square, dom1(1, 50), ExploreBudget{});
  std::map<std::string, bool> oracle = {{"s1", true}, {"s2", false}, {"s3", false}};
  ErrorReport r = evaluate_against_oracle(s, oracle);
  CHECK(r.accepted_incorrect == 0);
  CHECK(r.rejected_correct == 0);
  CHECK(r.oracle_correct_total == 1);
  CHECK(r.oracle_incorrect_total == 2);
  CHECK(!r.empty_denominator);
  CHECK(r.error_rate() == 0.0);
  CHECK(r.route_totals[static_cast<std::size_t>(Route::CheckerCorrect)] == 1);
  CHECK(r.route_totals[static_cast<std::size_t>(Route::CheckerIncorrect)] == 1);
  CHECK(r.route_totals[static_cast<std::size_t>(Route::ReplayFail)] == 1);
}

TEST_CASE("oracle evaluation attributes mistaken accepts to their route") {
  JudgeState s;
  s.metrics.log.push_back({"good", Route::CheckerCorrect, true, true, 0});
  s.metrics.log.push_back({"slipped", Route::ClassifierAccept, true, false, 0});
  s.metrics.log.push_back({"caught", Route::ReplayFail, false, false, 0});
  s.metrics.log.push_back({"harsh", Route::CheckerIncorrect, false, true, 0});
  std::map<std::string, bool> oracle = {
      {"good", true}, {"slipped", false}, {"caught", false}, {"harsh", true}};
  ErrorReport r = evaluate_against_oracle(s, oracle);
  CHECK(r.accepted_incorrect == 1);
  CHECK(r.rejected_correct == 1);
  CHECK(r.route_errors[static_cast<std::size_t>(Route::ClassifierAccept)] == 1);
  CHECK(r.route_errors[static_cast<std::size_t>(Route::CheckerCorrect)] == 0);
  CHECK(r.oracle_incorrect_total == 2);
  CHECK(r.error_rate() == doctest::Approx(0.5));
}

TEST_CASE("oracle evaluation requires a label for every logged id") {
  JudgeState s;
  s.metrics.log.push_back({"mystery", Route::CheckerCorrect, true, true, 0});
  CHECK_THROWS_AS(evaluate_against_oracle(s, {}), MissingOracleLabel);
}

TEST_CASE("oracle evaluation of an empty run flags the empty denominator") {
  ErrorReport r = evaluate_against_oracle(JudgeState{}, {});
  CHECK(r.accepted_incorrect == 0);
  CHECK(r.empty_denominator);
  CHECK(r.error_rate() == 0.0);
}
