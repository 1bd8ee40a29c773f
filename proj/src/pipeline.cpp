#include "minijudge/pipeline.hpp"

#include <chrono>
#include <unordered_map>

namespace minijudge {

namespace {

std::int64_t elapsed_ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

bool route_is_correct(Route route) {
  switch (route) {
    case Route::ReplayFail:
    case Route::CheckerIncorrect: return false;
    case Route::ClassifierAccept:
    case Route::CheckerCorrect:
    case Route::CheckerUnknownAssumedCorrect: return true;
  }
  return false;
}

bool route_calls_checker(Route route) {
  switch (route) {
    case Route::CheckerCorrect:
    case Route::CheckerIncorrect:
    case Route::CheckerUnknownAssumedCorrect: return true;
    case Route::ReplayFail:
    case Route::ClassifierAccept: return false;
  }
  return false;
}

Route replay_then_check(const std::string& id, const Program& program, const Program& reference,
                        const InputDomain& domain, const ExploreBudget& budget, bool post_seed,
                        JudgeState& state) {
  ReplayResult replay = replay_failing_tests(program, state.failing_tests);
  state.metrics.tests_replayed += replay.tests_run;
  if (replay.failed_index.has_value()) {
    state.rejected.insert(id);
    return Route::ReplayFail;
  }
  return label_with_checker(id, program, reference, domain, budget, post_seed, state);
}

void push_log(JudgeState& state, const std::string& id, Route route,
              std::chrono::steady_clock::time_point start) {
  RouteEntry entry;
  entry.id = id;
  entry.route = route;
  entry.labeled_correct = route_is_correct(route);
  entry.checker_called = route_calls_checker(route);
  entry.elapsed_ms = elapsed_ms_since(start);
  state.metrics.log.push_back(std::move(entry));
}

std::vector<Program> parse_queue(const std::vector<Submission>& queue) {
  std::vector<Program> programs;
  programs.reserve(queue.size());
  for (const auto& sub : queue) programs.push_back(parse(sub.source));
  return programs;
}

void validate_atas_config(const AtasConfig& config) {
  if (config.seed_count < 1) throw std::invalid_argument("seed count must be at least 1");
  if (config.retrain_interval < 1)
    throw std::invalid_argument("retrain interval must be at least 1");
  if (config.max_fpr <= 0.0 || config.max_fpr >= 1.0)
    throw std::invalid_argument("max FPR must lie strictly between 0 and 1");
}

}  // namespace

const char* route_name(Route route) {
  switch (route) {
    case Route::ReplayFail: return "replay_fail";
    case Route::ClassifierAccept: return "classifier_accept";
    case Route::CheckerCorrect: return "checker_correct";
    case Route::CheckerIncorrect: return "checker_incorrect";
    case Route::CheckerUnknownAssumedCorrect: return "checker_unknown_assumed_correct";
  }
  return "unknown";
}

std::array<int, kRouteCount> MetricsCounters::route_counts() const {
  std::array<int, kRouteCount> counts{};
  for (const auto& entry : log) ++counts[static_cast<std::size_t>(entry.route)];
  return counts;
}

ReplayResult replay_failing_tests(const Program& program, const std::vector<StoredTest>& tests) {
  ReplayResult result;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    ++result.tests_run;
    if (!same_outcome(run_concrete(program, tests[i].test), tests[i].expected)) {
      result.failed_index = i;
      return result;
    }
  }
  return result;
}

Route label_with_checker(const std::string& id, const Program& program, const Program& reference,
                         const InputDomain& domain, const ExploreBudget& budget, bool post_seed,
                         JudgeState& state) {
  ++state.metrics.checker_calls_total;
  if (post_seed) ++state.metrics.checker_calls_post_seed;
  EquivVerdict verdict = check_equivalence(program, reference, domain, budget);
  switch (verdict.kind) {
    case EquivVerdict::Kind::Equivalent:
      state.accepted.insert(id);
      state.checker_accepted.insert(id);
      return Route::CheckerCorrect;
    case EquivVerdict::Kind::Counterexample: {
      state.rejected.insert(id);
      bool duplicate = false;
      for (const auto& stored : state.failing_tests)
        if (stored.test.values == verdict.test.values) {
          duplicate = true;
          break;
        }
      if (!duplicate) state.failing_tests.push_back({verdict.test, verdict.reference_out});
      return Route::CheckerIncorrect;
    }
    case EquivVerdict::Kind::Unknown:
      state.accepted.insert(id);
      state.checker_accepted.insert(id);
      ++state.metrics.unknown_verdicts;
      return Route::CheckerUnknownAssumedCorrect;
  }
  throw std::logic_error("unreachable");
}

JudgeState run_baseline(const std::vector<Submission>& queue, const Program& reference,
                        const InputDomain& domain, const ExploreBudget& budget,
                        int seed_boundary) {
  JudgeState state;
  std::vector<Program> programs = parse_queue(queue);
  auto run_start = std::chrono::steady_clock::now();
  for (std::size_t idx = 0; idx < queue.size(); ++idx) {
    auto start = std::chrono::steady_clock::now();
    bool post_seed = static_cast<int>(idx) >= seed_boundary;
    Route route = replay_then_check(queue[idx].id, programs[idx], reference, domain, budget,
                                    post_seed, state);
    push_log(state, queue[idx].id, route, start);
  }
  state.metrics.wall_clock_ms = elapsed_ms_since(run_start);
  return state;
}

JudgeState run_atas(const std::vector<Submission>& queue, const Program& reference,
                    const InputDomain& domain, const AtasConfig& config) {
  validate_atas_config(config);
  JudgeState state;
  std::vector<Program> programs = parse_queue(queue);
  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < queue.size(); ++i) index_of[queue[i].id] = i;

  bool gate_enabled = true;
  auto disable_gate = [&](const std::string& why) {
    if (!config.degrade_to_baseline) throw SeedTooSmall(why);
    gate_enabled = false;
    state.warnings.push_back(why + "; continuing with the checker for every submission");
  };

  if (static_cast<int>(queue.size()) <= config.seed_count)
    disable_gate("stream of " + std::to_string(queue.size()) +
                 " submissions does not extend past the seed of " +
                 std::to_string(config.seed_count));

  std::size_t seed_end = std::min<std::size_t>(static_cast<std::size_t>(config.seed_count),
                                               queue.size());
  RandomSource train_rng(config.rng_seed);
  auto run_start = std::chrono::steady_clock::now();

  for (std::size_t idx = 0; idx < seed_end; ++idx) {
    auto start = std::chrono::steady_clock::now();
    Route route =
        config.parallel_seed
            ? label_with_checker(queue[idx].id, programs[idx], reference, domain,
                                 config.check_budget, false, state)
            : replay_then_check(queue[idx].id, programs[idx], reference, domain,
                                config.check_budget, false, state);
    push_log(state, queue[idx].id, route, start);
  }

  std::vector<FeatureVector> encoded(queue.size());
  std::vector<bool> encoded_ready(queue.size(), false);
  auto features_of = [&](std::size_t idx) -> const FeatureVector& {
    if (!encoded_ready[idx]) {
      encoded[idx] = encode(programs[idx], *state.vocab);
      encoded_ready[idx] = true;
    }
    return encoded[idx];
  };

  auto refit = [&]() -> bool {
    std::vector<LabeledSample> correct, incorrect;
    for (const auto& id : state.checker_accepted)
      correct.push_back({features_of(index_of.at(id)), Label::Correct});
    for (const auto& id : state.rejected)
      incorrect.push_back({features_of(index_of.at(id)), Label::Incorrect});
    try {
      state.model = train_and_get_thresh(config.classifier, config.max_fpr, correct, incorrect,
                                         train_rng.next_u64());
      return true;
    } catch (const InsufficientData&) {
      return false;
    }
  };

  if (gate_enabled) {
    try {
      std::vector<Program> seed_programs(programs.begin(),
                                         programs.begin() + static_cast<std::ptrdiff_t>(seed_end));
      state.vocab = build_vocab(seed_programs, config.ngram);
    } catch (const EmptyVocab&) {
      disable_gate("seed programs yield no features");
    }
  }
  if (gate_enabled && !refit())
    disable_gate("seed produced a single class, classifier cannot be trained");

  int retrain_phase = 0;
  for (std::size_t idx = seed_end; idx < queue.size(); ++idx) {
    const std::string& id = queue[idx].id;
    auto start = std::chrono::steady_clock::now();
    bool model_ready = gate_enabled && state.model.has_value();
    std::optional<double> prob;
    auto predict = [&]() {
      if (!prob.has_value()) prob = state.model->model.predict_probability(features_of(idx));
      return *prob;
    };
    // Instrumentation only: the prediction on every 10th post-seed submission
    // is recorded whatever route the submission takes.
    std::size_t post_seed_ordinal = idx - seed_end + 1;
    if (config.holdout && model_ready && post_seed_ordinal % 10 == 0)
      state.holdout.push_back({id, retrain_phase, predict(), predict() >= state.model->thresh});

    Route route;
    ReplayResult replay = replay_failing_tests(programs[idx], state.failing_tests);
    state.metrics.tests_replayed += replay.tests_run;
    if (replay.failed_index.has_value()) {
      state.rejected.insert(id);
      route = Route::ReplayFail;
    } else if (!model_ready) {
      route = label_with_checker(id, programs[idx], reference, domain, config.check_budget, true,
                                 state);
    } else if (predict() >= state.model->thresh) {
      state.accepted.insert(id);
      route = Route::ClassifierAccept;
    } else {
      route = label_with_checker(id, programs[idx], reference, domain, config.check_budget, true,
                                 state);
    }
    push_log(state, id, route, start);

    if (gate_enabled && config.retrain && state.model.has_value()) {
      std::size_t labeled = state.accepted.size() + state.rejected.size();
      if (labeled > seed_end &&
          (labeled - seed_end) % static_cast<std::size_t>(config.retrain_interval) == 0) {
        if (refit()) ++retrain_phase;
        else
          state.warnings.push_back("refit after " + std::to_string(labeled) +
                                   " labels failed, keeping the previous model");
      }
    }
  }
  state.metrics.wall_clock_ms = elapsed_ms_since(run_start);
  return state;
}

ErrorReport evaluate_against_oracle(const JudgeState& state,
                                    const std::map<std::string, bool>& oracle_correct) {
  ErrorReport report;
  for (const auto& entry : state.metrics.log) {
    auto it = oracle_correct.find(entry.id);
    if (it == oracle_correct.end())
      throw MissingOracleLabel("no ground-truth label for submission '" + entry.id + "'");
    bool truth = it->second;
    auto route_idx = static_cast<std::size_t>(entry.route);
    ++report.route_totals[route_idx];
    if (truth) ++report.oracle_correct_total;
    else ++report.oracle_incorrect_total;
    if (entry.labeled_correct && !truth) {
      ++report.accepted_incorrect;
      ++report.route_errors[route_idx];
    }
    if (!entry.labeled_correct && truth) ++report.rejected_correct;
  }
  report.empty_denominator = report.oracle_incorrect_total == 0;
  return report;
}

}  // namespace minijudge
