// End-to-end acceptance gate. Each criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "minijudge/corpus.hpp"
#include "minijudge/pipeline.hpp"
#include "minijudge/report.hpp"

namespace fs = std::filesystem;
using namespace minijudge;

namespace {

int failures = 0;

void report_line(int num, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << num << ": " << name;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

struct Task {
  const char* spec_text;
  const char* reference;
  bool loop_free;
  std::uint64_t gen_seed;
};

const Task kTasks[] = {
    {"name square\ninput n 1 200\noutput int\n", "read(n);\nprint(n * n);\n", true, 101},
    {"name absdiff\ninput a 0 60\ninput b 0 60\noutput int\n",
     "read(a);\nread(b);\nif (a > b) { print(a - b); } else { print(b - a); }\n", true, 102},
    {"name maxscale\ninput x -40 40\ninput y -40 40\noutput int\n",
     "read(x);\nread(y);\nvar m = y;\nif (x > y) { m = x; }\nif (m < 0) { print(0 - m); } else "
     "{ print(m * 2); }\n",
     true, 103},
    {"name remmix\ninput n 1 5000\noutput int\n",
     "read(n);\nvar q = n / 9;\nvar r = n % 7;\nprint(r * 3 + q);\n", true, 104},
    {"name sumto\ninput n 1 60\noutput int\n",
     "read(n);\nvar s = 0;\nvar i = 1;\nwhile (i <= n) { s = s + i; i = i + 1; }\nprint(s);\n",
     false, 105},
};

struct TaskRun {
  ProblemSpec spec;
  std::vector<Submission> subs;
  std::map<std::string, bool> oracle;
  bool loop_free = false;
};

std::vector<TaskRun> generate_tasks() {
  std::vector<TaskRun> out;
  GenerationProfile profile;
  profile.count = 100;
  profile.correct_fraction = 0.6;
  profile.clusters = 5;
  for (const Task& t : kTasks) {
    TaskRun run;
    run.spec = parse_problem_spec(t.spec_text, t.reference);
    run.subs = generate_corpus(run.spec, profile, t.gen_seed);
    run.loop_free = t.loop_free;
    OracleTable table(run.spec);
    for (const auto& sub : run.subs) run.oracle[sub.id] = table.label(parse(sub.source)).correct;
    out.push_back(std::move(run));
  }
  return out;
}

// Criteria 1 and 2: direct checker soundness per submission, then whole-run
// baseline completeness on the corpora the checker decides fully.
void criteria_checker(const std::vector<TaskRun>& tasks) {
  int total = 0, unknown = 0, decided = 0, agree = 0, cex = 0, cex_valid = 0;
  bool domains_ok = true;
  for (const auto& run : tasks) {
    domains_ok = domains_ok && run.spec.domain.size_capped() <= 10'000;
    for (const auto& sub : run.subs) {
      ++total;
      Program p = parse(sub.source);
      EquivVerdict v = check_equivalence(p, run.spec.reference, run.spec.domain, ExploreBudget{});
      bool truth = run.oracle.at(sub.id);
      if (v.kind == EquivVerdict::Kind::Unknown) {
        ++unknown;
        continue;
      }
      ++decided;
      bool says_correct = v.kind == EquivVerdict::Kind::Equivalent;
      if (says_correct == truth) ++agree;
      if (v.kind == EquivVerdict::Kind::Counterexample) {
        ++cex;
        if (validate_counterexample(p, run.spec.reference, v.test)) ++cex_valid;
      }
    }
  }
  double unknown_rate = total == 0 ? 1.0 : static_cast<double>(unknown) / total;
  bool ok = total >= 200 && std::size(kTasks) >= 4 && domains_ok && agree == decided &&
            unknown_rate <= 0.05 && cex_valid == cex;
  std::ostringstream d;
  d << total << " submissions over " << std::size(kTasks) << " tasks, " << agree << "/" << decided
    << " decided verdicts agree with ground truth, " << unknown << " inconclusive ("
    << unknown_rate * 100 << "%), " << cex_valid << "/" << cex << " counterexamples validate";
  report_line(1, "equivalence checker soundness", ok, d.str());

  int eligible = 0, exact = 0;
  for (const auto& run : tasks) {
    if (!run.loop_free) continue;
    JudgeState s =
        run_baseline(run.subs, run.spec.reference, run.spec.domain, ExploreBudget{});
    if (s.metrics.unknown_verdicts != 0) continue;
    ++eligible;
    std::set<std::string> truly_correct, truly_wrong;
    for (const auto& [id, correct] : run.oracle)
      (correct ? truly_correct : truly_wrong).insert(id);
    if (s.accepted == truly_correct && s.rejected == truly_wrong) ++exact;
  }
  bool ok2 = eligible >= 4 && exact == eligible;
  std::ostringstream d2;
  d2 << exact << "/" << eligible << " fully-decided corpora partitioned exactly like the oracle";
  report_line(2, "baseline completeness", ok2, d2.str());
}

void criterion_walkthrough() {
  Program square = parse("read(inp);\nprint(inp * inp);\n");
  Program cube = parse("read(x);\nvar ans = x * x * x;\nprint(ans);\n");
  EquivVerdict v = check_equivalence(cube, square, InputDomain{{{1, 1000}}}, ExploreBudget{});
  bool cex_ok = v.kind == EquivVerdict::Kind::Counterexample && v.test.values.size() == 1 &&
                v.test.values[0] == 2;
  ExecutionResult cand = run_concrete(cube, v.test);
  ExecutionResult ref = run_concrete(square, v.test);
  bool replay_ok = cex_ok && !same_outcome(cand, ref) && cand.int_value == 8 &&
                   ref.int_value == 4;

  Submission first{"cube1", 0, "read(x);\nvar ans = x * x * x;\nprint(ans);\n", std::nullopt};
  Submission second{"cube2", 1, "read(m);\nvar r = m * m * m;\nprint(r);\n", std::nullopt};
  JudgeState s =
      run_baseline({first, second}, square, InputDomain{{{1, 1000}}}, ExploreBudget{});
  bool routed_ok = s.metrics.checker_calls_total == 1 && s.failing_tests.size() == 1 &&
                   s.metrics.log.size() == 2 && s.metrics.log[1].route == Route::ReplayFail;

  std::ostringstream d;
  d << "counterexample n=2 gives 8 vs 4, second cube routed by replay with "
    << s.metrics.checker_calls_total << " checker call";
  report_line(3, "counterexample walkthrough and replay short-circuit", replay_ok && routed_ok,
              d.str());
}

struct StreamFixture {
  ProblemSpec spec;
  std::vector<Submission> subs;
  std::map<std::string, bool> oracle;
};

StreamFixture stream_500() {
  StreamFixture f;
  f.spec = parse_problem_spec(kTasks[1].spec_text, kTasks[1].reference);
  GenerationProfile profile;
  profile.count = 500;
  profile.correct_fraction = 0.6;
  profile.clusters = 5;
  f.subs = generate_corpus(f.spec, profile, 11);
  OracleTable table(f.spec);
  for (const auto& sub : f.subs) f.oracle[sub.id] = table.label(parse(sub.source)).correct;
  return f;
}

void criterion_call_reduction(const StreamFixture& f) {
  JudgeState base = run_baseline(f.subs, f.spec.reference, f.spec.domain, ExploreBudget{}, 50);
  AtasConfig config;
  config.seed_count = 50;
  config.retrain_interval = 50;
  config.max_fpr = 0.3;
  config.classifier = ModelConfig::make_gbt(7, 100);
  JudgeState gated = run_atas(f.subs, f.spec.reference, f.spec.domain, config);
  ErrorReport err = evaluate_against_oracle(gated, f.oracle);

  bool ok = base.metrics.checker_calls_post_seed > 0 &&
            gated.metrics.checker_calls_post_seed * 2 <= base.metrics.checker_calls_post_seed &&
            err.oracle_incorrect_total > 0 &&
            err.accepted_incorrect * 50 <= err.oracle_incorrect_total;
  std::ostringstream d;
  d << "post-seed checker calls " << base.metrics.checker_calls_post_seed << " -> "
    << gated.metrics.checker_calls_post_seed << ", " << err.accepted_incorrect << "/"
    << err.oracle_incorrect_total << " incorrect accepted";
  report_line(4, "gated pipeline call reduction at bounded error", ok, d.str());
}

void criterion_fpr_tradeoff(const StreamFixture& f) {
  std::vector<int> calls, errors;
  for (double fpr : {0.1, 0.3, 0.5}) {
    AtasConfig config;
    config.seed_count = 50;
    config.retrain_interval = 50;
    config.max_fpr = fpr;
    config.classifier = ModelConfig::make_gbt(7, 100);
    config.retrain = false;
    config.rng_seed = 1;
    JudgeState s = run_atas(f.subs, f.spec.reference, f.spec.domain, config);
    calls.push_back(s.metrics.checker_calls_post_seed);
    errors.push_back(evaluate_against_oracle(s, f.oracle).accepted_incorrect);
  }
  bool ok = calls[0] >= calls[1] && calls[1] >= calls[2] && errors[0] <= errors[1] &&
            errors[1] <= errors[2];
  std::ostringstream d;
  d << "post-seed calls {" << calls[0] << "," << calls[1] << "," << calls[2] << "}, errors {"
    << errors[0] << "," << errors[1] << "," << errors[2] << "} over budgets {0.1,0.3,0.5}";
  report_line(5, "budget trade-off is monotone", ok, d.str());
}

std::vector<LabeledSample> synth_class(RandomSource& rng, int count, bool correct, bool noisy) {
  std::vector<LabeledSample> out;
  for (int i = 0; i < count; ++i) {
    bool label_bit = correct;
    if (noisy && rng.below(5) == 0) label_bit = !label_bit;
    FeatureVector fv(8, 0);
    fv[0] = label_bit ? 1 : 0;
    for (std::size_t j = 1; j < fv.size(); ++j) fv[j] = rng.below(2) ? 1 : 0;
    out.push_back({fv, correct ? Label::Correct : Label::Incorrect});
  }
  return out;
}

void criterion_calibration() {
  int runs = 0, fpr_ok = 0, monotone_ok = 0;
  for (int run = 0; run < 100; ++run) {
    RandomSource rng(5000 + static_cast<std::uint64_t>(run));
    bool noisy = run >= 50;
    auto correct = synth_class(rng, 24, true, noisy);
    auto incorrect = synth_class(rng, 24, false, noisy);
    ModelConfig config = run % 3 == 0   ? ModelConfig::make_knn(3)
                         : run % 3 == 1 ? ModelConfig::make_tree(5)
                                        : ModelConfig::make_gbt(3, 20);
    std::uint64_t seed = rng.next_u64();
    std::vector<double> threshes;
    bool run_fpr_ok = true;
    for (double fpr : {0.1, 0.3, 0.5}) {
      CalibratedModel cm = train_and_get_thresh(config, fpr, correct, incorrect, seed);
      if (cm.thresh <= 1.0 && cm.calibration_fpr >= fpr) run_fpr_ok = false;
      threshes.push_back(cm.thresh);
    }
    ++runs;
    if (run_fpr_ok) ++fpr_ok;
    if (threshes[0] >= threshes[1] && threshes[1] >= threshes[2]) ++monotone_ok;
  }
  bool ok = runs == 100 && fpr_ok == 100 && monotone_ok == 100;
  std::ostringstream d;
  d << fpr_ok << "/100 runs kept validation FPR under budget, " << monotone_ok
    << "/100 had non-increasing thresholds";
  report_line(6, "threshold calibration contract", ok, d.str());
}

void criterion_features() {
  auto gram_of = [](const std::string& s) {
    NGram g;
    for (char c : s) g.emplace_back(1, c);
    return g;
  };
  auto chars = [](const std::string& s) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < s.size(); ++i)
      out.push_back({TokenKind::Operator, std::string(1, s[i]), 1, static_cast<int>(i + 1)});
    return out;
  };
  FeatureVocab vocab;
  vocab.n = 3;
  for (const auto& g : {gram_of("abc"), gram_of("bcd"), gram_of("cde")}) {
    vocab.index[g] = vocab.grams.size();
    vocab.grams.push_back(g);
  }
  FeatureVector bits = encode_sequence(chars("abcd"), vocab);
  bool example_ok = bits == FeatureVector{1, 1, 0};

  Program p = parse(kTasks[2].reference);
  FeatureVocab pv = build_vocab({p}, 3);
  FeatureVector base = encode(p, pv);
  RandomSource rng(77);
  int invariant = 0;
  for (int i = 0; i < 100; ++i)
    if (encode(mutate_rename(p, rng), pv) == base) ++invariant;

  std::ostringstream d;
  d << "abcd encodes to (1,1,0): " << (example_ok ? "yes" : "no") << ", " << invariant
    << "/100 renamings encode unchanged";
  report_line(7, "feature extraction fidelity", example_ok && invariant == 100, d.str());
}

void criterion_classifiers() {
  RandomSource rng(9001);
  auto correct = synth_class(rng, 30, true, true);
  auto incorrect = synth_class(rng, 30, false, true);
  std::vector<LabeledSample> all;
  all.insert(all.end(), correct.begin(), correct.end());
  all.insert(all.end(), incorrect.begin(), incorrect.end());
  Model gbt = train_model(ModelConfig::make_gbt(7, 100), all, 12345);
  const auto& trace = gbt.training_loss_trace();
  bool gbt_ok = trace.size() == 101;
  for (std::size_t i = 0; gbt_ok && i + 1 < trace.size(); ++i)
    if (trace[i + 1] > trace[i] + 1e-12) gbt_ok = false;

  // Ten points where sample i has its first i coordinates set; distances from
  // the all-zero and all-one queries are i and 10-i, so the six nearest are
  // enumerable by hand.
  std::vector<LabeledSample> ladder;
  for (int i = 0; i < 10; ++i) {
    FeatureVector fv(10, 0);
    for (int j = 0; j < i; ++j) fv[static_cast<std::size_t>(j)] = 1;
    ladder.push_back({fv, i < 5 ? Label::Correct : Label::Incorrect});
  }
  Model knn = train_model(ModelConfig::make_knn(6), ladder, 1);
  double p_zeros = knn.predict_probability(FeatureVector(10, 0));  // neighbors 0..5
  double p_ones = knn.predict_probability(FeatureVector(10, 1));   // neighbors 9..4
  bool knn_ok = p_zeros == 5.0 / 6.0 && p_ones == 1.0 / 6.0;

  std::ostringstream d;
  d << "boosting loss trace of " << trace.size() << " non-increasing: " << (gbt_ok ? "yes" : "no")
    << ", knn neighbor fractions " << p_zeros << " and " << p_ones << " match 5/6 and 1/6";
  report_line(8, "classifier sanity", gbt_ok && knn_ok, d.str());
}

void criterion_determinism(const fs::path& scratch) {
#ifndef MINIJUDGE_BIN
  report_line(9, "command-line determinism", false, "tool path not configured");
#else
  ProblemSpec spec = parse_problem_spec(kTasks[1].spec_text, kTasks[1].reference);
  GenerationProfile profile;
  profile.count = 120;
  profile.correct_fraction = 0.6;
  profile.clusters = 4;
  fs::path corpus = scratch / "corpus";
  write_corpus(corpus, spec, generate_corpus(spec, profile, 33));

  auto run_once = [&](const fs::path& out) {
    std::string cmd = std::string(MINIJUDGE_BIN) + " compare " + corpus.string() +
                      " --seed-count 30 --retrain 30 --classifier gbt --rng-seed 7 --out " +
                      out.string() + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  fs::path out1 = scratch / "r1.json";
  fs::path out2 = scratch / "r2.json";
  bool ran = run_once(out1) && run_once(out2);

  std::string s1, s2;
  if (ran) {
    auto slurp_strip = [](const fs::path& p) {
      std::ifstream in(p);
      nlohmann::json j = nlohmann::json::parse(in);
      return strip_timing_fields(j).dump(2);
    };
    s1 = slurp_strip(out1);
    s2 = slurp_strip(out2);
  }
  bool ok = ran && !s1.empty() && s1 == s2;
  std::ostringstream d;
  d << "two identical invocations, " << (ok ? "reports match byte-for-byte" : "reports differ")
    << " outside timing fields";
  report_line(9, "command-line determinism", ok, d.str());
#endif
}

}  // namespace

int main() {
  fs::path scratch =
      fs::temp_directory_path() / ("minijudge_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  try {
    auto tasks = generate_tasks();
    criteria_checker(tasks);
    criterion_walkthrough();
    StreamFixture stream = stream_500();
    criterion_call_reduction(stream);
    criterion_fpr_tradeoff(stream);
    criterion_calibration();
    criterion_features();
    criterion_classifiers();
    criterion_determinism(scratch);
  } catch (const std::exception& e) {
    std::cout << "FAIL: unexpected exception: " << e.what() << "\n";
    ++failures;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  return failures;
}
