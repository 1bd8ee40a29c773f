#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minijudge/corpus.hpp"
#include "minijudge/pipeline.hpp"
#include "minijudge/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace minijudge;

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitSeedTooSmall = 3;
constexpr int kExitCorpus = 4;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct GenerateArgs {
  std::string spec_dir;
  std::string out_dir;
  int count = 100;
  double correct_fraction = 0.6;
  int clusters = 5;
  std::vector<double> decile;
  std::vector<double> bug_weights;
  std::uint64_t seed = 1;
};

struct JudgeArgs {
  std::string corpus_dir;
  std::string mode = "baseline";
  int seed_count = 50;
  int retrain_interval = 50;
  double max_fpr = 0.3;
  std::string classifier = "gbt";
  int ngram = 3;
  int knn_k = 6;
  int tree_trials = 10;
  int gbt_depth = 7;
  int gbt_rounds = 100;
  double gbt_learning_rate = 0.1;
  std::int64_t check_timeout_ms = 15000;
  int max_paths = 256;
  int max_unroll = 64;
  std::uint64_t solver_cap = 1'000'000;
  std::uint64_t rng_seed = 1;
  std::uint64_t oracle_cap = 1'000'000;
  bool holdout = false;
  bool degrade = false;
  bool no_retrain = false;
  bool parallel_seed = false;
  bool skip_oracle = false;
  std::string out_path;
  std::string log_path;          // judge mode
  std::string baseline_log_path; // compare mode
  std::string atas_log_path;     // compare mode
};

void add_judge_options(CLI::App* cmd, JudgeArgs& args, bool with_mode) {
  cmd->add_option("corpus", args.corpus_dir, "Corpus directory")->required();
  if (with_mode)
    cmd->add_option("--mode", args.mode, "Pipeline to run")
        ->check(CLI::IsMember({"baseline", "atas"}))
        ->capture_default_str();
  cmd->add_option("--seed-count", args.seed_count, "Submissions labeled by the checker up front")
      ->capture_default_str();
  cmd->add_option("--retrain", args.retrain_interval, "Labeled submissions between refits")
      ->capture_default_str();
  cmd->add_option("--max-fpr", args.max_fpr, "False-positive budget for threshold calibration")
      ->capture_default_str();
  cmd->add_option("--classifier", args.classifier, "Classifier family")
      ->check(CLI::IsMember({"knn", "tree", "gbt"}))
      ->capture_default_str();
  cmd->add_option("--ngram", args.ngram, "Token n-gram length")->capture_default_str();
  cmd->add_option("--knn-k", args.knn_k, "Neighbors for knn")->capture_default_str();
  cmd->add_option("--tree-trials", args.tree_trials, "Random search trials for tree")
      ->capture_default_str();
  cmd->add_option("--gbt-depth", args.gbt_depth, "Max tree depth for gbt")->capture_default_str();
  cmd->add_option("--gbt-rounds", args.gbt_rounds, "Boosting rounds for gbt")
      ->capture_default_str();
  cmd->add_option("--gbt-learning-rate", args.gbt_learning_rate, "Shrinkage for gbt")
      ->capture_default_str();
  cmd->add_option("--check-timeout-ms", args.check_timeout_ms, "Wall-clock budget per check")
      ->capture_default_str();
  cmd->add_option("--max-paths", args.max_paths, "Path budget per check")->capture_default_str();
  cmd->add_option("--max-unroll", args.max_unroll, "Loop unroll bound per check")
      ->capture_default_str();
  cmd->add_option("--solver-cap", args.solver_cap, "Constraint enumeration cap")
      ->capture_default_str();
  cmd->add_option("--rng-seed", args.rng_seed, "Seed for training splits and refits")
      ->capture_default_str();
  cmd->add_option("--oracle-cap", args.oracle_cap, "Domain cap for ground-truth evaluation")
      ->capture_default_str();
  cmd->add_flag("--holdout", args.holdout,
                "Record predictions on every 10th post-seed submission");
  cmd->add_flag("--degrade", args.degrade,
                "Fall back to checker-only instead of failing on an untrainable seed");
  cmd->add_flag("--no-retrain", args.no_retrain, "Freeze the seed model");
  cmd->add_flag("--parallel-seed", args.parallel_seed,
                "Label every seed submission with the checker, skipping replay");
  cmd->add_flag("--skip-oracle", args.skip_oracle, "Skip ground-truth evaluation");
  cmd->add_option("--out", args.out_path, "Write the JSON report here");
}

ExploreBudget budget_from(const JudgeArgs& args) {
  ExploreBudget b;
  b.max_paths = args.max_paths;
  b.max_unroll = args.max_unroll;
  b.wall_clock_ms = args.check_timeout_ms;
  b.solver_cap = args.solver_cap;
  return b;
}

ModelConfig classifier_from(const JudgeArgs& args) {
  if (args.classifier == "knn") return ModelConfig::make_knn(args.knn_k);
  if (args.classifier == "tree") return ModelConfig::make_tree(args.tree_trials);
  return ModelConfig::make_gbt(args.gbt_depth, args.gbt_rounds, args.gbt_learning_rate);
}

AtasConfig atas_config_from(const JudgeArgs& args) {
  AtasConfig c;
  c.seed_count = args.seed_count;
  c.retrain_interval = args.retrain_interval;
  c.max_fpr = args.max_fpr;
  c.ngram = args.ngram;
  c.classifier = classifier_from(args);
  c.check_budget = budget_from(args);
  c.rng_seed = args.rng_seed;
  c.retrain = !args.no_retrain;
  c.degrade_to_baseline = args.degrade;
  c.holdout = args.holdout;
  c.parallel_seed = args.parallel_seed;
  return c;
}

json config_echo(const JudgeArgs& args, const std::string& mode, const LoadedCorpus& corpus) {
  json out;
  out["mode"] = mode;
  out["corpus"] = args.corpus_dir;
  out["problem"] = corpus.spec.name;
  out["submissions_loaded"] = static_cast<int>(corpus.submissions.size());
  out["submissions_pruned"] = static_cast<int>(corpus.pruned.size());
  out["seed_count"] = args.seed_count;
  out["retrain_interval"] = args.retrain_interval;
  out["retrain"] = !args.no_retrain;
  out["max_fpr"] = args.max_fpr;
  out["classifier"] = args.classifier;
  out["ngram"] = args.ngram;
  out["knn_k"] = args.knn_k;
  out["tree_trials"] = args.tree_trials;
  out["gbt_depth"] = args.gbt_depth;
  out["gbt_rounds"] = args.gbt_rounds;
  out["gbt_learning_rate"] = args.gbt_learning_rate;
  out["check_timeout_ms"] = args.check_timeout_ms;
  out["max_paths"] = args.max_paths;
  out["max_unroll"] = args.max_unroll;
  out["solver_cap"] = args.solver_cap;
  out["rng_seed"] = args.rng_seed;
  out["holdout"] = args.holdout;
  out["degrade"] = args.degrade;
  out["parallel_seed"] = args.parallel_seed;
  return out;
}

// Ground truth for every loaded submission, or nothing when the domain is too
// large to sweep (reported as a warning, not an error).
std::optional<std::map<std::string, bool>> oracle_labels(const LoadedCorpus& corpus,
                                                         const JudgeArgs& args) {
  if (args.skip_oracle) return std::nullopt;
  try {
    OracleTable table(corpus.spec, args.oracle_cap);
    std::map<std::string, bool> labels;
    for (const auto& sub : corpus.submissions)
      labels[sub.id] = table.label(parse(sub.source)).correct;
    return labels;
  } catch (const DomainTooLarge& e) {
    std::cerr << "note: skipping ground-truth evaluation: " << e.what() << "\n";
    return std::nullopt;
  }
}

void emit(const json& report, const JudgeArgs& args) {
  std::cout << render_report_text(report);
  if (!args.out_path.empty()) spill(args.out_path, report.dump(2) + "\n");
}

int cmd_generate(const GenerateArgs& args) {
  fs::path spec_dir(args.spec_dir);
  ProblemSpec spec =
      parse_problem_spec(slurp(spec_dir / "problem.spec"), slurp(spec_dir / "reference.mc"));
  GenerationProfile profile;
  profile.count = args.count;
  profile.correct_fraction = args.correct_fraction;
  profile.clusters = args.clusters;
  profile.decile_correct_fraction = args.decile;
  profile.bug_weights = args.bug_weights;
  std::vector<Submission> submissions = generate_corpus(spec, profile, args.seed);
  write_corpus(args.out_dir, spec, submissions);
  std::cout << "wrote " << submissions.size() << " submissions to " << args.out_dir << "\n";
  return 0;
}

int cmd_judge(const JudgeArgs& args) {
  LoadedCorpus corpus = load_corpus(args.corpus_dir);
  auto oracle = oracle_labels(corpus, args);
  const auto* oracle_ptr = oracle.has_value() ? &*oracle : nullptr;

  JudgeState state;
  if (args.mode == "baseline") {
    state = run_baseline(corpus.submissions, corpus.spec.reference, corpus.spec.domain,
                         budget_from(args), args.seed_count);
  } else {
    state = run_atas(corpus.submissions, corpus.spec.reference, corpus.spec.domain,
                     atas_config_from(args));
  }
  json report = judge_report(args.mode, config_echo(args, args.mode, corpus), state, oracle_ptr);
  emit(report, args);
  if (!args.log_path.empty()) spill(args.log_path, render_run_log(state.metrics));
  return 0;
}

int cmd_compare(const JudgeArgs& args) {
  LoadedCorpus corpus = load_corpus(args.corpus_dir);
  auto oracle = oracle_labels(corpus, args);
  const auto* oracle_ptr = oracle.has_value() ? &*oracle : nullptr;

  JudgeState base = run_baseline(corpus.submissions, corpus.spec.reference, corpus.spec.domain,
                                 budget_from(args), args.seed_count);
  JudgeState gated = run_atas(corpus.submissions, corpus.spec.reference, corpus.spec.domain,
                              atas_config_from(args));
  json report = compare_report(config_echo(args, "compare", corpus), base, gated, oracle_ptr);
  emit(report, args);
  if (!args.baseline_log_path.empty())
    spill(args.baseline_log_path, render_run_log(base.metrics));
  if (!args.atas_log_path.empty()) spill(args.atas_log_path, render_run_log(gated.metrics));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grades program submissions against a reference implementation"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "Synthesize a submission corpus");
  gen->add_option("spec", gen_args.spec_dir,
                  "Directory holding problem.spec and reference.mc")
      ->required();
  gen->add_option("out", gen_args.out_dir, "Corpus directory to create")->required();
  gen->add_option("--count", gen_args.count, "Submissions to generate")->capture_default_str();
  gen->add_option("--correct-fraction", gen_args.correct_fraction,
                  "Fraction of intended-correct submissions")
      ->capture_default_str();
  gen->add_option("--clusters", gen_args.clusters, "Strategy clusters among correct submissions")
      ->capture_default_str();
  gen->add_option("--decile", gen_args.decile,
                  "Ten per-decile correct fractions, overriding --correct-fraction")
      ->delimiter(',')
      ->expected(0, 10);
  gen->add_option("--bug-weights", gen_args.bug_weights,
                  "Weights over the bug catalog for incorrect submissions")
      ->delimiter(',');
  gen->add_option("--seed", gen_args.seed, "Generation seed")->capture_default_str();

  JudgeArgs judge_args;
  CLI::App* judge = app.add_subcommand("judge", "Run one pipeline over a corpus");
  add_judge_options(judge, judge_args, true);
  judge->add_option("--log", judge_args.log_path, "Write the per-submission run log here");

  JudgeArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "Run both pipelines on one stream and compare");
  add_judge_options(compare, compare_args, false);
  compare->add_option("--baseline-log", compare_args.baseline_log_path,
                      "Write the baseline run log here");
  compare->add_option("--atas-log", compare_args.atas_log_path, "Write the gated run log here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (judge->parsed()) return cmd_judge(judge_args);
    return cmd_compare(compare_args);
  } catch (const ProfileInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SeedTooSmall& e) {
    std::cerr << "error: " << e.what() << " (pass --degrade to continue checker-only)\n";
    return kExitSeedTooSmall;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCorpus;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
