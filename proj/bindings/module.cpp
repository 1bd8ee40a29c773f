#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minijudge/corpus.hpp"
#include "minijudge/pipeline.hpp"
#include "minijudge/report.hpp"

namespace py = pybind11;
using namespace minijudge;

namespace {

using Bounds = std::vector<std::pair<std::int64_t, std::int64_t>>;
using IdSource = std::vector<std::pair<std::string, std::string>>;

InputDomain domain_from(const Bounds& bounds) {
  InputDomain d;
  for (const auto& [lo, hi] : bounds) d.bounds.push_back({lo, hi});
  return d;
}

ExploreBudget budget_from(int max_paths, int max_unroll, std::int64_t wall_clock_ms,
                          std::uint64_t solver_cap) {
  ExploreBudget b;
  b.max_paths = max_paths;
  b.max_unroll = max_unroll;
  b.wall_clock_ms = wall_clock_ms;
  b.solver_cap = solver_cap;
  return b;
}

py::dict outcome_dict(const ExecutionResult& r) {
  py::dict out;
  switch (r.kind) {
    case ExecutionResult::Kind::IntOutput:
      out["kind"] = "int";
      out["value"] = r.int_value;
      break;
    case ExecutionResult::Kind::StrOutput:
      out["kind"] = "str";
      out["value"] = r.str_value;
      break;
    case ExecutionResult::Kind::RuntimeError:
      out["kind"] = "error";
      out["value"] = runtime_error_name(r.error);
      break;
    case ExecutionResult::Kind::FuelExhausted:
      out["kind"] = "fuel_exhausted";
      out["value"] = py::none();
      break;
  }
  out["text"] = outcome_to_string(r);
  return out;
}

const char* reason_name(EquivVerdict::UnknownReason reason) {
  switch (reason) {
    case EquivVerdict::UnknownReason::Timeout: return "timeout";
    case EquivVerdict::UnknownReason::PathBudget: return "path_budget";
    case EquivVerdict::UnknownReason::UnrollBound: return "unroll_bound";
    case EquivVerdict::UnknownReason::SolverCap: return "solver_cap";
  }
  return "unknown";
}

std::vector<Submission> submissions_from(const IdSource& pairs) {
  std::vector<Submission> subs;
  std::int64_t ts = 0;
  for (const auto& [id, source] : pairs) {
    Submission s;
    s.id = id;
    s.timestamp = ts++;
    s.source = source;
    subs.push_back(std::move(s));
  }
  return subs;
}

std::optional<std::map<std::string, bool>> maybe_oracle(const ProblemSpec& spec,
                                                        const std::vector<Submission>& subs,
                                                        bool with_oracle, std::uint64_t cap) {
  if (!with_oracle) return std::nullopt;
  OracleTable table(spec, cap);
  std::map<std::string, bool> labels;
  for (const auto& sub : subs) labels[sub.id] = table.label(parse(sub.source)).correct;
  return labels;
}

ModelConfig classifier_config(const std::string& family, int knn_k, int tree_trials,
                              int gbt_depth, int gbt_rounds, double learning_rate) {
  if (family == "knn") return ModelConfig::make_knn(knn_k);
  if (family == "tree") return ModelConfig::make_tree(tree_trials);
  if (family == "gbt") return ModelConfig::make_gbt(gbt_depth, gbt_rounds, learning_rate);
  throw std::invalid_argument("unknown classifier family: " + family);
}

std::vector<LabeledSample> samples_from(const std::vector<std::vector<int>>& rows, Label label) {
  std::vector<LabeledSample> out;
  for (const auto& row : rows) {
    LabeledSample s;
    s.label = label;
    for (int bit : row) s.features.push_back(bit ? 1 : 0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reference-based grading of small programs: concrete execution, "
            "equivalence checking, corpus synthesis, and the judging pipelines.";

  py::register_exception<ParseError>(m, "SourceParseError", PyExc_ValueError);
  py::register_exception<ProfileInfeasible>(m, "ProfileInfeasibleError", PyExc_ValueError);
  py::register_exception<CorpusError>(m, "CorpusFormatError", PyExc_ValueError);
  py::register_exception<SeedTooSmall>(m, "SeedTooSmallError", PyExc_RuntimeError);
  py::register_exception<InsufficientData>(m, "InsufficientDataError", PyExc_RuntimeError);

  m.def(
      "run_program",
      [](const std::string& source, const std::vector<std::int64_t>& inputs,
         std::uint64_t fuel) { return outcome_dict(run_concrete(parse(source), {inputs}, fuel)); },
      py::arg("source"), py::arg("inputs"), py::arg("fuel") = kDefaultFuel,
      "Runs one program on concrete inputs and returns its outcome.");

  m.def(
      "check_equivalence",
      [](const std::string& candidate, const std::string& reference, const Bounds& bounds,
         int max_paths, int max_unroll, std::int64_t wall_clock_ms, std::uint64_t solver_cap) {
        EquivVerdict v =
            minijudge::check_equivalence(parse(candidate), parse(reference), domain_from(bounds),
                                         budget_from(max_paths, max_unroll, wall_clock_ms,
                                                     solver_cap));
        py::dict out;
        switch (v.kind) {
          case EquivVerdict::Kind::Equivalent:
            out["verdict"] = "equivalent";
            break;
          case EquivVerdict::Kind::Counterexample:
            out["verdict"] = "counterexample";
            out["test"] = v.test.values;
            out["candidate_out"] = outcome_dict(v.candidate_out);
            out["reference_out"] = outcome_dict(v.reference_out);
            break;
          case EquivVerdict::Kind::Unknown:
            out["verdict"] = "unknown";
            out["reason"] = reason_name(v.reason);
            break;
        }
        return out;
      },
      py::arg("candidate"), py::arg("reference"), py::arg("bounds"), py::arg("max_paths") = 256,
      py::arg("max_unroll") = 64, py::arg("wall_clock_ms") = 15000,
      py::arg("solver_cap") = 1'000'000,
      "Decides whether two programs agree on every input in the domain; a "
      "counterexample carries the least distinguishing input.");

  m.def(
      "oracle_label",
      [](const std::string& spec_text, const std::string& reference,
         const std::string& submission, std::uint64_t cap) {
        ProblemSpec spec = parse_problem_spec(spec_text, reference);
        OracleVerdict v = minijudge::oracle_label(spec, parse(submission), cap);
        py::dict out;
        out["correct"] = v.correct;
        if (v.correct) out["witness"] = py::none();
        else out["witness"] = v.witness.values;
        return out;
      },
      py::arg("spec_text"), py::arg("reference"), py::arg("submission"),
      py::arg("cap") = 1'000'000,
      "Exhaustive differential ground truth over the whole bounded domain.");

  m.def(
      "generate_corpus",
      [](const std::string& spec_text, const std::string& reference, int count,
         double correct_fraction, int clusters, std::uint64_t seed,
         const std::vector<double>& decile, const std::vector<double>& bug_weights) {
        ProblemSpec spec = parse_problem_spec(spec_text, reference);
        GenerationProfile profile;
        profile.count = count;
        profile.correct_fraction = correct_fraction;
        profile.clusters = clusters;
        profile.decile_correct_fraction = decile;
        profile.bug_weights = bug_weights;
        py::list out;
        for (const auto& sub : minijudge::generate_corpus(spec, profile, seed)) {
          py::dict row;
          row["id"] = sub.id;
          row["timestamp"] = sub.timestamp;
          row["source"] = sub.source;
          row["claimed_correct"] = sub.claimed_correct.has_value()
                                       ? py::cast(*sub.claimed_correct)
                                       : py::none();
          out.append(row);
        }
        return out;
      },
      py::arg("spec_text"), py::arg("reference"), py::arg("count") = 100,
      py::arg("correct_fraction") = 0.6, py::arg("clusters") = 5, py::arg("seed") = 1,
      py::arg("decile") = std::vector<double>{}, py::arg("bug_weights") = std::vector<double>{},
      "Synthesizes a submission stream from a reference implementation.");

  m.def(
      "judge",
      [](const std::string& spec_text, const std::string& reference, const IdSource& submissions,
         const std::string& mode, int seed_count, int retrain_interval, double max_fpr,
         const std::string& classifier, int ngram, std::uint64_t rng_seed, bool retrain,
         bool degrade, bool holdout, bool with_oracle, std::uint64_t oracle_cap) {
        ProblemSpec spec = parse_problem_spec(spec_text, reference);
        std::vector<Submission> subs = submissions_from(submissions);
        auto oracle = maybe_oracle(spec, subs, with_oracle, oracle_cap);
        const auto* oracle_ptr = oracle.has_value() ? &*oracle : nullptr;
        JudgeState state;
        if (mode == "baseline") {
          state = run_baseline(subs, spec.reference, spec.domain, ExploreBudget{}, seed_count);
        } else if (mode == "atas") {
          AtasConfig config;
          config.seed_count = seed_count;
          config.retrain_interval = retrain_interval;
          config.max_fpr = max_fpr;
          config.ngram = ngram;
          config.classifier = classifier_config(classifier, 6, 10, 7, 100, 0.1);
          config.rng_seed = rng_seed;
          config.retrain = retrain;
          config.degrade_to_baseline = degrade;
          config.holdout = holdout;
          state = run_atas(subs, spec.reference, spec.domain, config);
        } else {
          throw std::invalid_argument("mode must be 'baseline' or 'atas'");
        }
        nlohmann::json echo = {{"mode", mode}, {"seed_count", seed_count}};
        return judge_report(mode, echo, state, oracle_ptr).dump(2);
      },
      py::arg("spec_text"), py::arg("reference"), py::arg("submissions"),
      py::arg("mode") = "baseline", py::arg("seed_count") = 50,
      py::arg("retrain_interval") = 50, py::arg("max_fpr") = 0.3, py::arg("classifier") = "gbt",
      py::arg("ngram") = 3, py::arg("rng_seed") = 1, py::arg("retrain") = true,
      py::arg("degrade") = false, py::arg("holdout") = false, py::arg("with_oracle") = false,
      py::arg("oracle_cap") = 1'000'000,
      "Runs one pipeline over an ordered submission stream; returns the JSON report.");

  m.def(
      "compare",
      [](const std::string& spec_text, const std::string& reference, const IdSource& submissions,
         int seed_count, int retrain_interval, double max_fpr, const std::string& classifier,
         int ngram, std::uint64_t rng_seed, bool with_oracle, std::uint64_t oracle_cap) {
        ProblemSpec spec = parse_problem_spec(spec_text, reference);
        std::vector<Submission> subs = submissions_from(submissions);
        auto oracle = maybe_oracle(spec, subs, with_oracle, oracle_cap);
        const auto* oracle_ptr = oracle.has_value() ? &*oracle : nullptr;
        JudgeState base =
            run_baseline(subs, spec.reference, spec.domain, ExploreBudget{}, seed_count);
        AtasConfig config;
        config.seed_count = seed_count;
        config.retrain_interval = retrain_interval;
        config.max_fpr = max_fpr;
        config.ngram = ngram;
        config.classifier = classifier_config(classifier, 6, 10, 7, 100, 0.1);
        config.rng_seed = rng_seed;
        JudgeState gated = run_atas(subs, spec.reference, spec.domain, config);
        nlohmann::json echo = {{"seed_count", seed_count}, {"max_fpr", max_fpr}};
        return compare_report(echo, base, gated, oracle_ptr).dump(2);
      },
      py::arg("spec_text"), py::arg("reference"), py::arg("submissions"),
      py::arg("seed_count") = 50, py::arg("retrain_interval") = 50, py::arg("max_fpr") = 0.3,
      py::arg("classifier") = "gbt", py::arg("ngram") = 3, py::arg("rng_seed") = 1,
      py::arg("with_oracle") = false, py::arg("oracle_cap") = 1'000'000,
      "Runs both pipelines on the same stream; returns the joint JSON report.");

  m.def(
      "train_classifier",
      [](const std::string& family, const std::vector<std::vector<int>>& correct,
         const std::vector<std::vector<int>>& incorrect, double max_fpr, std::uint64_t seed,
         int knn_k, int tree_trials, int gbt_depth, int gbt_rounds, double learning_rate) {
        CalibratedModel cm = train_and_get_thresh(
            classifier_config(family, knn_k, tree_trials, gbt_depth, gbt_rounds, learning_rate),
            max_fpr, samples_from(correct, Label::Correct),
            samples_from(incorrect, Label::Incorrect), seed);
        py::dict out;
        out["artifact"] = save_calibrated_model(cm);
        out["thresh"] = cm.thresh;
        out["calibration_fpr"] = cm.calibration_fpr;
        out["degenerate_validation"] = cm.degenerate_validation;
        return out;
      },
      py::arg("family"), py::arg("correct"), py::arg("incorrect"), py::arg("max_fpr") = 0.3,
      py::arg("seed") = 1, py::arg("knn_k") = 6, py::arg("tree_trials") = 10,
      py::arg("gbt_depth") = 7, py::arg("gbt_rounds") = 100, py::arg("learning_rate") = 0.1,
      "Trains a classifier and calibrates its acceptance threshold on a "
      "validation split; returns the serialized artifact.");

  m.def(
      "predict",
      [](const std::string& artifact, const std::vector<int>& features) {
        CalibratedModel cm = load_calibrated_model(artifact);
        FeatureVector fv;
        for (int bit : features) fv.push_back(bit ? 1 : 0);
        double prob = cm.model.predict_probability(fv);
        py::dict out;
        out["prob"] = prob;
        out["accept"] = prob >= cm.thresh;
        return out;
      },
      py::arg("artifact"), py::arg("features"),
      "Scores a feature vector with a serialized calibrated classifier.");

  m.def(
      "build_vocab",
      [](const std::vector<std::string>& sources, int n) {
        std::vector<Program> programs;
        for (const auto& src : sources) programs.push_back(parse(src));
        std::ostringstream out;
        save_vocab(minijudge::build_vocab(programs, n), out);
        return out.str();
      },
      py::arg("sources"), py::arg("n") = 3,
      "Builds the frozen n-gram vocabulary of a set of programs; returns its "
      "text serialization.");

  m.def(
      "encode",
      [](const std::string& source, const std::string& vocab_text) {
        std::istringstream in(vocab_text);
        FeatureVocab vocab = load_vocab(in);
        FeatureVector bits = minijudge::encode(parse(source), vocab);
        return std::vector<int>(bits.begin(), bits.end());
      },
      py::arg("source"), py::arg("vocab_text"),
      "Presence bits of a program over a serialized vocabulary.");
}
