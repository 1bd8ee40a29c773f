#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minijudge/symex.hpp"

namespace minijudge {

enum class OutputKind { Int, Str };

// One grading task: bounded inputs, an output kind, and the reference program.
struct ProblemSpec {
  std::string name;
  std::vector<std::string> input_names;
  InputDomain domain;
  OutputKind output = OutputKind::Int;
  Program reference;
};

struct Submission {
  std::string id;
  std::int64_t timestamp = 0;
  std::string source;
  // Upstream verdict when present (for generated corpora: the generator's
  // intent). Advisory only; the oracle is ground truth.
  std::optional<bool> claimed_correct;
};

struct PruneRecord {
  std::string id;
  std::string filename;
  std::string reason;
};

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingManifest : CorpusError {
  using CorpusError::CorpusError;
};
struct SpecParseError : CorpusError {
  using CorpusError::CorpusError;
};
struct DuplicateId : CorpusError {
  using CorpusError::CorpusError;
};
struct ProfileInfeasible : CorpusError {
  using CorpusError::CorpusError;
};
struct DomainTooLarge : CorpusError {
  using CorpusError::CorpusError;
};

struct LoadedCorpus {
  ProblemSpec spec;
  std::vector<Submission> submissions;  // sorted by (timestamp, id)
  std::vector<PruneRecord> pruned;
};

// problem.spec body: `name <word>`, one `input <name> <lo> <hi>` line per
// input, `output int|str`. The reference program lives in reference.mc.
ProblemSpec parse_problem_spec(const std::string& text, const std::string& reference_source);
std::string serialize_problem_spec(const ProblemSpec& spec);

// Reads problem.spec, reference.mc and manifest.txt (tab-separated
// `id timestamp filename [verdict]`). Submissions that fail to parse or whose
// read count does not match the task arity are pruned with a record, not
// fatal. Duplicate ids and malformed metadata are fatal.
LoadedCorpus load_corpus(const std::filesystem::path& dir);

// Writes a corpus directory in the exact layout load_corpus reads.
void write_corpus(const std::filesystem::path& dir, const ProblemSpec& spec,
                  const std::vector<Submission>& submissions);

struct GenerationProfile {
  int count = 100;
  double correct_fraction = 0.6;
  int clusters = 5;
  // When non-empty: exactly 10 per-decile correct fractions over the stream,
  // overriding the flat fraction (lets streams be skewed on purpose).
  std::vector<double> decile_correct_fraction;
  // Weights over the bug catalog, aligned with bug_mutation_names(); empty
  // means uniform.
  std::vector<double> bug_weights;
};

const std::vector<std::string>& bug_mutation_names();

// Synthesizes a submission stream: intended-correct programs are the
// reference under semantics-preserving rewrites grouped into strategy
// clusters; intended-incorrect ones get one weighted bug mutation. Every
// output parses; claimed_correct records intent. Reproducible from the seed.
std::vector<Submission> generate_corpus(const ProblemSpec& spec, const GenerationProfile& profile,
                                        std::uint64_t rng_seed);

// Semantics-preserving rewrites exposed for the catalog self-test and for
// renaming-invariance tests elsewhere.
Program mutate_rename(const Program& p, RandomSource& rng);
Program mutate_swap_commutative(const Program& p, RandomSource& rng);
Program mutate_introduce_temp(const Program& p, RandomSource& rng);
Program mutate_rewrite_relational(const Program& p, RandomSource& rng);
Program mutate_reorder_decls(const Program& p, RandomSource& rng);

// Bug injections, indexed as in bug_mutation_names(). Returns nothing when
// the program has no applicable site.
std::optional<Program> apply_bug_mutation(const Program& p, std::size_t index, RandomSource& rng);

struct OracleVerdict {
  bool correct = false;
  TestCase witness;  // least differing input when incorrect
};

// Exhaustive differential ground truth over the whole domain; refuses domains
// beyond the cap. The witness is the lexicographically least differing input.
OracleVerdict oracle_label(const ProblemSpec& spec, const Program& submission,
                           std::uint64_t cap = 1'000'000);

// Same ground truth with the reference outcomes computed once; labelling many
// submissions against one task should go through this.
class OracleTable {
 public:
  OracleTable(const ProblemSpec& spec, std::uint64_t cap = 1'000'000);
  OracleVerdict label(const Program& submission) const;
  std::uint64_t point_count() const { return static_cast<std::uint64_t>(points_.size()); }

 private:
  const ProblemSpec& spec_;
  std::vector<TestCase> points_;
  std::vector<ExecutionResult> reference_out_;
};

}  // namespace minijudge
