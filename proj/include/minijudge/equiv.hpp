#pragma once

#include <string>

#include "minijudge/symex.hpp"

namespace minijudge {

// Result of one expensive equivalence check. A Counterexample is always
// validated by concrete re-execution of both programs before it is returned.
struct EquivVerdict {
  enum class Kind { Equivalent, Counterexample, Unknown };
  enum class UnknownReason { Timeout, PathBudget, UnrollBound, SolverCap };

  Kind kind = Kind::Unknown;
  TestCase test;                  // Counterexample
  ExecutionResult candidate_out;  // Counterexample
  ExecutionResult reference_out;  // Counterexample
  UnknownReason reason = UnknownReason::Timeout;  // Unknown

  static EquivVerdict equivalent();
  static EquivVerdict counterexample(TestCase t, ExecutionResult cand, ExecutionResult ref);
  static EquivVerdict unknown(UnknownReason r);
};

const char* unknown_reason_name(EquivVerdict::UnknownReason r);

// True iff the two programs produce different outcomes on the test.
bool validate_counterexample(const Program& candidate, const Program& reference,
                             const TestCase& test);

// Explores both programs and compares every cross pair of paths: a pair with
// jointly satisfiable conditions and unequal outputs yields the first
// counterexample in deterministic order. Equivalent requires both
// explorations complete and every cross pair resolved. Every other outcome
// is Unknown with the dominant budget reason.
EquivVerdict check_equivalence(const Program& candidate, const Program& reference,
                               const InputDomain& domain, const ExploreBudget& budget);

}  // namespace minijudge
