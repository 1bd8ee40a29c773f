#include "minijudge/equiv.hpp"

#include <stdexcept>

namespace minijudge {

EquivVerdict EquivVerdict::equivalent() {
  EquivVerdict v;
  v.kind = Kind::Equivalent;
  return v;
}

EquivVerdict EquivVerdict::counterexample(TestCase t, ExecutionResult cand, ExecutionResult ref) {
  EquivVerdict v;
  v.kind = Kind::Counterexample;
  v.test = std::move(t);
  v.candidate_out = std::move(cand);
  v.reference_out = std::move(ref);
  return v;
}

EquivVerdict EquivVerdict::unknown(UnknownReason r) {
  EquivVerdict v;
  v.kind = Kind::Unknown;
  v.reason = r;
  return v;
}

const char* unknown_reason_name(EquivVerdict::UnknownReason r) {
  switch (r) {
    case EquivVerdict::UnknownReason::Timeout: return "Timeout";
    case EquivVerdict::UnknownReason::PathBudget: return "PathBudget";
    case EquivVerdict::UnknownReason::UnrollBound: return "UnrollBound";
    case EquivVerdict::UnknownReason::SolverCap: return "SolverCap";
  }
  return "?";
}

bool validate_counterexample(const Program& candidate, const Program& reference,
                             const TestCase& test) {
  return !same_outcome(run_concrete(candidate, test), run_concrete(reference, test));
}

namespace {

// Outputs that are equal wherever both paths are taken need no solver call.
bool outputs_identical(const PathOutput& a, const PathOutput& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PathOutput::Kind::IntExpr: return sym_equal(*a.expr, *b.expr);
    case PathOutput::Kind::StrLit: return a.str == b.str;
    case PathOutput::Kind::Error: return a.error == b.error;
  }
  return false;
}

// For int-int pairs inequality must be solved; any kind mismatch or unequal
// literal/error pair differs at every joint point.
bool needs_inequality_conjunct(const PathOutput& a, const PathOutput& b) {
  return a.kind == PathOutput::Kind::IntExpr && b.kind == PathOutput::Kind::IntExpr;
}

}  // namespace

EquivVerdict check_equivalence(const Program& candidate, const Program& reference,
                               const InputDomain& domain, const ExploreBudget& budget) {
  if (candidate.arity() != reference.arity())
    throw std::invalid_argument("candidate and reference arity differ");
  if (static_cast<int>(domain.arity()) != candidate.arity())
    throw std::invalid_argument("domain arity does not match the programs");

  if (program_equal(candidate, reference)) return EquivVerdict::equivalent();

  Deadline dl = Deadline::after_ms(
      static_cast<std::uint64_t>(std::max<std::int64_t>(budget.wall_clock_ms, 1)));
  ExploreResult cand = explore_paths(candidate, domain, budget, dl);
  ExploreResult ref = explore_paths(reference, domain, budget, dl);

  bool solver_unknown = false;
  for (const auto& c : cand.outcomes) {
    for (const auto& r : ref.outcomes) {
      if (outputs_identical(c.output, r.output)) continue;
      std::vector<SymExprPtr> joint = c.condition;
      joint.insert(joint.end(), r.condition.begin(), r.condition.end());
      if (needs_inequality_conjunct(c.output, r.output))
        joint.push_back(sym_binary(BinaryOp::Ne, c.output.expr, r.output.expr));
      SatResult sr = solve_constraint(joint, domain, budget.solver_cap, dl);
      if (sr.kind == SatResult::Kind::Sat) {
        ExecutionResult cand_out = run_concrete(candidate, sr.witness);
        ExecutionResult ref_out = run_concrete(reference, sr.witness);
        if (same_outcome(cand_out, ref_out))
          throw std::logic_error("divergence witness failed concrete validation");
        return EquivVerdict::counterexample(sr.witness, std::move(cand_out), std::move(ref_out));
      }
      if (sr.kind == SatResult::Kind::Unknown) solver_unknown = true;
    }
  }

  if (cand.complete && ref.complete && !solver_unknown) return EquivVerdict::equivalent();

  ExploreLimits merged;
  merged.timeout = cand.limits.timeout || ref.limits.timeout || dl.expired();
  merged.path_budget = cand.limits.path_budget || ref.limits.path_budget;
  merged.unroll_bound = cand.limits.unroll_bound || ref.limits.unroll_bound;
  merged.solver_cap = cand.limits.solver_cap || ref.limits.solver_cap || solver_unknown;
  if (merged.timeout) return EquivVerdict::unknown(EquivVerdict::UnknownReason::Timeout);
  if (merged.path_budget) return EquivVerdict::unknown(EquivVerdict::UnknownReason::PathBudget);
  if (merged.unroll_bound) return EquivVerdict::unknown(EquivVerdict::UnknownReason::UnrollBound);
  return EquivVerdict::unknown(EquivVerdict::UnknownReason::SolverCap);
}

}  // namespace minijudge
