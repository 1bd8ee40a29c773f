#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minijudge/minilang.hpp"
#include "minijudge/util.hpp"

namespace minijudge {

// Expression over the program's input slots. Leaves are 64-bit constants or
// input references; interior nodes reuse the language's operator set.
struct SymExpr;
using SymExprPtr = std::shared_ptr<const SymExpr>;

struct SymExpr {
  enum class Kind { Const, Input, Unary, Binary };
  Kind kind = Kind::Const;
  std::int64_t value = 0;  // Const
  int input = -1;          // Input (slot index)
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  SymExprPtr lhs, rhs;
};

SymExprPtr sym_const(std::int64_t value);
SymExprPtr sym_input(int slot);
// Factories fold constant operands. Div/Mod with a constant zero divisor are
// never folded; the explorer forks that case into an error path instead.
SymExprPtr sym_unary(UnaryOp op, SymExprPtr operand);
SymExprPtr sym_binary(BinaryOp op, SymExprPtr lhs, SymExprPtr rhs);

bool sym_equal(const SymExpr& a, const SymExpr& b);
std::string sym_to_string(const SymExpr& e);

// Concrete evaluation. nullopt signals division or mod by zero. And/Or
// evaluate left to right and skip the right side once the left decides, so a
// division whose guard appears earlier in a path condition never runs.
std::optional<std::int64_t> sym_eval(const SymExpr& e, const TestCase& inputs);

struct InputBounds {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// Per-input inclusive bounds; the finite box all analyses range over.
struct InputDomain {
  std::vector<InputBounds> bounds;

  std::size_t arity() const { return bounds.size(); }
  bool contains(const TestCase& t) const;
  // Number of points in the box, saturated at INT64_MAX.
  std::uint64_t size_capped() const;
};

struct ExploreBudget {
  int max_paths = 256;
  int max_unroll = 64;
  std::int64_t wall_clock_ms = 15000;
  std::uint64_t solver_cap = 1'000'000;
};

struct PathOutput {
  enum class Kind { IntExpr, StrLit, Error };
  Kind kind = Kind::IntExpr;
  SymExprPtr expr;  // IntExpr
  std::string str;  // StrLit
  RuntimeErrorKind error = RuntimeErrorKind::DivideByZero;

  static PathOutput int_expr(SymExprPtr e);
  static PathOutput str_lit(std::string s);
  static PathOutput error_out(RuntimeErrorKind k);
};

// One explored path: the conjunction that selects it (guards precede the
// expressions they protect) and the single output produced on it.
struct PathOutcome {
  std::vector<SymExprPtr> condition;
  PathOutput output;
};

struct ExploreLimits {
  bool timeout = false;
  bool path_budget = false;
  bool unroll_bound = false;
  bool solver_cap = false;
  bool any() const { return timeout || path_budget || unroll_bound || solver_cap; }
};

struct ExploreResult {
  std::vector<PathOutcome> outcomes;
  bool complete = false;
  ExploreLimits limits;
};

// Depth-first, then-branch-first path enumeration. Every returned outcome has
// a condition proven satisfiable inside the domain. complete=true means no
// budget limit was hit, in which case the outcomes partition the domain.
// Pass a deadline to share a wall clock with other work; when unset, one is
// started from budget.wall_clock_ms.
ExploreResult explore_paths(const Program& program, const InputDomain& domain,
                            const ExploreBudget& budget, const Deadline& deadline = Deadline());

struct SatResult {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  TestCase witness;  // populated iff kind == Sat

  static SatResult sat(TestCase t) { return {Kind::Sat, std::move(t)}; }
  static SatResult unsat() { return {Kind::Unsat, {}}; }
  static SatResult unknown() { return {Kind::Unknown, {}}; }
};

// True iff every conjunct evaluates to nonzero at t, checked left to right.
bool satisfies(const std::vector<SymExprPtr>& conjuncts, const TestCase& t);

// Satisfiability of a conjunction over the domain box. Interval narrowing
// prunes per-input ranges, then the pruned box is enumerated in ascending
// order, at most `cap` evaluations. A Sat witness is the lexicographically
// least satisfying point and is re-checked by direct evaluation. Unsat is
// returned only when the pruned space was exhausted; Unknown only on budget.
SatResult solve_constraint(const std::vector<SymExprPtr>& conjuncts, const InputDomain& domain,
                           std::uint64_t cap = 1'000'000, const Deadline& deadline = Deadline());
SatResult solve_constraint(const SymExprPtr& constraint, const InputDomain& domain,
                           std::uint64_t cap = 1'000'000, const Deadline& deadline = Deadline());

}  // namespace minijudge
