#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "minijudge/util.hpp"

namespace minijudge {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind { Keyword, Ident, IntLiteral, StrLiteral, Operator, Punct };

struct Token {
  TokenKind kind;
  std::string text;  // StrLiteral keeps its surrounding quotes
  int line = 0;
  int column = 0;
};

const char* token_kind_name(TokenKind kind);

struct LexError : std::runtime_error {
  LexError(int line, int column, std::string character, const std::string& what);
  int line;
  int column;
  std::string character;
};

// Total lexer for MiniC: consumes every byte or throws LexError. `//` line
// comments are skipped. Grammar and alphabet are documented in docs/minic.md.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Neg, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expressions are immutable; mutators build new trees sharing subtrees.
struct Expr {
  enum class Kind { IntLit, Var, Unary, Binary };
  Kind kind;
  std::int64_t value = 0;  // IntLit
  std::string name;        // Var
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  ExprPtr lhs, rhs;  // Unary uses lhs only
};

ExprPtr make_int(std::int64_t value);
ExprPtr make_var(std::string name);
ExprPtr make_unary(UnaryOp op, ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

bool expr_equal(const Expr& a, const Expr& b);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct SwitchCase {
  std::int64_t label = 0;
  std::vector<StmtPtr> body;
};

struct Stmt {
  enum class Kind { Decl, Assign, If, While, For, Switch, Read, PrintInt, PrintStr, Block };
  Kind kind;
  std::string name;    // Decl/Assign/Read target
  ExprPtr expr;        // decl init (may be null) / assign value / condition / scrutinee / print expr
  StmtPtr body;        // if-then, while/for body
  StmtPtr else_body;   // if-else (may be null)
  StmtPtr init, step;  // for clauses (Decl or Assign without ';'; may be null)
  std::vector<SwitchCase> cases;
  bool has_default = false;
  std::vector<StmtPtr> default_body;
  std::vector<StmtPtr> stmts;  // Block
  std::string str;             // PrintStr literal text without quotes
  int input_slot = -1;         // Read: index into TestCase values
};

bool stmt_equal(const Stmt& a, const Stmt& b);

struct Program {
  std::vector<StmtPtr> body;
  std::vector<std::string> input_names;  // one per read statement, in syntactic order

  int arity() const { return static_cast<int>(input_names.size()); }
};

bool program_equal(const Program& a, const Program& b);

// ---------------------------------------------------------------------------
// Parsing and rendering
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  ParseError(int line, int column, std::string expected, std::string found);
  int line;
  int column;
  std::string expected;
  std::string found;
};

struct ArityError : std::runtime_error {
  explicit ArityError(int read_count);
  int read_count;
};

struct PrintError : std::runtime_error {
  PrintError();
};

// Parses MiniC source into a checked Program: declare-before-use, no
// redeclaration, at most 4 read statements (ArityError), at least one print
// statement (PrintError), distinct case labels.
Program parse(std::string_view source);

// Canonical pretty-printer; parse(render(p)) is structurally identical to p.
std::string render(const Program& program);

// ---------------------------------------------------------------------------
// Concrete execution
// ---------------------------------------------------------------------------

struct TestCase {
  std::vector<std::int64_t> values;

  friend bool operator==(const TestCase& a, const TestCase& b) { return a.values == b.values; }
  friend auto operator<=>(const TestCase& a, const TestCase& b) { return a.values <=> b.values; }
};

enum class RuntimeErrorKind { DivideByZero, ModByZero, NoPrintReached, MultiplePrints };

const char* runtime_error_name(RuntimeErrorKind kind);

struct ExecutionResult {
  enum class Kind { IntOutput, StrOutput, RuntimeError, FuelExhausted };
  Kind kind = Kind::IntOutput;
  std::int64_t int_value = 0;
  std::string str_value;
  RuntimeErrorKind error = RuntimeErrorKind::DivideByZero;
  std::uint64_t steps_used = 0;

  static ExecutionResult int_output(std::int64_t v, std::uint64_t steps);
  static ExecutionResult str_output(std::string v, std::uint64_t steps);
  static ExecutionResult runtime_error(RuntimeErrorKind k, std::uint64_t steps);
  static ExecutionResult fuel_exhausted(std::uint64_t steps);
};

// Outcome comparison, ignoring steps_used.
bool same_outcome(const ExecutionResult& a, const ExecutionResult& b);

std::string outcome_to_string(const ExecutionResult& r);

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

// Deterministic interpreter. Every failure mode is reported in the outcome;
// never throws for program behavior. `fuel` caps statement evaluations.
ExecutionResult run_concrete(const Program& program, const TestCase& test,
                             std::uint64_t fuel = kDefaultFuel);

}  // namespace minijudge
