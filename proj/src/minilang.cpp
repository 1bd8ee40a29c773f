#include "minijudge/minilang.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace minijudge {

namespace {

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "var", "if", "else", "while", "for", "switch", "case", "default", "read", "print"};
  return kw;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLiteral: return "integer literal";
    case TokenKind::StrLiteral: return "string literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punct: return "punctuation";
  }
  return "?";
}

LexError::LexError(int line_, int column_, std::string character_, const std::string& what_)
    : std::runtime_error(what_), line(line_), column(column_), character(std::move(character_)) {}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto fail = [&](std::string ch, const std::string& msg) -> void {
    std::ostringstream os;
    os << "lex error at " << line << ":" << column << ": " << msg;
    throw LexError(line, column, std::move(ch), os.str());
  };

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };

  while (i < source.size()) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }

    int tok_line = line;
    int tok_col = column;

    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < source.size() && is_ident_char(source[j])) ++j;
      std::string text(source.substr(i, j - i));
      TokenKind kind = keywords().count(text) ? TokenKind::Keyword : TokenKind::Ident;
      tokens.push_back({kind, std::move(text), tok_line, tok_col});
      advance(j - i);
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
      std::string text(source.substr(i, j - i));
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size())
        fail(text, "integer literal does not fit in 64 bits: " + text);
      tokens.push_back({TokenKind::IntLiteral, std::move(text), tok_line, tok_col});
      advance(j - i);
      continue;
    }

    if (c == '"') {
      std::size_t j = i + 1;
      while (j < source.size() && source[j] != '"') {
        unsigned char u = static_cast<unsigned char>(source[j]);
        if (u == '\n' || u == '\t' || (u < 0x20)) {
          fail(std::string(1, source[j]), "control character inside string literal");
        }
        ++j;
      }
      if (j >= source.size()) fail("\"", "unterminated string literal");
      std::string text(source.substr(i, j - i + 1));  // keep quotes
      tokens.push_back({TokenKind::StrLiteral, std::move(text), tok_line, tok_col});
      advance(j - i + 1);
      continue;
    }

    // Two-character operators first (maximal munch).
    if (i + 1 < source.size()) {
      std::string two(source.substr(i, 2));
      if (two == "<=" || two == ">=" || two == "==" || two == "!=" || two == "&&" || two == "||") {
        tokens.push_back({TokenKind::Operator, two, tok_line, tok_col});
        advance(2);
        continue;
      }
    }
    if (c == '&' || c == '|') {
      fail(std::string(1, c), std::string("stray '") + c + "' (did you mean '" + c + c + "'?)");
    }
    if (std::string("+-*/%<>=!").find(c) != std::string::npos) {
      tokens.push_back({TokenKind::Operator, std::string(1, c), tok_line, tok_col});
      advance(1);
      continue;
    }
    if (std::string("(){};:").find(c) != std::string::npos) {
      tokens.push_back({TokenKind::Punct, std::string(1, c), tok_line, tok_col});
      advance(1);
      continue;
    }
    fail(std::string(1, c), std::string("character '") + c + "' is not in the MiniC alphabet");
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// AST construction and equality
// ---------------------------------------------------------------------------

ExprPtr make_int(std::int64_t value) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::IntLit;
  e->value = value;
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->uop = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->bop = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit: return a.value == b.value;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Unary: return a.uop == b.uop && expr_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.bop == b.bop && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

namespace {
bool stmts_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(*a[i], *b[i])) return false;
  return true;
}

bool opt_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool opt_stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return stmt_equal(*a, *b);
}
}  // namespace

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Decl: return a.name == b.name && opt_equal(a.expr, b.expr);
    case Stmt::Kind::Assign: return a.name == b.name && expr_equal(*a.expr, *b.expr);
    case Stmt::Kind::If:
      return expr_equal(*a.expr, *b.expr) && stmt_equal(*a.body, *b.body) &&
             opt_stmt_equal(a.else_body, b.else_body);
    case Stmt::Kind::While: return expr_equal(*a.expr, *b.expr) && stmt_equal(*a.body, *b.body);
    case Stmt::Kind::For:
      return opt_stmt_equal(a.init, b.init) && opt_equal(a.expr, b.expr) &&
             opt_stmt_equal(a.step, b.step) && stmt_equal(*a.body, *b.body);
    case Stmt::Kind::Switch: {
      if (!expr_equal(*a.expr, *b.expr)) return false;
      if (a.cases.size() != b.cases.size() || a.has_default != b.has_default) return false;
      for (std::size_t i = 0; i < a.cases.size(); ++i) {
        if (a.cases[i].label != b.cases[i].label) return false;
        if (!stmts_equal(a.cases[i].body, b.cases[i].body)) return false;
      }
      return stmts_equal(a.default_body, b.default_body);
    }
    case Stmt::Kind::Read: return a.name == b.name && a.input_slot == b.input_slot;
    case Stmt::Kind::PrintInt: return expr_equal(*a.expr, *b.expr);
    case Stmt::Kind::PrintStr: return a.str == b.str;
    case Stmt::Kind::Block: return stmts_equal(a.stmts, b.stmts);
  }
  return false;
}

bool program_equal(const Program& a, const Program& b) {
  return a.input_names == b.input_names && stmts_equal(a.body, b.body);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

ParseError::ParseError(int line_, int column_, std::string expected_, std::string found_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                         ": expected " + expected_ + ", found " + found_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

ArityError::ArityError(int read_count_)
    : std::runtime_error("program declares " + std::to_string(read_count_) +
                         " inputs; at most 4 are allowed"),
      read_count(read_count_) {}

PrintError::PrintError() : std::runtime_error("program contains no print statement") {}

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program parse_program() {
    Program program;
    while (!at_end()) program.body.push_back(parse_stmt());
    program.input_names = std::move(input_names_);
    if (program.input_names.size() > 4)
      throw ArityError(static_cast<int>(program.input_names.size()));
    if (print_count_ == 0) throw PrintError();
    return program;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> input_names_;
  std::unordered_set<std::string> declared_;
  int print_count_ = 0;

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    static const Token eof{TokenKind::Punct, "<end of input>", 0, 0};
    return at_end() ? eof : tokens_[pos_];
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    int line = at_end() && !tokens_.empty() ? tokens_.back().line : t.line;
    int col = at_end() && !tokens_.empty() ? tokens_.back().column : t.column;
    throw ParseError(line, col, expected, at_end() ? "end of input" : "'" + t.text + "'");
  }

  bool check(TokenKind kind, std::string_view text) const {
    return !at_end() && peek().kind == kind && peek().text == text;
  }

  bool match(TokenKind kind, std::string_view text) {
    if (!check(kind, text)) return false;
    ++pos_;
    return true;
  }

  Token expect(TokenKind kind, std::string_view text) {
    if (!check(kind, text)) fail("'" + std::string(text) + "'");
    return tokens_[pos_++];
  }

  Token expect_kind(TokenKind kind, const std::string& what) {
    if (at_end() || peek().kind != kind) fail(what);
    return tokens_[pos_++];
  }

  void declare(const std::string& name, const Token& at) {
    if (declared_.count(name))
      throw ParseError(at.line, at.column, "a fresh variable name", "'" + name + "' (already declared)");
    declared_.insert(name);
  }

  void check_declared(const Token& ident) {
    if (!declared_.count(ident.text))
      throw ParseError(ident.line, ident.column, "a declared variable",
                       "'" + ident.text + "' (not declared before use)");
  }

  StmtPtr parse_stmt() {
    if (check(TokenKind::Keyword, "var")) {
      auto s = parse_decl();
      expect(TokenKind::Punct, ";");
      return s;
    }
    if (check(TokenKind::Keyword, "if")) return parse_if();
    if (check(TokenKind::Keyword, "while")) return parse_while();
    if (check(TokenKind::Keyword, "for")) return parse_for();
    if (check(TokenKind::Keyword, "switch")) return parse_switch();
    if (check(TokenKind::Keyword, "read")) return parse_read();
    if (check(TokenKind::Keyword, "print")) return parse_print();
    if (check(TokenKind::Punct, "{")) return parse_block();
    if (!at_end() && peek().kind == TokenKind::Ident) {
      auto s = parse_assign();
      expect(TokenKind::Punct, ";");
      return s;
    }
    fail("a statement");
  }

  StmtPtr parse_decl() {
    expect(TokenKind::Keyword, "var");
    Token name = expect_kind(TokenKind::Ident, "a variable name");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Decl;
    s->name = name.text;
    if (match(TokenKind::Operator, "=")) s->expr = parse_expr();
    declare(name.text, name);
    return s;
  }

  StmtPtr parse_assign() {
    Token name = expect_kind(TokenKind::Ident, "a variable name");
    check_declared(name);
    expect(TokenKind::Operator, "=");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Assign;
    s->name = name.text;
    s->expr = parse_expr();
    return s;
  }

  StmtPtr parse_if() {
    expect(TokenKind::Keyword, "if");
    expect(TokenKind::Punct, "(");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::If;
    s->expr = parse_expr();
    expect(TokenKind::Punct, ")");
    s->body = parse_stmt();
    if (match(TokenKind::Keyword, "else")) s->else_body = parse_stmt();
    return s;
  }

  StmtPtr parse_while() {
    expect(TokenKind::Keyword, "while");
    expect(TokenKind::Punct, "(");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::While;
    s->expr = parse_expr();
    expect(TokenKind::Punct, ")");
    s->body = parse_stmt();
    return s;
  }

  StmtPtr parse_for() {
    expect(TokenKind::Keyword, "for");
    expect(TokenKind::Punct, "(");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::For;
    if (!check(TokenKind::Punct, ";")) s->init = parse_simple();
    expect(TokenKind::Punct, ";");
    if (!check(TokenKind::Punct, ";")) s->expr = parse_expr();
    expect(TokenKind::Punct, ";");
    if (!check(TokenKind::Punct, ")")) s->step = parse_simple();
    expect(TokenKind::Punct, ")");
    s->body = parse_stmt();
    return s;
  }

  // A declaration or assignment without trailing ';', as used in for clauses.
  StmtPtr parse_simple() {
    if (check(TokenKind::Keyword, "var")) return parse_decl();
    return parse_assign();
  }

  StmtPtr parse_switch() {
    expect(TokenKind::Keyword, "switch");
    expect(TokenKind::Punct, "(");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Switch;
    s->expr = parse_expr();
    expect(TokenKind::Punct, ")");
    expect(TokenKind::Punct, "{");
    std::set<std::int64_t> seen_labels;
    while (check(TokenKind::Keyword, "case")) {
      Token kw = tokens_[pos_++];
      SwitchCase c;
      c.label = parse_case_label();
      if (!seen_labels.insert(c.label).second)
        throw ParseError(kw.line, kw.column, "a distinct case label",
                         "duplicate label " + std::to_string(c.label));
      expect(TokenKind::Punct, ":");
      while (!check(TokenKind::Keyword, "case") && !check(TokenKind::Keyword, "default") &&
             !check(TokenKind::Punct, "}"))
        c.body.push_back(parse_stmt());
      s->cases.push_back(std::move(c));
    }
    if (match(TokenKind::Keyword, "default")) {
      s->has_default = true;
      expect(TokenKind::Punct, ":");
      while (!check(TokenKind::Punct, "}")) s->default_body.push_back(parse_stmt());
    }
    expect(TokenKind::Punct, "}");
    return s;
  }

  std::int64_t parse_case_label() {
    bool neg = match(TokenKind::Operator, "-");
    Token lit = expect_kind(TokenKind::IntLiteral, "an integer case label");
    std::int64_t v = std::stoll(lit.text);
    return neg ? wrap_neg(v) : v;
  }

  StmtPtr parse_read() {
    Token kw = expect(TokenKind::Keyword, "read");
    expect(TokenKind::Punct, "(");
    Token name = expect_kind(TokenKind::Ident, "an input variable name");
    expect(TokenKind::Punct, ")");
    expect(TokenKind::Punct, ";");
    declare(name.text, name);
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Read;
    s->name = name.text;
    s->input_slot = static_cast<int>(input_names_.size());
    input_names_.push_back(name.text);
    if (input_names_.size() > 4) throw ArityError(static_cast<int>(input_names_.size()));
    (void)kw;
    return s;
  }

  StmtPtr parse_print() {
    expect(TokenKind::Keyword, "print");
    expect(TokenKind::Punct, "(");
    auto s = std::make_shared<Stmt>();
    if (!at_end() && peek().kind == TokenKind::StrLiteral) {
      Token lit = tokens_[pos_++];
      s->kind = Stmt::Kind::PrintStr;
      s->str = lit.text.substr(1, lit.text.size() - 2);
    } else {
      s->kind = Stmt::Kind::PrintInt;
      s->expr = parse_expr();
    }
    expect(TokenKind::Punct, ")");
    expect(TokenKind::Punct, ";");
    ++print_count_;
    return s;
  }

  StmtPtr parse_block() {
    expect(TokenKind::Punct, "{");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Block;
    while (!check(TokenKind::Punct, "}")) {
      if (at_end()) fail("'}'");
      s->stmts.push_back(parse_stmt());
    }
    expect(TokenKind::Punct, "}");
    return s;
  }

  // Precedence climbing: || < && < ==,!= < relational < additive < multiplicative < unary.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (match(TokenKind::Operator, "||")) e = make_binary(BinaryOp::Or, e, parse_and());
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_equality();
    while (match(TokenKind::Operator, "&&")) e = make_binary(BinaryOp::And, e, parse_equality());
    return e;
  }

  ExprPtr parse_equality() {
    ExprPtr e = parse_relational();
    for (;;) {
      if (match(TokenKind::Operator, "==")) e = make_binary(BinaryOp::Eq, e, parse_relational());
      else if (match(TokenKind::Operator, "!=")) e = make_binary(BinaryOp::Ne, e, parse_relational());
      else return e;
    }
  }

  ExprPtr parse_relational() {
    ExprPtr e = parse_additive();
    for (;;) {
      if (match(TokenKind::Operator, "<")) e = make_binary(BinaryOp::Lt, e, parse_additive());
      else if (match(TokenKind::Operator, "<=")) e = make_binary(BinaryOp::Le, e, parse_additive());
      else if (match(TokenKind::Operator, ">")) e = make_binary(BinaryOp::Gt, e, parse_additive());
      else if (match(TokenKind::Operator, ">=")) e = make_binary(BinaryOp::Ge, e, parse_additive());
      else return e;
    }
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    for (;;) {
      if (match(TokenKind::Operator, "+")) e = make_binary(BinaryOp::Add, e, parse_multiplicative());
      else if (match(TokenKind::Operator, "-")) e = make_binary(BinaryOp::Sub, e, parse_multiplicative());
      else return e;
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary();
    for (;;) {
      if (match(TokenKind::Operator, "*")) e = make_binary(BinaryOp::Mul, e, parse_unary());
      else if (match(TokenKind::Operator, "/")) e = make_binary(BinaryOp::Div, e, parse_unary());
      else if (match(TokenKind::Operator, "%")) e = make_binary(BinaryOp::Mod, e, parse_unary());
      else return e;
    }
  }

  ExprPtr parse_unary() {
    if (match(TokenKind::Operator, "!")) return make_unary(UnaryOp::Not, parse_unary());
    if (match(TokenKind::Operator, "-")) return make_unary(UnaryOp::Neg, parse_unary());
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (!at_end() && peek().kind == TokenKind::IntLiteral) {
      Token lit = tokens_[pos_++];
      return make_int(std::stoll(lit.text));
    }
    if (!at_end() && peek().kind == TokenKind::Ident) {
      Token name = tokens_[pos_++];
      check_declared(name);
      return make_var(name.text);
    }
    if (match(TokenKind::Punct, "(")) {
      ExprPtr e = parse_expr();
      expect(TokenKind::Punct, ")");
      return e;
    }
    fail("an expression");
  }
};

}  // namespace

Program parse(std::string_view source) { return Parser(tokenize(source)).parse_program(); }

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
  }
  return 0;
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

class Renderer {
 public:
  std::string render(const Program& program) {
    for (const auto& s : program.body) stmt(*s, 0);
    return std::move(out_);
  }

 private:
  std::string out_;

  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void expr(const Expr& e, int parent_prec, bool right_side) {
    switch (e.kind) {
      case Expr::Kind::IntLit: {
        // Negative literals only arise from folded ASTs built in code;
        // INT64_MIN cannot be re-parsed as a literal, so render via wrap.
        if (e.value < 0) {
          out_ += "(-";
          if (e.value == std::numeric_limits<std::int64_t>::min()) {
            out_ += "9223372036854775807 - 1";
          } else {
            out_ += std::to_string(-e.value);
          }
          out_ += ")";
        } else {
          out_ += std::to_string(e.value);
        }
        return;
      }
      case Expr::Kind::Var: out_ += e.name; return;
      case Expr::Kind::Unary: {
        bool parens = parent_prec > 7 || (parent_prec == 7 && right_side);
        (void)parens;
        out_ += e.uop == UnaryOp::Not ? "!" : "-";
        // Operand of a unary is rendered at unary precedence; wrap binaries.
        if (e.lhs->kind == Expr::Kind::Binary) {
          out_ += "(";
          expr(*e.lhs, 0, false);
          out_ += ")";
        } else {
          expr(*e.lhs, 7, false);
        }
        return;
      }
      case Expr::Kind::Binary: {
        int prec = precedence(e.bop);
        bool parens = prec < parent_prec || (prec == parent_prec && right_side);
        if (parens) out_ += "(";
        expr(*e.lhs, prec, false);
        out_ += " ";
        out_ += op_text(e.bop);
        out_ += " ";
        expr(*e.rhs, prec, true);
        if (parens) out_ += ")";
        return;
      }
    }
  }

  void expr_top(const Expr& e) { expr(e, 0, false); }

  // Emits a simple statement (decl/assign) without the trailing ";\n".
  void simple(const Stmt& s) {
    if (s.kind == Stmt::Kind::Decl) {
      out_ += "var " + s.name;
      if (s.expr) {
        out_ += " = ";
        expr_top(*s.expr);
      }
    } else {
      out_ += s.name + " = ";
      expr_top(*s.expr);
    }
  }

  // Renders the body of an if/while/for: blocks inline with braces, other
  // statements on the next line, indented.
  void body_stmt(const Stmt& s, int depth) {
    if (s.kind == Stmt::Kind::Block) {
      out_ += " {\n";
      for (const auto& inner : s.stmts) stmt(*inner, depth + 1);
      indent(depth);
      out_ += "}";
    } else {
      out_ += "\n";
      stmt_no_newline(s, depth + 1);
    }
  }

  void stmt(const Stmt& s, int depth) {
    stmt_no_newline(s, depth);
    out_ += "\n";
  }

  void stmt_no_newline(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign:
        simple(s);
        out_ += ";";
        return;
      case Stmt::Kind::If: {
        out_ += "if (";
        expr_top(*s.expr);
        out_ += ")";
        body_stmt(*s.body, depth);
        if (s.else_body) {
          if (s.body->kind == Stmt::Kind::Block) out_ += " else";
          else {
            out_ += "\n";
            indent(depth);
            out_ += "else";
          }
          body_stmt(*s.else_body, depth);
        }
        return;
      }
      case Stmt::Kind::While: {
        out_ += "while (";
        expr_top(*s.expr);
        out_ += ")";
        body_stmt(*s.body, depth);
        return;
      }
      case Stmt::Kind::For: {
        out_ += "for (";
        if (s.init) simple(*s.init);
        out_ += "; ";
        if (s.expr) expr_top(*s.expr);
        out_ += "; ";
        if (s.step) simple(*s.step);
        out_ += ")";
        body_stmt(*s.body, depth);
        return;
      }
      case Stmt::Kind::Switch: {
        out_ += "switch (";
        expr_top(*s.expr);
        out_ += ") {\n";
        for (const auto& c : s.cases) {
          indent(depth + 1);
          if (c.label < 0) {
            out_ += "case -" +
                    (c.label == std::numeric_limits<std::int64_t>::min()
                         ? std::string("9223372036854775808")
                         : std::to_string(-c.label)) +
                    ":\n";
          } else {
            out_ += "case " + std::to_string(c.label) + ":\n";
          }
          for (const auto& inner : c.body) stmt(*inner, depth + 2);
        }
        if (s.has_default) {
          indent(depth + 1);
          out_ += "default:\n";
          for (const auto& inner : s.default_body) stmt(*inner, depth + 2);
        }
        indent(depth);
        out_ += "}";
        return;
      }
      case Stmt::Kind::Read:
        out_ += "read(" + s.name + ");";
        return;
      case Stmt::Kind::PrintInt:
        out_ += "print(";
        expr_top(*s.expr);
        out_ += ");";
        return;
      case Stmt::Kind::PrintStr:
        out_ += "print(\"" + s.str + "\");";
        return;
      case Stmt::Kind::Block:
        out_ += "{\n";
        for (const auto& inner : s.stmts) stmt(*inner, depth + 1);
        indent(depth);
        out_ += "}";
        return;
    }
  }
};

}  // namespace

std::string render(const Program& program) { return Renderer().render(program); }

// ---------------------------------------------------------------------------
// Concrete interpreter
// ---------------------------------------------------------------------------

const char* runtime_error_name(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::DivideByZero: return "DivideByZero";
    case RuntimeErrorKind::ModByZero: return "ModByZero";
    case RuntimeErrorKind::NoPrintReached: return "NoPrintReached";
    case RuntimeErrorKind::MultiplePrints: return "MultiplePrints";
  }
  return "?";
}

ExecutionResult ExecutionResult::int_output(std::int64_t v, std::uint64_t steps) {
  ExecutionResult r;
  r.kind = Kind::IntOutput;
  r.int_value = v;
  r.steps_used = steps;
  return r;
}

ExecutionResult ExecutionResult::str_output(std::string v, std::uint64_t steps) {
  ExecutionResult r;
  r.kind = Kind::StrOutput;
  r.str_value = std::move(v);
  r.steps_used = steps;
  return r;
}

ExecutionResult ExecutionResult::runtime_error(RuntimeErrorKind k, std::uint64_t steps) {
  ExecutionResult r;
  r.kind = Kind::RuntimeError;
  r.error = k;
  r.steps_used = steps;
  return r;
}

ExecutionResult ExecutionResult::fuel_exhausted(std::uint64_t steps) {
  ExecutionResult r;
  r.kind = Kind::FuelExhausted;
  r.steps_used = steps;
  return r;
}

bool same_outcome(const ExecutionResult& a, const ExecutionResult& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExecutionResult::Kind::IntOutput: return a.int_value == b.int_value;
    case ExecutionResult::Kind::StrOutput: return a.str_value == b.str_value;
    case ExecutionResult::Kind::RuntimeError: return a.error == b.error;
    case ExecutionResult::Kind::FuelExhausted: return true;
  }
  return false;
}

std::string outcome_to_string(const ExecutionResult& r) {
  switch (r.kind) {
    case ExecutionResult::Kind::IntOutput: return "int " + std::to_string(r.int_value);
    case ExecutionResult::Kind::StrOutput: return "str \"" + r.str_value + "\"";
    case ExecutionResult::Kind::RuntimeError:
      return std::string("error ") + runtime_error_name(r.error);
    case ExecutionResult::Kind::FuelExhausted: return "fuel_exhausted";
  }
  return "?";
}

namespace {

struct RuntimeSignal {
  RuntimeErrorKind kind;
};
struct FuelSignal {};

class Interpreter {
 public:
  Interpreter(const Program& program, const TestCase& test, std::uint64_t fuel)
      : program_(program), test_(test), fuel_(fuel) {}

  ExecutionResult run() {
    if (test_.values.size() != program_.input_names.size())
      throw std::invalid_argument("test arity does not match program arity");
    try {
      for (const auto& s : program_.body) exec(*s);
    } catch (const RuntimeSignal& sig) {
      return ExecutionResult::runtime_error(sig.kind, steps_);
    } catch (const FuelSignal&) {
      return ExecutionResult::fuel_exhausted(steps_);
    }
    if (!printed_) return ExecutionResult::runtime_error(RuntimeErrorKind::NoPrintReached, steps_);
    if (printed_is_str_) return ExecutionResult::str_output(printed_str_, steps_);
    return ExecutionResult::int_output(printed_int_, steps_);
  }

 private:
  const Program& program_;
  const TestCase& test_;
  std::uint64_t fuel_;
  std::uint64_t steps_ = 0;
  std::unordered_map<std::string, std::int64_t> env_;
  bool printed_ = false;
  bool printed_is_str_ = false;
  std::int64_t printed_int_ = 0;
  std::string printed_str_;

  void charge() {
    if (++steps_ > fuel_) throw FuelSignal{};
  }

  std::int64_t eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return e.value;
      case Expr::Kind::Var: {
        auto it = env_.find(e.name);
        return it == env_.end() ? 0 : it->second;  // declared-but-unexecuted reads as 0
      }
      case Expr::Kind::Unary: {
        std::int64_t v = eval(*e.lhs);
        return e.uop == UnaryOp::Not ? (v == 0 ? 1 : 0) : wrap_neg(v);
      }
      case Expr::Kind::Binary: {
        // Both operands are always evaluated; && and || do not short-circuit.
        std::int64_t a = eval(*e.lhs);
        std::int64_t b = eval(*e.rhs);
        switch (e.bop) {
          case BinaryOp::Add: return wrap_add(a, b);
          case BinaryOp::Sub: return wrap_sub(a, b);
          case BinaryOp::Mul: return wrap_mul(a, b);
          case BinaryOp::Div:
            if (b == 0) throw RuntimeSignal{RuntimeErrorKind::DivideByZero};
            return wrap_div(a, b);
          case BinaryOp::Mod:
            if (b == 0) throw RuntimeSignal{RuntimeErrorKind::ModByZero};
            return wrap_mod(a, b);
          case BinaryOp::Lt: return a < b;
          case BinaryOp::Le: return a <= b;
          case BinaryOp::Gt: return a > b;
          case BinaryOp::Ge: return a >= b;
          case BinaryOp::Eq: return a == b;
          case BinaryOp::Ne: return a != b;
          case BinaryOp::And: return (a != 0 && b != 0) ? 1 : 0;
          case BinaryOp::Or: return (a != 0 || b != 0) ? 1 : 0;
        }
        return 0;
      }
    }
    return 0;
  }

  void exec(const Stmt& s) {
    charge();
    switch (s.kind) {
      case Stmt::Kind::Decl:
        env_[s.name] = s.expr ? eval(*s.expr) : 0;
        return;
      case Stmt::Kind::Assign:
        env_[s.name] = eval(*s.expr);
        return;
      case Stmt::Kind::If:
        if (eval(*s.expr) != 0) exec(*s.body);
        else if (s.else_body) exec(*s.else_body);
        return;
      case Stmt::Kind::While:
        for (;;) {
          charge();  // one step per iteration check
          if (eval(*s.expr) == 0) break;
          exec(*s.body);
        }
        return;
      case Stmt::Kind::For:
        if (s.init) exec(*s.init);
        for (;;) {
          charge();
          if (s.expr && eval(*s.expr) == 0) break;
          exec(*s.body);
          if (s.step) exec(*s.step);
        }
        return;
      case Stmt::Kind::Switch: {
        std::int64_t v = eval(*s.expr);
        for (const auto& c : s.cases) {
          if (c.label == v) {
            for (const auto& inner : c.body) exec(*inner);
            return;
          }
        }
        if (s.has_default)
          for (const auto& inner : s.default_body) exec(*inner);
        return;
      }
      case Stmt::Kind::Read:
        env_[s.name] = test_.values[static_cast<std::size_t>(s.input_slot)];
        return;
      case Stmt::Kind::PrintInt: {
        std::int64_t v = eval(*s.expr);
        if (printed_) throw RuntimeSignal{RuntimeErrorKind::MultiplePrints};
        printed_ = true;
        printed_is_str_ = false;
        printed_int_ = v;
        return;
      }
      case Stmt::Kind::PrintStr:
        if (printed_) throw RuntimeSignal{RuntimeErrorKind::MultiplePrints};
        printed_ = true;
        printed_is_str_ = true;
        printed_str_ = s.str;
        return;
      case Stmt::Kind::Block:
        for (const auto& inner : s.stmts) exec(*inner);
        return;
    }
  }
};

}  // namespace

ExecutionResult run_concrete(const Program& program, const TestCase& test, std::uint64_t fuel) {
  return Interpreter(program, test, fuel).run();
}

}  // namespace minijudge
