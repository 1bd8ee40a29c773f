#include "minijudge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace minijudge {

namespace {

// ---------------------------------------------------------------------------
// problem.spec text format
// ---------------------------------------------------------------------------

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::int64_t parse_i64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SpecParseError("bad " + what + ": '" + s + "'");
  }
}

}  // namespace

ProblemSpec parse_problem_spec(const std::string& text, const std::string& reference_source) {
  ProblemSpec spec;
  bool saw_name = false;
  bool saw_output = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto words = split_ws(line);
    if (words.empty() || words[0][0] == '#') continue;
    if (words[0] == "name") {
      if (words.size() != 2) throw SpecParseError("name directive takes one word");
      spec.name = words[1];
      saw_name = true;
    } else if (words[0] == "input") {
      if (words.size() != 4) throw SpecParseError("input directive is: input <name> <lo> <hi>");
      std::int64_t lo = parse_i64(words[2], "input lower bound");
      std::int64_t hi = parse_i64(words[3], "input upper bound");
      if (lo > hi) throw SpecParseError("input '" + words[1] + "' has lo > hi");
      spec.input_names.push_back(words[1]);
      spec.domain.bounds.push_back({lo, hi});
      if (spec.input_names.size() > 4) throw SpecParseError("more than 4 inputs declared");
    } else if (words[0] == "output") {
      if (words.size() != 2 || (words[1] != "int" && words[1] != "str"))
        throw SpecParseError("output directive is: output int|str");
      spec.output = words[1] == "int" ? OutputKind::Int : OutputKind::Str;
      saw_output = true;
    } else {
      throw SpecParseError("unknown directive '" + words[0] + "'");
    }
  }
  if (!saw_name) throw SpecParseError("problem.spec is missing the name directive");
  if (!saw_output) throw SpecParseError("problem.spec is missing the output directive");
  try {
    spec.reference = parse(reference_source);
  } catch (const std::exception& e) {
    throw SpecParseError(std::string("reference program does not parse: ") + e.what());
  }
  if (spec.reference.arity() != static_cast<int>(spec.input_names.size()))
    throw SpecParseError("reference reads " + std::to_string(spec.reference.arity()) +
                         " inputs but the spec declares " +
                         std::to_string(spec.input_names.size()));
  return spec;
}

std::string serialize_problem_spec(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "name " << spec.name << "\n";
  for (std::size_t i = 0; i < spec.input_names.size(); ++i)
    out << "input " << spec.input_names[i] << " " << spec.domain.bounds[i].lo << " "
        << spec.domain.bounds[i].hi << "\n";
  out << "output " << (spec.output == OutputKind::Int ? "int" : "str") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Corpus directory I/O
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

LoadedCorpus load_corpus(const std::filesystem::path& dir) {
  LoadedCorpus corpus;
  if (!std::filesystem::exists(dir / "manifest.txt"))
    throw MissingManifest("no manifest.txt in " + dir.string());
  if (!std::filesystem::exists(dir / "problem.spec"))
    throw SpecParseError("no problem.spec in " + dir.string());
  if (!std::filesystem::exists(dir / "reference.mc"))
    throw SpecParseError("no reference.mc in " + dir.string());
  corpus.spec = parse_problem_spec(read_file(dir / "problem.spec"), read_file(dir / "reference.mc"));

  std::set<std::string> seen_ids;
  std::istringstream manifest(read_file(dir / "manifest.txt"));
  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4)
      throw SpecParseError("manifest line " + std::to_string(line_no) +
                           ": expected 3 or 4 tab-separated fields");
    Submission sub;
    sub.id = fields[0];
    if (!seen_ids.insert(sub.id).second)
      throw DuplicateId("duplicate submission id '" + sub.id + "'");
    sub.timestamp = parse_i64(fields[1], "manifest timestamp");
    const std::string& filename = fields[2];
    if (fields.size() == 4) {
      if (fields[3] == "correct") sub.claimed_correct = true;
      else if (fields[3] == "incorrect") sub.claimed_correct = false;
      else
        throw SpecParseError("manifest line " + std::to_string(line_no) +
                             ": verdict must be 'correct' or 'incorrect'");
    }
    auto path = dir / filename;
    if (!std::filesystem::exists(path)) {
      corpus.pruned.push_back({sub.id, filename, "file missing"});
      continue;
    }
    sub.source = read_file(path);
    try {
      Program p = parse(sub.source);
      if (p.arity() != static_cast<int>(corpus.spec.domain.arity())) {
        corpus.pruned.push_back(
            {sub.id, filename,
             "reads " + std::to_string(p.arity()) + " inputs, task has " +
                 std::to_string(corpus.spec.domain.arity())});
        continue;
      }
    } catch (const std::exception& e) {
      corpus.pruned.push_back({sub.id, filename, std::string("parse error: ") + e.what()});
      continue;
    }
    corpus.submissions.push_back(std::move(sub));
  }
  std::sort(corpus.submissions.begin(), corpus.submissions.end(),
            [](const Submission& a, const Submission& b) {
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.id < b.id;
            });
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const ProblemSpec& spec,
                  const std::vector<Submission>& submissions) {
  std::filesystem::create_directories(dir);
  auto write_file = [&](const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw CorpusError("cannot write " + p.string());
    out << content;
  };
  write_file(dir / "problem.spec", serialize_problem_spec(spec));
  write_file(dir / "reference.mc", render(spec.reference));
  std::ostringstream manifest;
  for (const auto& sub : submissions) {
    std::string filename = sub.id + ".mc";
    manifest << sub.id << "\t" << sub.timestamp << "\t" << filename;
    if (sub.claimed_correct.has_value())
      manifest << "\t" << (*sub.claimed_correct ? "correct" : "incorrect");
    manifest << "\n";
    write_file(dir / filename, sub.source);
  }
  write_file(dir / "manifest.txt", manifest.str());
}

// ---------------------------------------------------------------------------
// AST rewriting machinery
// ---------------------------------------------------------------------------

namespace {

using ExprFn = std::function<ExprPtr(const ExprPtr&)>;
using StmtFn = std::function<StmtPtr(const StmtPtr&)>;
using SeqFn = std::function<void(std::vector<StmtPtr>&)>;

struct RewriteHooks {
  ExprFn expr;   // pre-order over every expression node; non-null return replaces
  StmtFn stmt;   // pre-order over every statement; non-null return replaces, stops descent
  SeqFn seq;     // runs on every rebuilt statement sequence
};

ExprPtr map_expr(const ExprPtr& e, const ExprFn& fn) {
  if (!e) return e;
  if (fn) {
    if (ExprPtr r = fn(e)) return r;
  }
  switch (e->kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::Var: return e;
    case Expr::Kind::Unary: {
      ExprPtr child = map_expr(e->lhs, fn);
      return child == e->lhs ? e : make_unary(e->uop, child);
    }
    case Expr::Kind::Binary: {
      ExprPtr l = map_expr(e->lhs, fn);
      ExprPtr r = map_expr(e->rhs, fn);
      return (l == e->lhs && r == e->rhs) ? e : make_binary(e->bop, l, r);
    }
  }
  return e;
}

StmtPtr map_stmt(const StmtPtr& s, const RewriteHooks& hooks);

std::vector<StmtPtr> map_seq(const std::vector<StmtPtr>& seq, const RewriteHooks& hooks) {
  std::vector<StmtPtr> out;
  out.reserve(seq.size());
  for (const auto& s : seq) out.push_back(map_stmt(s, hooks));
  if (hooks.seq) hooks.seq(out);
  return out;
}

StmtPtr map_stmt(const StmtPtr& s, const RewriteHooks& hooks) {
  if (!s) return s;
  if (hooks.stmt) {
    if (StmtPtr r = hooks.stmt(s)) return r;
  }
  auto copy = std::make_shared<Stmt>(*s);
  switch (s->kind) {
    case Stmt::Kind::Decl:
    case Stmt::Kind::Assign:
    case Stmt::Kind::PrintInt:
      copy->expr = map_expr(s->expr, hooks.expr);
      break;
    case Stmt::Kind::If:
      copy->expr = map_expr(s->expr, hooks.expr);
      copy->body = map_stmt(s->body, hooks);
      copy->else_body = map_stmt(s->else_body, hooks);
      break;
    case Stmt::Kind::While:
      copy->expr = map_expr(s->expr, hooks.expr);
      copy->body = map_stmt(s->body, hooks);
      break;
    case Stmt::Kind::For:
      copy->init = map_stmt(s->init, hooks);
      copy->expr = map_expr(s->expr, hooks.expr);
      copy->step = map_stmt(s->step, hooks);
      copy->body = map_stmt(s->body, hooks);
      break;
    case Stmt::Kind::Switch:
      copy->expr = map_expr(s->expr, hooks.expr);
      for (auto& c : copy->cases) c.body = map_seq(c.body, hooks);
      copy->default_body = map_seq(s->default_body, hooks);
      break;
    case Stmt::Kind::Read:
    case Stmt::Kind::PrintStr:
      break;
    case Stmt::Kind::Block:
      copy->stmts = map_seq(s->stmts, hooks);
      break;
  }
  return copy;
}

Program map_program(const Program& p, const RewriteHooks& hooks) {
  Program out;
  out.input_names = p.input_names;
  out.body = map_seq(p.body, hooks);
  return out;
}

bool expr_contains(const ExprPtr& e, const std::function<bool(const Expr&)>& pred) {
  if (!e) return false;
  if (pred(*e)) return true;
  if (e->kind == Expr::Kind::Unary) return expr_contains(e->lhs, pred);
  if (e->kind == Expr::Kind::Binary)
    return expr_contains(e->lhs, pred) || expr_contains(e->rhs, pred);
  return false;
}

bool has_div_or_mod(const ExprPtr& e) {
  return expr_contains(e, [](const Expr& n) {
    return n.kind == Expr::Kind::Binary && (n.bop == BinaryOp::Div || n.bop == BinaryOp::Mod);
  });
}

bool references_name(const ExprPtr& e, const std::string& name) {
  return expr_contains(e, [&](const Expr& n) {
    return n.kind == Expr::Kind::Var && n.name == name;
  });
}

void collect_declared_names(const Program& p, std::vector<std::string>& out) {
  RewriteHooks hooks;
  hooks.stmt = [&](const StmtPtr& s) -> StmtPtr {
    if (s->kind == Stmt::Kind::Decl || s->kind == Stmt::Kind::Read) out.push_back(s->name);
    return nullptr;
  };
  map_program(p, hooks);
}

// ---------------------------------------------------------------------------
// Semantics-preserving mutations. Rewrites guard against operand reordering
// around / and %, whose error kind depends on evaluation order.
// ---------------------------------------------------------------------------

const std::vector<std::string>& name_pool() {
  static const std::vector<std::string> pool = {
      "a",   "b",   "c",    "d",    "e",    "i",    "j",   "k",    "m",    "n",
      "p",   "q",   "r",    "s",    "t",    "u",    "v",   "w",    "x",    "y",
      "z",   "num", "val",  "ans",  "res",  "cnt",  "sum", "acc",  "cur",  "tot",
      "lo",  "hi",  "mid",  "best", "next", "prev", "left", "right", "days", "rem"};
  return pool;
}

// Applies fn to the k-th expression node satisfying pred; k counted pre-order.
Program rewrite_kth_expr(const Program& p, const std::function<bool(const Expr&)>& pred,
                         const std::function<ExprPtr(const ExprPtr&)>& fn, int k) {
  int seen = 0;
  RewriteHooks hooks;
  hooks.expr = [&](const ExprPtr& e) -> ExprPtr {
    if (!pred(*e)) return nullptr;
    if (seen++ == k) return fn(e);
    return nullptr;
  };
  return map_program(p, hooks);
}

int count_expr_sites(const Program& p, const std::function<bool(const Expr&)>& pred) {
  int n = 0;
  RewriteHooks hooks;
  hooks.expr = [&](const ExprPtr& e) -> ExprPtr {
    if (pred(*e)) ++n;
    return nullptr;
  };
  map_program(p, hooks);
  return n;
}

Program rewrite_kth_stmt(const Program& p, const std::function<bool(const Stmt&)>& pred,
                         const std::function<StmtPtr(const StmtPtr&)>& fn, int k) {
  int seen = 0;
  RewriteHooks hooks;
  hooks.stmt = [&](const StmtPtr& s) -> StmtPtr {
    if (!pred(*s)) return nullptr;
    if (seen++ == k) return fn(s);
    return nullptr;
  };
  return map_program(p, hooks);
}

int count_stmt_sites(const Program& p, const std::function<bool(const Stmt&)>& pred) {
  int n = 0;
  RewriteHooks hooks;
  hooks.stmt = [&](const StmtPtr& s) -> StmtPtr {
    if (pred(*s)) ++n;
    return nullptr;
  };
  map_program(p, hooks);
  return n;
}

bool commutative_site(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return false;
  if (e.bop != BinaryOp::Add && e.bop != BinaryOp::Mul && e.bop != BinaryOp::Eq &&
      e.bop != BinaryOp::Ne)
    return false;
  return !has_div_or_mod(e.lhs) && !has_div_or_mod(e.rhs);
}

bool relational_site(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return false;
  if (e.bop != BinaryOp::Lt && e.bop != BinaryOp::Le && e.bop != BinaryOp::Gt &&
      e.bop != BinaryOp::Ge)
    return false;
  return !has_div_or_mod(e.lhs) && !has_div_or_mod(e.rhs);
}

BinaryOp mirrored(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: return BinaryOp::Gt;
    case BinaryOp::Le: return BinaryOp::Ge;
    case BinaryOp::Gt: return BinaryOp::Lt;
    case BinaryOp::Ge: return BinaryOp::Le;
    default: return op;
  }
}

}  // namespace

Program mutate_rename(const Program& p, RandomSource& rng) {
  std::vector<std::string> names;
  collect_declared_names(p, names);
  if (names.empty()) return p;
  std::set<std::string> taken;
  std::vector<std::string> fresh;
  const auto& pool = name_pool();
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string pick;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const std::string& c = pool[static_cast<std::size_t>(rng.below(pool.size()))];
      if (!taken.count(c)) {
        pick = c;
        break;
      }
    }
    if (pick.empty()) pick = "v" + std::to_string(i);
    while (taken.count(pick)) pick += "x";
    taken.insert(pick);
    fresh.push_back(pick);
  }
  std::unordered_map<std::string, std::string> ren;
  for (std::size_t i = 0; i < names.size(); ++i) ren[names[i]] = fresh[i];
  auto mapped = [&ren](const std::string& n) {
    auto it = ren.find(n);
    return it == ren.end() ? n : it->second;
  };
  RewriteHooks hooks;
  hooks.expr = [&](const ExprPtr& e) -> ExprPtr {
    if (e->kind == Expr::Kind::Var && ren.count(e->name)) return make_var(ren.at(e->name));
    return nullptr;
  };
  // Renaming statement name fields happens after descent, so the stmt hook
  // cannot be used (it would stop the walk). Patch names in a second pass.
  std::function<StmtPtr(const StmtPtr&)> patch = [&](const StmtPtr& s) -> StmtPtr {
    if (!s) return s;
    auto copy = std::make_shared<Stmt>(*s);
    if (s->kind == Stmt::Kind::Decl || s->kind == Stmt::Kind::Assign ||
        s->kind == Stmt::Kind::Read)
      copy->name = mapped(s->name);
    copy->body = patch(copy->body);
    copy->else_body = patch(copy->else_body);
    copy->init = patch(copy->init);
    copy->step = patch(copy->step);
    for (auto& c : copy->cases)
      for (auto& inner : c.body) inner = patch(inner);
    for (auto& inner : copy->default_body) inner = patch(inner);
    for (auto& inner : copy->stmts) inner = patch(inner);
    return copy;
  };
  Program renamed = map_program(p, hooks);
  for (auto& s : renamed.body) s = patch(s);
  renamed.input_names.clear();
  for (const auto& n : p.input_names) renamed.input_names.push_back(mapped(n));
  return renamed;
}

Program mutate_swap_commutative(const Program& p, RandomSource& rng) {
  int sites = count_expr_sites(p, commutative_site);
  if (sites == 0) return p;
  int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
  return rewrite_kth_expr(p, commutative_site,
                          [](const ExprPtr& e) { return make_binary(e->bop, e->rhs, e->lhs); }, k);
}

Program mutate_rewrite_relational(const Program& p, RandomSource& rng) {
  int sites = count_expr_sites(p, relational_site);
  if (sites == 0) return p;
  int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
  return rewrite_kth_expr(
      p, relational_site,
      [](const ExprPtr& e) { return make_binary(mirrored(e->bop), e->rhs, e->lhs); }, k);
}

Program mutate_introduce_temp(const Program& p, RandomSource& rng) {
  // Candidate sequence positions: print/assign/initialized-decl statements
  // whose expression can be hoisted into a fresh temporary.
  auto is_candidate = [](const StmtPtr& s) {
    return s->kind == Stmt::Kind::PrintInt || s->kind == Stmt::Kind::Assign ||
           (s->kind == Stmt::Kind::Decl && s->expr);
  };
  int sites = 0;
  {
    RewriteHooks counter;
    counter.seq = [&](std::vector<StmtPtr>& seq) {
      for (const auto& s : seq)
        if (is_candidate(s)) ++sites;
    };
    map_program(p, counter);
  }
  if (sites == 0) return p;
  int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));

  std::vector<std::string> declared;
  collect_declared_names(p, declared);
  std::set<std::string> taken(declared.begin(), declared.end());
  std::string temp = "tmp";
  for (int i = 2; taken.count(temp); ++i) temp = "tmp" + std::to_string(i);

  int seen = 0;
  RewriteHooks hooks;
  hooks.seq = [&](std::vector<StmtPtr>& seq) {
    for (auto& s : seq) {
      if (!is_candidate(s)) continue;
      if (seen++ != target) continue;
      auto decl = std::make_shared<Stmt>();
      decl->kind = Stmt::Kind::Decl;
      decl->name = temp;
      decl->expr = s->expr;
      auto use = std::make_shared<Stmt>(*s);
      use->expr = make_var(temp);
      auto block = std::make_shared<Stmt>();
      block->kind = Stmt::Kind::Block;
      block->stmts = {decl, use};
      s = block;
    }
  };
  return map_program(p, hooks);
}

Program mutate_reorder_decls(const Program& p, RandomSource& rng) {
  auto swappable = [](const StmtPtr& a, const StmtPtr& b) {
    if (a->kind != Stmt::Kind::Decl || b->kind != Stmt::Kind::Decl) return false;
    if (has_div_or_mod(a->expr) || has_div_or_mod(b->expr)) return false;
    return !references_name(b->expr, a->name) && !references_name(a->expr, b->name);
  };
  int sites = 0;
  {
    RewriteHooks counter;
    counter.seq = [&](std::vector<StmtPtr>& seq) {
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (swappable(seq[i], seq[i + 1])) ++sites;
    };
    map_program(p, counter);
  }
  if (sites == 0) return p;
  int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
  int seen = 0;
  RewriteHooks hooks;
  hooks.seq = [&](std::vector<StmtPtr>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (!swappable(seq[i], seq[i + 1])) continue;
      if (seen++ == target) std::swap(seq[i], seq[i + 1]);
    }
  };
  return map_program(p, hooks);
}

// ---------------------------------------------------------------------------
// Bug-injecting mutations
// ---------------------------------------------------------------------------

const std::vector<std::string>& bug_mutation_names() {
  static const std::vector<std::string> names = {"off_by_one", "op_subst", "wrong_power",
                                                 "drop_else", "swap_branches"};
  return names;
}

std::optional<Program> apply_bug_mutation(const Program& p, std::size_t index,
                                          RandomSource& rng) {
  switch (index) {
    case 0: {  // off_by_one: nudge an integer literal by ±1
      auto pred = [](const Expr& e) { return e.kind == Expr::Kind::IntLit; };
      int sites = count_expr_sites(p, pred);
      if (sites == 0) return std::nullopt;
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
      std::int64_t delta = rng.below(2) == 0 ? 1 : -1;
      return rewrite_kth_expr(
          p, pred, [&](const ExprPtr& e) { return make_int(wrap_add(e->value, delta)); }, k);
    }
    case 1: {  // op_subst: + <-> -, * -> +, and relax/tighten comparisons
      auto subst = [](BinaryOp op) -> std::optional<BinaryOp> {
        switch (op) {
          case BinaryOp::Add: return BinaryOp::Sub;
          case BinaryOp::Sub: return BinaryOp::Add;
          case BinaryOp::Mul: return BinaryOp::Add;
          case BinaryOp::Lt: return BinaryOp::Le;
          case BinaryOp::Le: return BinaryOp::Lt;
          case BinaryOp::Gt: return BinaryOp::Ge;
          case BinaryOp::Ge: return BinaryOp::Gt;
          default: return std::nullopt;
        }
      };
      auto pred = [&](const Expr& e) {
        return e.kind == Expr::Kind::Binary && subst(e.bop).has_value();
      };
      int sites = count_expr_sites(p, pred);
      if (sites == 0) return std::nullopt;
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
      return rewrite_kth_expr(
          p, pred, [&](const ExprPtr& e) { return make_binary(*subst(e->bop), e->lhs, e->rhs); },
          k);
    }
    case 2: {  // wrong_power: a*b -> (a*b)*a, one power too many
      auto pred = [](const Expr& e) {
        return e.kind == Expr::Kind::Binary && e.bop == BinaryOp::Mul;
      };
      int sites = count_expr_sites(p, pred);
      if (sites == 0) return std::nullopt;
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
      return rewrite_kth_expr(
          p, pred,
          [](const ExprPtr& e) {
            return make_binary(BinaryOp::Mul, make_binary(BinaryOp::Mul, e->lhs, e->rhs), e->lhs);
          },
          k);
    }
    case 3: {  // drop_else
      auto pred = [](const Stmt& s) {
        return s.kind == Stmt::Kind::If && s.else_body != nullptr;
      };
      int sites = count_stmt_sites(p, pred);
      if (sites == 0) return std::nullopt;
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
      return rewrite_kth_stmt(
          p, pred,
          [](const StmtPtr& s) {
            auto copy = std::make_shared<Stmt>(*s);
            copy->else_body = nullptr;
            return copy;
          },
          k);
    }
    case 4: {  // swap_branches
      auto pred = [](const Stmt& s) {
        return s.kind == Stmt::Kind::If && s.else_body != nullptr;
      };
      int sites = count_stmt_sites(p, pred);
      if (sites == 0) return std::nullopt;
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(sites)));
      return rewrite_kth_stmt(
          p, pred,
          [](const StmtPtr& s) {
            auto copy = std::make_shared<Stmt>(*s);
            std::swap(copy->body, copy->else_body);
            return copy;
          },
          k);
    }
    default: throw std::out_of_range("bug mutation index");
  }
}

// ---------------------------------------------------------------------------
// Corpus generation
// ---------------------------------------------------------------------------

namespace {

Program apply_cluster_recipe(const Program& reference, int cluster, RandomSource& rng) {
  Program p = mutate_rename(reference, rng);
  if (cluster & 1) p = mutate_rewrite_relational(p, rng);
  if (cluster & 2) p = mutate_swap_commutative(p, rng);
  if (cluster & 4) p = mutate_introduce_temp(p, rng);
  if (cluster & 8) p = mutate_reorder_decls(p, rng);
  return p;
}

void validate_profile(const ProblemSpec& spec, const GenerationProfile& profile) {
  if (profile.count < 0) throw ProfileInfeasible("count must be nonnegative");
  if (profile.correct_fraction < 0.0 || profile.correct_fraction > 1.0)
    throw ProfileInfeasible("correct fraction must lie in [0,1]");
  if (profile.clusters < 1) throw ProfileInfeasible("at least one strategy cluster required");
  if (!profile.decile_correct_fraction.empty()) {
    if (profile.decile_correct_fraction.size() != 10)
      throw ProfileInfeasible("decile curve must have exactly 10 entries");
    for (double f : profile.decile_correct_fraction)
      if (f < 0.0 || f > 1.0) throw ProfileInfeasible("decile fractions must lie in [0,1]");
  }
  if (!profile.bug_weights.empty()) {
    if (profile.bug_weights.size() != bug_mutation_names().size())
      throw ProfileInfeasible("bug weight vector must match the catalog size");
    double sum = 0;
    for (double w : profile.bug_weights) {
      if (w < 0) throw ProfileInfeasible("bug weights must be nonnegative");
      sum += w;
    }
    if (sum == 0) throw ProfileInfeasible("bug weights must not all be zero");
  }
  (void)spec;
}

std::vector<bool> layout_labels(const GenerationProfile& profile, RandomSource& rng) {
  int count = profile.count;
  std::vector<bool> correct(static_cast<std::size_t>(count), false);
  if (!profile.decile_correct_fraction.empty()) {
    int start = 0;
    for (int d = 0; d < 10; ++d) {
      int end = static_cast<int>((static_cast<std::int64_t>(count) * (d + 1)) / 10);
      int size = end - start;
      int want = static_cast<int>(std::llround(profile.decile_correct_fraction[static_cast<std::size_t>(d)] * size));
      std::vector<bool> slice(static_cast<std::size_t>(size), false);
      for (int i = 0; i < want; ++i) slice[static_cast<std::size_t>(i)] = true;
      std::vector<int> order(static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i) order[static_cast<std::size_t>(i)] = i;
      rng.shuffle(order);
      for (int i = 0; i < size; ++i)
        correct[static_cast<std::size_t>(start + i)] = slice[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      start = end;
    }
  } else {
    int want = static_cast<int>(std::llround(profile.correct_fraction * count));
    for (int i = 0; i < want; ++i) correct[static_cast<std::size_t>(i)] = true;
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<bool> shuffled(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      shuffled[static_cast<std::size_t>(i)] = correct[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    correct = std::move(shuffled);
  }
  return correct;
}

std::size_t pick_weighted(const std::vector<double>& weights, RandomSource& rng) {
  double sum = 0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += weights[i];
    if (weights[i] > 0) last_nonzero = i;
  }
  double r = rng.unit() * sum;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0) continue;
    acc += weights[i];
    if (r < acc) return i;
  }
  return last_nonzero;
}

}  // namespace

std::vector<Submission> generate_corpus(const ProblemSpec& spec, const GenerationProfile& profile,
                                        std::uint64_t rng_seed) {
  validate_profile(spec, profile);
  RandomSource rng(rng_seed);

  std::vector<bool> intended = layout_labels(profile, rng);
  int incorrect_needed = 0;
  for (bool c : intended)
    if (!c) ++incorrect_needed;
  std::vector<double> weights =
      profile.bug_weights.empty() ? std::vector<double>(bug_mutation_names().size(), 1.0)
                                  : profile.bug_weights;
  if (incorrect_needed > 0) {
    bool any_applicable = false;
    for (std::size_t i = 0; i < weights.size() && !any_applicable; ++i) {
      if (weights[i] == 0) continue;
      RandomSource probe(1);
      if (apply_bug_mutation(spec.reference, i, probe).has_value()) any_applicable = true;
    }
    if (!any_applicable)
      throw ProfileInfeasible("no weighted bug mutation applies to this reference");
  }

  std::vector<Submission> out;
  out.reserve(static_cast<std::size_t>(profile.count));
  int id_width = 4;
  for (int w = profile.count; w >= 10000; w /= 10) ++id_width;
  std::int64_t ts = 1700000000 + static_cast<std::int64_t>(rng.below(3600));

  for (int i = 0; i < profile.count; ++i) {
    bool correct = intended[static_cast<std::size_t>(i)];
    Program prog;
    if (correct) {
      int cluster = static_cast<int>(rng.below(static_cast<std::uint64_t>(profile.clusters)));
      prog = apply_cluster_recipe(spec.reference, cluster, rng);
    } else {
      Program base = mutate_rename(spec.reference, rng);
      std::size_t pick = pick_weighted(weights, rng);
      std::optional<Program> mutated;
      for (std::size_t attempt = 0; attempt < weights.size(); ++attempt) {
        std::size_t idx = (pick + attempt) % weights.size();
        if (weights[idx] == 0) continue;
        mutated = apply_bug_mutation(base, idx, rng);
        if (mutated.has_value()) break;
      }
      if (!mutated.has_value())
        throw ProfileInfeasible("no bug mutation applies to this reference");
      prog = std::move(*mutated);
    }

    Submission sub;
    std::ostringstream id;
    id << "s";
    std::string digits = std::to_string(i + 1);
    id << std::string(static_cast<std::size_t>(id_width) - std::min<std::size_t>(digits.size(), static_cast<std::size_t>(id_width)), '0') << digits;
    sub.id = id.str();
    sub.timestamp = ts;
    ts += 1 + static_cast<std::int64_t>(rng.below(600));
    sub.source = render(prog);
    sub.claimed_correct = correct;
    // Invariant: everything the generator emits parses and matches arity.
    Program check = parse(sub.source);
    if (check.arity() != static_cast<int>(spec.domain.arity()))
      throw CorpusError("generated submission changed arity");
    out.push_back(std::move(sub));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

// Ascending odometer walk of every domain point; fn returns false to stop.
void for_each_point(const InputDomain& domain, const std::function<bool(const TestCase&)>& fn) {
  std::vector<std::int64_t> point;
  point.reserve(domain.bounds.size());
  for (const auto& b : domain.bounds) point.push_back(b.lo);
  for (;;) {
    if (!fn(TestCase{point})) return;
    int k = static_cast<int>(point.size()) - 1;
    while (k >= 0) {
      auto i = static_cast<std::size_t>(k);
      if (point[i] == domain.bounds[i].hi) {
        point[i] = domain.bounds[i].lo;
        --k;
      } else {
        ++point[i];
        break;
      }
    }
    if (k < 0) return;
  }
}

void check_oracle_preconditions(const ProblemSpec& spec, const Program& submission,
                                std::uint64_t cap) {
  if (spec.domain.size_capped() > cap)
    throw DomainTooLarge("domain has " + std::to_string(spec.domain.size_capped()) +
                         " points, cap is " + std::to_string(cap));
  if (submission.arity() != static_cast<int>(spec.domain.arity()))
    throw std::invalid_argument("submission arity does not match the task");
}

}  // namespace

OracleVerdict oracle_label(const ProblemSpec& spec, const Program& submission, std::uint64_t cap) {
  check_oracle_preconditions(spec, submission, cap);
  OracleVerdict verdict;
  verdict.correct = true;
  for_each_point(spec.domain, [&](const TestCase& t) {
    if (!same_outcome(run_concrete(spec.reference, t), run_concrete(submission, t))) {
      verdict.correct = false;
      verdict.witness = t;
      return false;
    }
    return true;
  });
  return verdict;
}

OracleTable::OracleTable(const ProblemSpec& spec, std::uint64_t cap) : spec_(spec) {
  if (spec.domain.size_capped() > cap)
    throw DomainTooLarge("domain has " + std::to_string(spec.domain.size_capped()) +
                         " points, cap is " + std::to_string(cap));
  points_.reserve(spec.domain.size_capped());
  for_each_point(spec.domain, [&](const TestCase& t) {
    points_.push_back(t);
    reference_out_.push_back(run_concrete(spec.reference, t));
    return true;
  });
}

OracleVerdict OracleTable::label(const Program& submission) const {
  if (submission.arity() != static_cast<int>(spec_.domain.arity()))
    throw std::invalid_argument("submission arity does not match the task");
  OracleVerdict verdict;
  verdict.correct = true;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!same_outcome(reference_out_[i], run_concrete(submission, points_[i]))) {
      verdict.correct = false;
      verdict.witness = points_[i];
      return verdict;
    }
  }
  return verdict;
}

}  // namespace minijudge
