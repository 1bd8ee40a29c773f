#include "minijudge/symex.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>

namespace minijudge {

namespace {
constexpr std::int64_t kI64Min = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kI64Max = std::numeric_limits<std::int64_t>::max();
using i128 = __int128;
using u128 = unsigned __int128;
}  // namespace

// ---------------------------------------------------------------------------
// SymExpr construction, equality, printing, evaluation
// ---------------------------------------------------------------------------

SymExprPtr sym_const(std::int64_t value) {
  auto e = std::make_shared<SymExpr>();
  e->kind = SymExpr::Kind::Const;
  e->value = value;
  return e;
}

SymExprPtr sym_input(int slot) {
  auto e = std::make_shared<SymExpr>();
  e->kind = SymExpr::Kind::Input;
  e->input = slot;
  return e;
}

SymExprPtr sym_unary(UnaryOp op, SymExprPtr operand) {
  if (operand->kind == SymExpr::Kind::Const) {
    if (op == UnaryOp::Neg) return sym_const(wrap_neg(operand->value));
    return sym_const(operand->value == 0 ? 1 : 0);
  }
  auto e = std::make_shared<SymExpr>();
  e->kind = SymExpr::Kind::Unary;
  e->uop = op;
  e->lhs = std::move(operand);
  return e;
}

SymExprPtr sym_binary(BinaryOp op, SymExprPtr lhs, SymExprPtr rhs) {
  if (lhs->kind == SymExpr::Kind::Const && rhs->kind == SymExpr::Kind::Const) {
    std::int64_t a = lhs->value;
    std::int64_t b = rhs->value;
    bool foldable = true;
    std::int64_t v = 0;
    switch (op) {
      case BinaryOp::Add: v = wrap_add(a, b); break;
      case BinaryOp::Sub: v = wrap_sub(a, b); break;
      case BinaryOp::Mul: v = wrap_mul(a, b); break;
      case BinaryOp::Div:
        if (b == 0) foldable = false;  // the explorer forks this into an error path
        else v = wrap_div(a, b);
        break;
      case BinaryOp::Mod:
        if (b == 0) foldable = false;
        else v = wrap_mod(a, b);
        break;
      case BinaryOp::Lt: v = a < b; break;
      case BinaryOp::Le: v = a <= b; break;
      case BinaryOp::Gt: v = a > b; break;
      case BinaryOp::Ge: v = a >= b; break;
      case BinaryOp::Eq: v = a == b; break;
      case BinaryOp::Ne: v = a != b; break;
      case BinaryOp::And: v = (a != 0 && b != 0); break;
      case BinaryOp::Or: v = (a != 0 || b != 0); break;
    }
    if (foldable) return sym_const(v);
  }
  auto e = std::make_shared<SymExpr>();
  e->kind = SymExpr::Kind::Binary;
  e->bop = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool sym_equal(const SymExpr& a, const SymExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SymExpr::Kind::Const: return a.value == b.value;
    case SymExpr::Kind::Input: return a.input == b.input;
    case SymExpr::Kind::Unary: return a.uop == b.uop && sym_equal(*a.lhs, *b.lhs);
    case SymExpr::Kind::Binary:
      return a.bop == b.bop && sym_equal(*a.lhs, *b.lhs) && sym_equal(*a.rhs, *b.rhs);
  }
  return false;
}

namespace {
const char* sym_op_text(BinaryOp op) {
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
}  // namespace

std::string sym_to_string(const SymExpr& e) {
  switch (e.kind) {
    case SymExpr::Kind::Const: return std::to_string(e.value);
    case SymExpr::Kind::Input: return "in" + std::to_string(e.input);
    case SymExpr::Kind::Unary:
      return std::string(e.uop == UnaryOp::Not ? "!" : "-") + "(" + sym_to_string(*e.lhs) + ")";
    case SymExpr::Kind::Binary:
      return "(" + sym_to_string(*e.lhs) + " " + sym_op_text(e.bop) + " " +
             sym_to_string(*e.rhs) + ")";
  }
  return "?";
}

std::optional<std::int64_t> sym_eval(const SymExpr& e, const TestCase& inputs) {
  switch (e.kind) {
    case SymExpr::Kind::Const: return e.value;
    case SymExpr::Kind::Input: return inputs.values.at(static_cast<std::size_t>(e.input));
    case SymExpr::Kind::Unary: {
      auto v = sym_eval(*e.lhs, inputs);
      if (!v) return std::nullopt;
      return e.uop == UnaryOp::Neg ? wrap_neg(*v) : (*v == 0 ? 1 : 0);
    }
    case SymExpr::Kind::Binary: {
      if (e.bop == BinaryOp::And) {
        auto a = sym_eval(*e.lhs, inputs);
        if (!a) return std::nullopt;
        if (*a == 0) return 0;
        auto b = sym_eval(*e.rhs, inputs);
        if (!b) return std::nullopt;
        return *b != 0 ? 1 : 0;
      }
      if (e.bop == BinaryOp::Or) {
        auto a = sym_eval(*e.lhs, inputs);
        if (!a) return std::nullopt;
        if (*a != 0) return 1;
        auto b = sym_eval(*e.rhs, inputs);
        if (!b) return std::nullopt;
        return *b != 0 ? 1 : 0;
      }
      auto a = sym_eval(*e.lhs, inputs);
      auto b = sym_eval(*e.rhs, inputs);
      if (!a || !b) return std::nullopt;
      switch (e.bop) {
        case BinaryOp::Add: return wrap_add(*a, *b);
        case BinaryOp::Sub: return wrap_sub(*a, *b);
        case BinaryOp::Mul: return wrap_mul(*a, *b);
        case BinaryOp::Div:
          if (*b == 0) return std::nullopt;
          return wrap_div(*a, *b);
        case BinaryOp::Mod:
          if (*b == 0) return std::nullopt;
          return wrap_mod(*a, *b);
        case BinaryOp::Lt: return *a < *b;
        case BinaryOp::Le: return *a <= *b;
        case BinaryOp::Gt: return *a > *b;
        case BinaryOp::Ge: return *a >= *b;
        case BinaryOp::Eq: return *a == *b;
        case BinaryOp::Ne: return *a != *b;
        case BinaryOp::And:
        case BinaryOp::Or: return std::nullopt;  // handled above
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool satisfies(const std::vector<SymExprPtr>& conjuncts, const TestCase& t) {
  for (const auto& c : conjuncts) {
    auto v = sym_eval(*c, t);
    if (!v || *v == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// InputDomain
// ---------------------------------------------------------------------------

bool InputDomain::contains(const TestCase& t) const {
  if (t.values.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (t.values[i] < bounds[i].lo || t.values[i] > bounds[i].hi) return false;
  return true;
}

std::uint64_t InputDomain::size_capped() const {
  u128 total = 1;
  for (const auto& b : bounds) {
    u128 span = static_cast<u128>(static_cast<std::uint64_t>(b.hi) -
                                  static_cast<std::uint64_t>(b.lo)) +
                1;
    total *= span;
    if (total > static_cast<u128>(kI64Max)) return static_cast<std::uint64_t>(kI64Max);
  }
  return static_cast<std::uint64_t>(total);
}

PathOutput PathOutput::int_expr(SymExprPtr e) {
  PathOutput p;
  p.kind = Kind::IntExpr;
  p.expr = std::move(e);
  return p;
}

PathOutput PathOutput::str_lit(std::string s) {
  PathOutput p;
  p.kind = Kind::StrLit;
  p.str = std::move(s);
  return p;
}

PathOutput PathOutput::error_out(RuntimeErrorKind k) {
  PathOutput p;
  p.kind = Kind::Error;
  p.error = k;
  return p;
}

// ---------------------------------------------------------------------------
// Interval narrowing
// ---------------------------------------------------------------------------

namespace {

struct Interval {
  std::int64_t lo = kI64Min;
  std::int64_t hi = kI64Max;

  bool empty() const { return lo > hi; }
  bool singleton() const { return lo == hi; }
  bool excludes_zero() const { return lo > 0 || hi < 0; }
  bool is_false() const { return lo == 0 && hi == 0; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

Interval full_interval() { return {kI64Min, kI64Max}; }
Interval empty_interval() { return {1, 0}; }
Interval point(std::int64_t v) { return {v, v}; }
Interval unit_range() { return {0, 1}; }

Interval meet(const Interval& a, const Interval& b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  return r;
}

// Clamps an exact 128-bit range to what an int64 node can hold. Values the
// child cannot take are cut, not widened.
Interval clamp128(i128 lo, i128 hi) {
  if (hi < static_cast<i128>(kI64Min) || lo > static_cast<i128>(kI64Max)) return empty_interval();
  if (lo < static_cast<i128>(kI64Min)) lo = kI64Min;
  if (hi > static_cast<i128>(kI64Max)) hi = kI64Max;
  return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

// Exact range when it fits in int64, otherwise the full range (wrapping makes
// every value reachable once the exact range leaves the representable band).
Interval widen128(i128 lo, i128 hi) {
  if (lo < static_cast<i128>(kI64Min) || hi > static_cast<i128>(kI64Max)) return full_interval();
  return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

i128 floor_div_i128(i128 a, i128 b) {
  i128 q = a / b;
  i128 r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div_i128(i128 a, i128 b) { return -floor_div_i128(-a, b); }

bool is_bool_node(const SymExpr& e) {
  if (e.kind == SymExpr::Kind::Unary) return e.uop == UnaryOp::Not;
  if (e.kind != SymExpr::Kind::Binary) return false;
  switch (e.bop) {
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::And:
    case BinaryOp::Or: return true;
    default: return false;
  }
}

class BoxNarrower {
 public:
  BoxNarrower(const std::vector<SymExprPtr>& conjuncts, std::vector<Interval> box)
      : conjuncts_(conjuncts), box_(std::move(box)) {}

  // Returns false when the conjunction is proven empty over the box.
  bool run() {
    for (int round = 0; round < 8; ++round) {
      changed_ = false;
      val_.clear();
      for (const auto& c : conjuncts_) forward(c.get());
      for (const auto& c : conjuncts_) {
        require(c.get(), true);
        if (contradiction_) return false;
      }
      if (!changed_) break;
    }
    return !contradiction_;
  }

  const std::vector<Interval>& box() const { return box_; }

 private:
  const std::vector<SymExprPtr>& conjuncts_;
  std::vector<Interval> box_;
  std::unordered_map<const SymExpr*, Interval> val_;
  bool contradiction_ = false;
  bool changed_ = false;

  Interval forward(const SymExpr* e) {
    auto it = val_.find(e);
    if (it != val_.end()) return it->second;
    Interval r = forward_compute(e);
    val_.emplace(e, r);
    return r;
  }

  Interval forward_compute(const SymExpr* e) {
    switch (e->kind) {
      case SymExpr::Kind::Const: return point(e->value);
      case SymExpr::Kind::Input: return box_[static_cast<std::size_t>(e->input)];
      case SymExpr::Kind::Unary: {
        Interval a = forward(e->lhs.get());
        if (a.empty()) return a;
        if (e->uop == UnaryOp::Not) {
          if (a.is_false()) return point(1);
          if (a.excludes_zero()) return point(0);
          return unit_range();
        }
        if (a.lo == kI64Min) return full_interval();  // negation may wrap
        return {wrap_neg(a.hi), wrap_neg(a.lo)};
      }
      case SymExpr::Kind::Binary: {
        Interval a = forward(e->lhs.get());
        Interval b = forward(e->rhs.get());
        if (a.empty() || b.empty()) return empty_interval();
        switch (e->bop) {
          case BinaryOp::Add:
            return widen128(static_cast<i128>(a.lo) + b.lo, static_cast<i128>(a.hi) + b.hi);
          case BinaryOp::Sub:
            return widen128(static_cast<i128>(a.lo) - b.hi, static_cast<i128>(a.hi) - b.lo);
          case BinaryOp::Mul: {
            i128 c1 = static_cast<i128>(a.lo) * b.lo;
            i128 c2 = static_cast<i128>(a.lo) * b.hi;
            i128 c3 = static_cast<i128>(a.hi) * b.lo;
            i128 c4 = static_cast<i128>(a.hi) * b.hi;
            i128 lo = std::min(std::min(c1, c2), std::min(c3, c4));
            i128 hi = std::max(std::max(c1, c2), std::max(c3, c4));
            return widen128(lo, hi);
          }
          case BinaryOp::Div:
          case BinaryOp::Mod:
            if (a.singleton() && b.singleton() && b.lo != 0)
              return point(e->bop == BinaryOp::Div ? wrap_div(a.lo, b.lo) : wrap_mod(a.lo, b.lo));
            return full_interval();
          case BinaryOp::Lt:
            if (a.hi < b.lo) return point(1);
            if (a.lo >= b.hi) return point(0);
            return unit_range();
          case BinaryOp::Le:
            if (a.hi <= b.lo) return point(1);
            if (a.lo > b.hi) return point(0);
            return unit_range();
          case BinaryOp::Gt:
            if (a.lo > b.hi) return point(1);
            if (a.hi <= b.lo) return point(0);
            return unit_range();
          case BinaryOp::Ge:
            if (a.lo >= b.hi) return point(1);
            if (a.hi < b.lo) return point(0);
            return unit_range();
          case BinaryOp::Eq:
            if (a.singleton() && b.singleton()) return point(a.lo == b.lo ? 1 : 0);
            if (a.hi < b.lo || b.hi < a.lo) return point(0);
            return unit_range();
          case BinaryOp::Ne:
            if (a.singleton() && b.singleton()) return point(a.lo != b.lo ? 1 : 0);
            if (a.hi < b.lo || b.hi < a.lo) return point(1);
            return unit_range();
          case BinaryOp::And:
            if (a.is_false() || b.is_false()) return point(0);
            if (a.excludes_zero() && b.excludes_zero()) return point(1);
            return unit_range();
          case BinaryOp::Or:
            if (a.excludes_zero() || b.excludes_zero()) return point(1);
            if (a.is_false() && b.is_false()) return point(0);
            return unit_range();
        }
        return full_interval();
      }
    }
    return full_interval();
  }

  Interval val(const SymExpr* e) { return forward(e); }

  void narrow(const SymExpr* e, Interval allowed) {
    if (contradiction_) return;
    Interval cur = val(e);
    Interval next = meet(cur, allowed);
    if (next.empty()) {
      contradiction_ = true;
      return;
    }
    if (next == cur) return;
    val_[e] = next;
    changed_ = true;
    switch (e->kind) {
      case SymExpr::Kind::Const: return;  // meet kept the point, nothing below
      case SymExpr::Kind::Input:
        box_[static_cast<std::size_t>(e->input)] = next;
        return;
      case SymExpr::Kind::Unary: {
        if (e->uop == UnaryOp::Neg) {
          if (next.lo == kI64Min) return;  // wrap possible, no exact preimage
          narrow(e->lhs.get(), {wrap_neg(next.hi), wrap_neg(next.lo)});
        } else if (next == point(1)) {
          require(e->lhs.get(), false);
        } else if (next.is_false()) {
          require(e->lhs.get(), true);
        }
        return;
      }
      case SymExpr::Kind::Binary: {
        Interval a = val(e->lhs.get());
        Interval b = val(e->rhs.get());
        switch (e->bop) {
          case BinaryOp::Add: {
            // Exact inversion is only sound when the addition provably
            // cannot wrap over the current operand boxes.
            if (static_cast<i128>(a.lo) + b.lo >= static_cast<i128>(kI64Min) &&
                static_cast<i128>(a.hi) + b.hi <= static_cast<i128>(kI64Max)) {
              narrow(e->lhs.get(),
                     clamp128(static_cast<i128>(next.lo) - b.hi, static_cast<i128>(next.hi) - b.lo));
              b = val(e->rhs.get());
              a = val(e->lhs.get());
              narrow(e->rhs.get(),
                     clamp128(static_cast<i128>(next.lo) - a.hi, static_cast<i128>(next.hi) - a.lo));
            }
            return;
          }
          case BinaryOp::Sub: {
            if (static_cast<i128>(a.lo) - b.hi >= static_cast<i128>(kI64Min) &&
                static_cast<i128>(a.hi) - b.lo <= static_cast<i128>(kI64Max)) {
              narrow(e->lhs.get(),
                     clamp128(static_cast<i128>(next.lo) + b.lo, static_cast<i128>(next.hi) + b.hi));
              a = val(e->lhs.get());
              narrow(e->rhs.get(),
                     clamp128(static_cast<i128>(a.lo) - next.hi, static_cast<i128>(a.hi) - next.lo));
            }
            return;
          }
          case BinaryOp::Mul: {
            auto shrink = [&](const SymExpr* target, Interval t, std::int64_t k) {
              if (k == 0) return;
              i128 p1 = static_cast<i128>(t.lo) * k;
              i128 p2 = static_cast<i128>(t.hi) * k;
              if (std::min(p1, p2) < static_cast<i128>(kI64Min) ||
                  std::max(p1, p2) > static_cast<i128>(kI64Max))
                return;  // wrap possible
              i128 lo, hi;
              if (k > 0) {
                lo = ceil_div_i128(next.lo, k);
                hi = floor_div_i128(next.hi, k);
              } else {
                lo = ceil_div_i128(next.hi, k);
                hi = floor_div_i128(next.lo, k);
              }
              narrow(target, clamp128(lo, hi));
            };
            if (b.singleton()) shrink(e->lhs.get(), a, b.lo);
            if (a.singleton()) shrink(e->rhs.get(), b, a.lo);
            return;
          }
          default: {
            if (is_bool_node(*e)) {
              if (next == point(1)) require_binary(e, true);
              else if (next.is_false()) require_binary(e, false);
            }
            return;
          }
        }
      }
    }
  }

  void narrow128(const SymExpr* e, i128 lo, i128 hi) { narrow(e, clamp128(lo, hi)); }

  // Asserts the truth value of a node used as a condition.
  void require(const SymExpr* e, bool truth) {
    if (contradiction_) return;
    if (e->kind == SymExpr::Kind::Unary && e->uop == UnaryOp::Not) {
      narrow(e, truth ? point(1) : point(0));
      require(e->lhs.get(), !truth);
      return;
    }
    if (is_bool_node(*e)) {
      narrow(e, truth ? point(1) : point(0));
      require_binary(e, truth);
      return;
    }
    // Plain value used as a boolean.
    if (!truth) {
      narrow(e, point(0));
      return;
    }
    Interval v = val(e);
    if (v.is_false()) {
      contradiction_ = true;
    } else if (v.lo == 0) {
      narrow(e, {1, v.hi});
    } else if (v.hi == 0) {
      narrow(e, {v.lo, -1});
    }
  }

  void require_binary(const SymExpr* e, bool truth) {
    if (contradiction_ || e->kind != SymExpr::Kind::Binary) return;
    const SymExpr* L = e->lhs.get();
    const SymExpr* R = e->rhs.get();
    Interval a = val(L);
    Interval b = val(R);
    BinaryOp op = e->bop;
    // Reduce Gt/Ge to Lt/Le with swapped operands; invert on falseness.
    if (op == BinaryOp::Gt) {
      std::swap(L, R);
      std::swap(a, b);
      op = BinaryOp::Lt;
    } else if (op == BinaryOp::Ge) {
      std::swap(L, R);
      std::swap(a, b);
      op = BinaryOp::Le;
    }
    if (!truth) {
      switch (op) {
        case BinaryOp::Lt: op = BinaryOp::Le; std::swap(L, R); std::swap(a, b); break;
        case BinaryOp::Le: op = BinaryOp::Lt; std::swap(L, R); std::swap(a, b); break;
        case BinaryOp::Eq: op = BinaryOp::Ne; break;
        case BinaryOp::Ne: op = BinaryOp::Eq; break;
        case BinaryOp::And:
          // !(a && b): only decidable when one side is known true.
          if (a.excludes_zero()) require(R, false);
          else if (b.excludes_zero()) require(L, false);
          return;
        case BinaryOp::Or:
          require(L, false);
          require(R, false);
          return;
        default: return;
      }
      truth = true;
    }
    switch (op) {
      case BinaryOp::Lt:
        narrow128(L, kI64Min, static_cast<i128>(b.hi) - 1);
        if (!contradiction_) narrow128(R, static_cast<i128>(val(L).lo) + 1, kI64Max);
        return;
      case BinaryOp::Le:
        narrow(L, {kI64Min, b.hi});
        if (!contradiction_) narrow(R, {val(L).lo, kI64Max});
        return;
      case BinaryOp::Eq: {
        Interval m = meet(a, b);
        narrow(L, m);
        if (!contradiction_) narrow(R, meet(val(L), val(R)));
        return;
      }
      case BinaryOp::Ne:
        // Only endpoint trims are expressible with one interval.
        if (b.singleton()) {
          Interval av = val(L);
          if (av.singleton() && av.lo == b.lo) contradiction_ = true;
          else if (av.lo == b.lo) narrow128(L, static_cast<i128>(av.lo) + 1, av.hi);
          else if (av.hi == b.lo) narrow128(L, av.lo, static_cast<i128>(av.hi) - 1);
        }
        if (!contradiction_ && a.singleton()) {
          Interval bv = val(R);
          if (bv.singleton() && bv.lo == a.lo) contradiction_ = true;
          else if (bv.lo == a.lo) narrow128(R, static_cast<i128>(bv.lo) + 1, bv.hi);
          else if (bv.hi == a.lo) narrow128(R, bv.lo, static_cast<i128>(bv.hi) - 1);
        }
        return;
      case BinaryOp::And:
        require(L, true);
        require(R, true);
        return;
      case BinaryOp::Or:
        if (a.is_false()) require(R, true);
        else if (b.is_false()) require(L, true);
        return;
      default: return;
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// solve_constraint: narrowing then bounded ascending enumeration
// ---------------------------------------------------------------------------

SatResult solve_constraint(const std::vector<SymExprPtr>& conjuncts, const InputDomain& domain,
                           std::uint64_t cap, const Deadline& deadline) {
  for (const auto& c : conjuncts) {
    if (c->kind == SymExpr::Kind::Const && c->value == 0) return SatResult::unsat();
  }
  std::vector<Interval> box;
  box.reserve(domain.bounds.size());
  for (const auto& b : domain.bounds) {
    if (b.lo > b.hi) return SatResult::unsat();
    box.push_back({b.lo, b.hi});
  }

  BoxNarrower narrower(conjuncts, box);
  if (!narrower.run()) return SatResult::unsat();
  box = narrower.box();

  u128 total = 1;
  for (const auto& iv : box) {
    if (iv.empty()) return SatResult::unsat();
    u128 span = static_cast<u128>(static_cast<std::uint64_t>(iv.hi) -
                                  static_cast<std::uint64_t>(iv.lo)) +
                1;
    total *= span;
    if (total > static_cast<u128>(std::numeric_limits<std::uint64_t>::max()) / 2)
      total = static_cast<u128>(std::numeric_limits<std::uint64_t>::max()) / 2;
  }

  TestCase t;
  t.values.reserve(box.size());
  for (const auto& iv : box) t.values.push_back(iv.lo);

  bool exhaustive = total <= static_cast<u128>(cap);
  std::uint64_t limit = exhaustive ? static_cast<std::uint64_t>(total) : cap;
  for (std::uint64_t count = 0; count < limit; ++count) {
    if ((count & 4095u) == 0 && deadline.expired()) return SatResult::unknown();
    if (satisfies(conjuncts, t)) return SatResult::sat(t);
    // Ascending odometer, last slot least significant: lexicographic order.
    int k = static_cast<int>(box.size()) - 1;
    while (k >= 0) {
      auto idx = static_cast<std::size_t>(k);
      if (t.values[idx] == box[idx].hi) {
        t.values[idx] = box[idx].lo;
        --k;
      } else {
        ++t.values[idx];
        break;
      }
    }
    if (k < 0) break;  // wrapped around: box exhausted
  }
  return exhaustive ? SatResult::unsat() : SatResult::unknown();
}

SatResult solve_constraint(const SymExprPtr& constraint, const InputDomain& domain,
                           std::uint64_t cap, const Deadline& deadline) {
  std::vector<SymExprPtr> one{constraint};
  return solve_constraint(one, domain, cap, deadline);
}

// ---------------------------------------------------------------------------
// Path exploration
// ---------------------------------------------------------------------------

namespace {

class Explorer {
 public:
  Explorer(const Program& program, const InputDomain& domain, const ExploreBudget& budget,
           Deadline deadline)
      : program_(program), domain_(domain), budget_(budget), deadline_(deadline) {}

  ExploreResult run() {
    State init;
    exec_seq(std::move(init), program_.body, 0, [this](State st) { finish(std::move(st)); });
    result_.complete = !result_.limits.any();
    return std::move(result_);
  }

 private:
  struct State {
    std::unordered_map<std::string, SymExprPtr> env;
    std::vector<SymExprPtr> pc;
    bool printed = false;
    PathOutput out;
  };
  using Cont = std::function<void(State)>;
  using ExprCont = std::function<void(State, SymExprPtr)>;

  const Program& program_;
  const InputDomain& domain_;
  ExploreBudget budget_;
  Deadline deadline_;
  ExploreResult result_;
  bool stop_ = false;

  bool should_stop() {
    if (stop_) return true;
    if (deadline_.expired()) {
      result_.limits.timeout = true;
      stop_ = true;
      return true;
    }
    return false;
  }

  SatResult check_pc(const std::vector<SymExprPtr>& pc) {
    return solve_constraint(pc, domain_, budget_.solver_cap, deadline_);
  }

  void finish(State st) {
    if (!st.printed) st.out = PathOutput::error_out(RuntimeErrorKind::NoPrintReached);
    emit(std::move(st));
  }

  void emit(State st) {
    if (should_stop()) return;
    if (static_cast<int>(result_.outcomes.size()) >= budget_.max_paths) {
      result_.limits.path_budget = true;
      stop_ = true;
      return;
    }
    SatResult sr = check_pc(st.pc);
    if (sr.kind == SatResult::Kind::Unsat) return;  // infeasible leaf, prune
    if (sr.kind == SatResult::Kind::Unknown) {
      if (!should_stop()) result_.limits.solver_cap = true;
      return;
    }
    result_.outcomes.push_back(PathOutcome{std::move(st.pc), std::move(st.out)});
  }

  // Forks on cond; each side is only pursued when not proven unsatisfiable.
  void branch(State st, const SymExprPtr& cond, const Cont& then_k, const Cont& else_k) {
    if (should_stop()) return;
    State then_state = st;
    then_state.pc.push_back(cond);
    SatResult ts = check_pc(then_state.pc);
    if (ts.kind != SatResult::Kind::Unsat) then_k(std::move(then_state));
    if (should_stop()) return;
    State else_state = std::move(st);
    else_state.pc.push_back(sym_unary(UnaryOp::Not, cond));
    SatResult es = check_pc(else_state.pc);
    if (es.kind != SatResult::Kind::Unsat) else_k(std::move(else_state));
  }

  void exec_seq(State st, const std::vector<StmtPtr>& stmts, std::size_t idx, const Cont& k) {
    if (should_stop()) return;
    if (idx >= stmts.size()) {
      k(std::move(st));
      return;
    }
    const auto& rest = stmts;
    exec(std::move(st), *stmts[idx], [this, &rest, idx, k](State st2) {
      exec_seq(std::move(st2), rest, idx + 1, k);
    });
  }

  void exec(State st, const Stmt& s, const Cont& k) {
    if (should_stop()) return;
    switch (s.kind) {
      case Stmt::Kind::Decl:
        if (s.expr) {
          eval(std::move(st), *s.expr, [this, &s, k](State st2, SymExprPtr v) {
            st2.env[s.name] = std::move(v);
            k(std::move(st2));
          });
        } else {
          st.env[s.name] = sym_const(0);
          k(std::move(st));
        }
        return;
      case Stmt::Kind::Assign:
        eval(std::move(st), *s.expr, [this, &s, k](State st2, SymExprPtr v) {
          st2.env[s.name] = std::move(v);
          k(std::move(st2));
        });
        return;
      case Stmt::Kind::If:
        eval(std::move(st), *s.expr, [this, &s, k](State st2, SymExprPtr c) {
          branch(
              std::move(st2), c,
              [this, &s, k](State ts) { exec(std::move(ts), *s.body, k); },
              [this, &s, k](State es) {
                if (s.else_body) exec(std::move(es), *s.else_body, k);
                else k(std::move(es));
              });
        });
        return;
      case Stmt::Kind::While:
        run_while(std::move(st), s, 0, k);
        return;
      case Stmt::Kind::For:
        if (s.init) {
          exec(std::move(st), *s.init, [this, &s, k](State st2) {
            run_for(std::move(st2), s, 0, k);
          });
        } else {
          run_for(std::move(st), s, 0, k);
        }
        return;
      case Stmt::Kind::Switch:
        eval(std::move(st), *s.expr, [this, &s, k](State st2, SymExprPtr v) {
          run_switch(std::move(st2), s, std::move(v), 0, k);
        });
        return;
      case Stmt::Kind::Read:
        st.env[s.name] = sym_input(s.input_slot);
        k(std::move(st));
        return;
      case Stmt::Kind::PrintInt:
        eval(std::move(st), *s.expr, [this, k](State st2, SymExprPtr v) {
          if (st2.printed) {
            st2.out = PathOutput::error_out(RuntimeErrorKind::MultiplePrints);
            emit(std::move(st2));
            return;
          }
          st2.printed = true;
          st2.out = PathOutput::int_expr(std::move(v));
          k(std::move(st2));
        });
        return;
      case Stmt::Kind::PrintStr:
        if (st.printed) {
          st.out = PathOutput::error_out(RuntimeErrorKind::MultiplePrints);
          emit(std::move(st));
          return;
        }
        st.printed = true;
        st.out = PathOutput::str_lit(s.str);
        k(std::move(st));
        return;
      case Stmt::Kind::Block:
        exec_seq(std::move(st), s.stmts, 0, k);
        return;
    }
  }

  void run_while(State st, const Stmt& s, int iter, const Cont& k) {
    if (should_stop()) return;
    eval(std::move(st), *s.expr, [this, &s, iter, k](State st2, SymExprPtr c) {
      branch(
          std::move(st2), c,
          [this, &s, iter, k](State ts) {
            if (iter >= budget_.max_unroll) {
              result_.limits.unroll_bound = true;  // feasible continuation abandoned
              return;
            }
            exec(std::move(ts), *s.body, [this, &s, iter, k](State st3) {
              run_while(std::move(st3), s, iter + 1, k);
            });
          },
          k);
    });
  }

  void run_for(State st, const Stmt& s, int iter, const Cont& k) {
    if (should_stop()) return;
    auto iterate = [this, &s, iter, k](State ts) {
      if (iter >= budget_.max_unroll) {
        result_.limits.unroll_bound = true;
        return;
      }
      exec(std::move(ts), *s.body, [this, &s, iter, k](State st3) {
        if (s.step) {
          exec(std::move(st3), *s.step, [this, &s, iter, k](State st4) {
            run_for(std::move(st4), s, iter + 1, k);
          });
        } else {
          run_for(std::move(st3), s, iter + 1, k);
        }
      });
    };
    if (s.expr) {
      eval(std::move(st), *s.expr, [this, iterate, k](State st2, SymExprPtr c) {
        branch(std::move(st2), c, iterate, k);
      });
    } else {
      iterate(std::move(st));  // no condition: loops until the unroll bound
    }
  }

  void run_switch(State st, const Stmt& s, SymExprPtr scrutinee, std::size_t idx, const Cont& k) {
    if (should_stop()) return;
    if (idx >= s.cases.size()) {
      if (s.has_default) exec_seq(std::move(st), s.default_body, 0, k);
      else k(std::move(st));
      return;
    }
    SymExprPtr cond = sym_binary(BinaryOp::Eq, scrutinee, sym_const(s.cases[idx].label));
    branch(
        std::move(st), cond,
        [this, &s, idx, k](State ts) { exec_seq(std::move(ts), s.cases[idx].body, 0, k); },
        [this, &s, scrutinee, idx, k](State es) {
          run_switch(std::move(es), s, scrutinee, idx + 1, k);
        });
  }

  void eval(State st, const Expr& e, const ExprCont& k) {
    if (should_stop()) return;
    switch (e.kind) {
      case Expr::Kind::IntLit:
        k(std::move(st), sym_const(e.value));
        return;
      case Expr::Kind::Var: {
        auto it = st.env.find(e.name);
        SymExprPtr v = it == st.env.end() ? sym_const(0) : it->second;
        k(std::move(st), std::move(v));
        return;
      }
      case Expr::Kind::Unary:
        eval(std::move(st), *e.lhs, [this, &e, k](State st2, SymExprPtr v) {
          k(std::move(st2), sym_unary(e.uop, std::move(v)));
        });
        return;
      case Expr::Kind::Binary:
        eval(std::move(st), *e.lhs, [this, &e, k](State st2, SymExprPtr a) {
          eval(std::move(st2), *e.rhs, [this, &e, k, a](State st3, SymExprPtr b) {
            if (e.bop == BinaryOp::Div || e.bop == BinaryOp::Mod) {
              RuntimeErrorKind err_kind = e.bop == BinaryOp::Div ? RuntimeErrorKind::DivideByZero
                                                                 : RuntimeErrorKind::ModByZero;
              if (b->kind == SymExpr::Kind::Const) {
                if (b->value == 0) {
                  st3.out = PathOutput::error_out(err_kind);
                  emit(std::move(st3));
                  return;
                }
                k(std::move(st3), sym_binary(e.bop, a, std::move(b)));
                return;
              }
              SymExprPtr zero_cond = sym_binary(BinaryOp::Eq, b, sym_const(0));
              branch(
                  std::move(st3), zero_cond,
                  [this, err_kind](State ts) {
                    ts.out = PathOutput::error_out(err_kind);
                    emit(std::move(ts));
                  },
                  [this, &e, k, a, b](State es) {
                    k(std::move(es), sym_binary(e.bop, a, b));
                  });
              return;
            }
            k(std::move(st3), sym_binary(e.bop, a, std::move(b)));
          });
        });
        return;
    }
  }
};

}  // namespace

ExploreResult explore_paths(const Program& program, const InputDomain& domain,
                            const ExploreBudget& budget, const Deadline& deadline) {
  if (static_cast<int>(domain.arity()) != program.arity())
    throw std::invalid_argument("domain arity does not match program arity");
  Deadline dl = deadline.is_set() ? deadline
                                  : Deadline::after_ms(static_cast<std::uint64_t>(
                                        std::max<std::int64_t>(budget.wall_clock_ms, 1)));
  return Explorer(program, domain, budget, dl).run();
}

}  // namespace minijudge
