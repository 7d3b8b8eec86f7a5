#include "vbstl/formula.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace vbstl {

namespace {

std::shared_ptr<SignalExpr> make_expr(SignalExpr::Kind kind) {
  auto e = std::make_shared<SignalExpr>();
  e->kind = kind;
  return e;
}

std::shared_ptr<StlFormula> make_formula(StlFormula::Kind kind) {
  auto f = std::make_shared<StlFormula>();
  f->kind = kind;
  return f;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace

ExprPtr expr_const(double value) {
  auto e = make_expr(SignalExpr::Kind::Constant);
  e->value = value;
  return e;
}

ExprPtr expr_signal(std::string name, double time_offset) {
  auto e = make_expr(SignalExpr::Kind::Signal);
  e->name = std::move(name);
  e->time_offset = time_offset;
  return e;
}

ExprPtr expr_neg(ExprPtr child) {
  auto e = make_expr(SignalExpr::Kind::Neg);
  e->lhs = std::move(child);
  return e;
}

ExprPtr expr_abs(ExprPtr child) {
  auto e = make_expr(SignalExpr::Kind::Abs);
  e->lhs = std::move(child);
  return e;
}

namespace {
ExprPtr binary_expr(SignalExpr::Kind kind, ExprPtr l, ExprPtr r) {
  auto e = make_expr(kind);
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}
}  // namespace

ExprPtr expr_add(ExprPtr l, ExprPtr r) { return binary_expr(SignalExpr::Kind::Add, std::move(l), std::move(r)); }
ExprPtr expr_sub(ExprPtr l, ExprPtr r) { return binary_expr(SignalExpr::Kind::Sub, std::move(l), std::move(r)); }
ExprPtr expr_mul(ExprPtr l, ExprPtr r) { return binary_expr(SignalExpr::Kind::Mul, std::move(l), std::move(r)); }
ExprPtr expr_div(ExprPtr l, ExprPtr r) { return binary_expr(SignalExpr::Kind::Div, std::move(l), std::move(r)); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SignalExpr::Kind::Constant:
      return a->value == b->value;
    case SignalExpr::Kind::Signal:
      return a->name == b->name && a->time_offset == b->time_offset;
    case SignalExpr::Kind::Neg:
    case SignalExpr::Kind::Abs:
      return expr_equal(a->lhs, b->lhs);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

std::optional<double> expr_constant_value(const ExprPtr& e) {
  switch (e->kind) {
    case SignalExpr::Kind::Constant:
      return e->value;
    case SignalExpr::Kind::Signal:
      return std::nullopt;
    case SignalExpr::Kind::Neg:
      if (auto v = expr_constant_value(e->lhs)) return -*v;
      return std::nullopt;
    case SignalExpr::Kind::Abs:
      if (auto v = expr_constant_value(e->lhs)) return std::abs(*v);
      return std::nullopt;
    default: {
      auto l = expr_constant_value(e->lhs);
      auto r = expr_constant_value(e->rhs);
      if (!l || !r) return std::nullopt;
      switch (e->kind) {
        case SignalExpr::Kind::Add: return *l + *r;
        case SignalExpr::Kind::Sub: return *l - *r;
        case SignalExpr::Kind::Mul: return *l * *r;
        case SignalExpr::Kind::Div: return *l / *r;
        default: return std::nullopt;
      }
    }
  }
}

namespace {

int expr_precedence(SignalExpr::Kind kind) {
  switch (kind) {
    case SignalExpr::Kind::Add:
    case SignalExpr::Kind::Sub:
      return 1;
    case SignalExpr::Kind::Mul:
    case SignalExpr::Kind::Div:
      return 2;
    default:
      return 3;  // atoms and tightly bound unaries
  }
}

void print_expr(const ExprPtr& e, std::string& out, int parent_prec) {
  const int prec = expr_precedence(e->kind);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case SignalExpr::Kind::Constant:
      if (e->value < 0) {
        out += '(';
        out += format_number(e->value);
        out += ')';
      } else {
        out += format_number(e->value);
      }
      break;
    case SignalExpr::Kind::Signal:
      out += e->name;
      if (e->time_offset != 0.0) {
        out += '@';
        out += format_number(e->time_offset);
      }
      break;
    case SignalExpr::Kind::Neg:
      out += '-';
      print_expr(e->lhs, out, 3);
      break;
    case SignalExpr::Kind::Abs:
      out += "abs(";
      print_expr(e->lhs, out, 0);
      out += ')';
      break;
    case SignalExpr::Kind::Add:
    case SignalExpr::Kind::Sub:
    case SignalExpr::Kind::Mul:
    case SignalExpr::Kind::Div: {
      print_expr(e->lhs, out, prec);
      switch (e->kind) {
        case SignalExpr::Kind::Add: out += " + "; break;
        case SignalExpr::Kind::Sub: out += " - "; break;
        case SignalExpr::Kind::Mul: out += " * "; break;
        default: out += " / "; break;
      }
      // Right operand binds one step tighter so a - (b - c) keeps its parens.
      print_expr(e->rhs, out, prec + 1);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  print_expr(e, out, 0);
  return out;
}

void collect_signals(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == SignalExpr::Kind::Signal) out.insert(e->name);
  collect_signals(e->lhs, out);
  collect_signals(e->rhs, out);
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

FormulaPtr f_true() { return make_formula(StlFormula::Kind::True); }
FormulaPtr f_false() { return make_formula(StlFormula::Kind::False); }

FormulaPtr f_pred(ExprPtr expr, Relation rel, double bound) {
  auto f = make_formula(StlFormula::Kind::Predicate);
  f->expr = std::move(expr);
  f->rel = rel;
  f->bound = bound;
  return f;
}

FormulaPtr f_not(FormulaPtr child) {
  auto f = make_formula(StlFormula::Kind::Not);
  f->lhs = std::move(child);
  return f;
}

namespace {
FormulaPtr binary_formula(StlFormula::Kind kind, FormulaPtr l, FormulaPtr r,
                          std::optional<Semantics> tag) {
  auto f = make_formula(kind);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  f->tag = tag;
  return f;
}
}  // namespace

FormulaPtr f_and(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag) {
  return binary_formula(StlFormula::Kind::And, std::move(l), std::move(r), tag);
}

FormulaPtr f_or(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag) {
  return binary_formula(StlFormula::Kind::Or, std::move(l), std::move(r), tag);
}

FormulaPtr f_implies(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag,
                     std::optional<double> scale) {
  auto f = binary_formula(StlFormula::Kind::Implies, std::move(l), std::move(r), tag);
  std::const_pointer_cast<StlFormula>(f)->scale = scale;
  return f;
}

FormulaPtr f_always(Interval iv, FormulaPtr child, std::optional<Semantics> tag) {
  auto f = make_formula(StlFormula::Kind::Always);
  f->interval = iv;
  f->lhs = std::move(child);
  f->tag = tag;
  return f;
}

FormulaPtr f_eventually(Interval iv, FormulaPtr child, std::optional<Semantics> tag) {
  auto f = make_formula(StlFormula::Kind::Eventually);
  f->interval = iv;
  f->lhs = std::move(child);
  f->tag = tag;
  return f;
}

FormulaPtr f_until(Interval iv, FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag) {
  auto f = binary_formula(StlFormula::Kind::Until, std::move(l), std::move(r), tag);
  std::const_pointer_cast<StlFormula>(f)->interval = iv;
  return f;
}

FormulaPtr f_scaled(double factor, FormulaPtr child) {
  if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
  auto f = make_formula(StlFormula::Kind::Scaled);
  f->scale = factor;
  f->lhs = std::move(child);
  return f;
}

namespace {
Relation flip(Relation rel) {
  switch (rel) {
    case Relation::Lt: return Relation::Gt;
    case Relation::Le: return Relation::Ge;
    case Relation::Gt: return Relation::Lt;
    case Relation::Ge: return Relation::Le;
    case Relation::Eq: return Relation::Eq;
  }
  return rel;
}
}  // namespace

FormulaPtr make_comparison(ExprPtr lhs, Relation rel, ExprPtr rhs) {
  if (auto c = expr_constant_value(rhs)) {
    return f_pred(std::move(lhs), rel, *c);
  }
  if (auto c = expr_constant_value(lhs)) {
    return f_pred(std::move(rhs), flip(rel), *c);
  }
  return f_pred(expr_sub(std::move(lhs), std::move(rhs)), rel, 0.0);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->tag != b->tag || a->scale != b->scale) return false;
  switch (a->kind) {
    case StlFormula::Kind::True:
    case StlFormula::Kind::False:
      return true;
    case StlFormula::Kind::Predicate:
      return a->rel == b->rel && a->bound == b->bound && expr_equal(a->expr, b->expr);
    case StlFormula::Kind::Always:
    case StlFormula::Kind::Eventually:
      return a->interval.lo == b->interval.lo && a->interval.hi == b->interval.hi &&
             formula_equal(a->lhs, b->lhs);
    case StlFormula::Kind::Until:
      return a->interval.lo == b->interval.lo && a->interval.hi == b->interval.hi &&
             formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
    case StlFormula::Kind::Not:
    case StlFormula::Kind::Scaled:
      return formula_equal(a->lhs, b->lhs);
    default:
      return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
  }
}

std::string to_string(Relation rel) {
  switch (rel) {
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
    case Relation::Eq: return "==";
  }
  return "?";
}

namespace {

std::string tag_suffix(const std::optional<Semantics>& tag) {
  if (!tag) return "";
  return *tag == Semantics::Max ? "@max" : "@add";
}

std::string interval_suffix(const Interval& iv) {
  if (iv.unbounded()) return "";
  return "_[" + format_number(iv.lo) + "," + format_number(iv.hi) + "]";
}

void print_formula(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case StlFormula::Kind::True:
      out += "true";
      break;
    case StlFormula::Kind::False:
      out += "false";
      break;
    case StlFormula::Kind::Predicate:
      out += '(';
      print_expr(f->expr, out, 0);
      out += ' ';
      out += to_string(f->rel);
      out += ' ';
      if (f->bound < 0) {
        out += '(';
        out += format_number(f->bound);
        out += ')';
      } else {
        out += format_number(f->bound);
      }
      out += ')';
      break;
    case StlFormula::Kind::Not:
      out += "not ";
      print_formula(f->lhs, out);
      break;
    case StlFormula::Kind::Scaled:
      out += '#';
      out += format_number(*f->scale);
      out += ' ';
      print_formula(f->lhs, out);
      break;
    case StlFormula::Kind::Always:
    case StlFormula::Kind::Eventually:
      out += f->kind == StlFormula::Kind::Always ? "alw" : "ev";
      out += tag_suffix(f->tag);
      out += interval_suffix(f->interval);
      out += ' ';
      print_formula(f->lhs, out);
      break;
    case StlFormula::Kind::And:
    case StlFormula::Kind::Or:
    case StlFormula::Kind::Implies:
    case StlFormula::Kind::Until: {
      out += '(';
      print_formula(f->lhs, out);
      out += ' ';
      switch (f->kind) {
        case StlFormula::Kind::And: out += "and"; break;
        case StlFormula::Kind::Or: out += "or"; break;
        case StlFormula::Kind::Implies: out += "=>"; break;
        default: out += "until"; break;
      }
      out += tag_suffix(f->tag);
      if (f->kind == StlFormula::Kind::Implies && f->scale) {
        out += '#';
        out += format_number(*f->scale);
      }
      if (f->kind == StlFormula::Kind::Until) out += interval_suffix(f->interval);
      out += ' ';
      print_formula(f->rhs, out);
      out += ')';
      break;
    }
  }
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

int modal_depth(const FormulaPtr& f) {
  switch (f->kind) {
    case StlFormula::Kind::True:
    case StlFormula::Kind::False:
    case StlFormula::Kind::Predicate:
      return 0;
    case StlFormula::Kind::Always:
    case StlFormula::Kind::Eventually:
      return 1 + modal_depth(f->lhs);
    case StlFormula::Kind::Until:
      return 1 + std::max(modal_depth(f->lhs), modal_depth(f->rhs));
    case StlFormula::Kind::Not:
    case StlFormula::Kind::Scaled:
      return modal_depth(f->lhs);
    default:
      return std::max(modal_depth(f->lhs), modal_depth(f->rhs));
  }
}

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->kind) {
    case StlFormula::Kind::True:
    case StlFormula::Kind::False:
    case StlFormula::Kind::Predicate:
      return f;
    case StlFormula::Kind::Not:
      return nnf_neg(f->lhs);
    case StlFormula::Kind::And:
      return f_and(nnf_pos(f->lhs), nnf_pos(f->rhs), f->tag);
    case StlFormula::Kind::Or:
      return f_or(nnf_pos(f->lhs), nnf_pos(f->rhs), f->tag);
    case StlFormula::Kind::Implies:
      return f_or(nnf_neg(f->lhs), nnf_pos(f->rhs), f->tag);
    case StlFormula::Kind::Always:
      return f_always(f->interval, nnf_pos(f->lhs), f->tag);
    case StlFormula::Kind::Eventually:
      return f_eventually(f->interval, nnf_pos(f->lhs), f->tag);
    case StlFormula::Kind::Until:
      return f_until(f->interval, nnf_pos(f->lhs), nnf_pos(f->rhs), f->tag);
    case StlFormula::Kind::Scaled:
      return f_scaled(*f->scale, nnf_pos(f->lhs));
  }
  return f;
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->kind) {
    case StlFormula::Kind::True:
      return f_false();
    case StlFormula::Kind::False:
      return f_true();
    case StlFormula::Kind::Predicate:
      return f_not(f);
    case StlFormula::Kind::Not:
      return nnf_pos(f->lhs);
    case StlFormula::Kind::And:
      return f_or(nnf_neg(f->lhs), nnf_neg(f->rhs), f->tag);
    case StlFormula::Kind::Or:
      return f_and(nnf_neg(f->lhs), nnf_neg(f->rhs), f->tag);
    case StlFormula::Kind::Implies:
      return f_and(nnf_pos(f->lhs), nnf_neg(f->rhs), f->tag);
    case StlFormula::Kind::Always:
      return f_eventually(f->interval, nnf_neg(f->lhs), f->tag);
    case StlFormula::Kind::Eventually:
      return f_always(f->interval, nnf_neg(f->lhs), f->tag);
    case StlFormula::Kind::Until:
      // No release dual in the grammar; normalize operands, keep the negation.
      return f_not(f_until(f->interval, nnf_pos(f->lhs), nnf_pos(f->rhs), f->tag));
    case StlFormula::Kind::Scaled:
      return f_scaled(*f->scale, nnf_neg(f->lhs));
  }
  return f_not(f);
}

}  // namespace

FormulaPtr nnf(const FormulaPtr& f) { return nnf_pos(f); }

void collect_signals(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == StlFormula::Kind::Predicate) {
    collect_signals(f->expr, out);
    return;
  }
  collect_signals(f->lhs, out);
  collect_signals(f->rhs, out);
}

std::set<std::string> collect_signals(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_signals(f, out);
  return out;
}

}  // namespace vbstl
