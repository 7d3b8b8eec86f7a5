#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "vbstl/vbool.hpp"

namespace vbstl {

// ---------------------------------------------------------------------------
// Arithmetic expressions over signals and constants (predicate left-hand
// sides): +, -, *, /, abs, unary minus, and time-shifted signal references.
// ---------------------------------------------------------------------------

struct SignalExpr;
using ExprPtr = std::shared_ptr<const SignalExpr>;

struct SignalExpr {
  enum class Kind { Constant, Signal, Neg, Abs, Add, Sub, Mul, Div };

  Kind kind;
  double value = 0.0;        // Constant
  std::string name;          // Signal
  double time_offset = 0.0;  // Signal: reference at t + offset (hold-left lookup)
  ExprPtr lhs;               // unary operand / left operand
  ExprPtr rhs;
};

ExprPtr expr_const(double value);
ExprPtr expr_signal(std::string name, double time_offset = 0.0);
ExprPtr expr_neg(ExprPtr e);
ExprPtr expr_abs(ExprPtr e);
ExprPtr expr_add(ExprPtr l, ExprPtr r);
ExprPtr expr_sub(ExprPtr l, ExprPtr r);
ExprPtr expr_mul(ExprPtr l, ExprPtr r);
ExprPtr expr_div(ExprPtr l, ExprPtr r);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
/// Constant-folds the expression; returns the value if it contains no
/// signal references.
std::optional<double> expr_constant_value(const ExprPtr& e);
std::string to_string(const ExprPtr& e);
void collect_signals(const ExprPtr& e, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// STL formulas
// ---------------------------------------------------------------------------

enum class Relation { Lt, Le, Ge, Gt, Eq };

/// Temporal window [lo, hi] in seconds relative to the evaluation instant.
/// hi == +infinity denotes "up to the trace horizon".
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool unbounded() const { return lo == 0.0 && hi == std::numeric_limits<double>::infinity(); }
};

struct StlFormula;
using FormulaPtr = std::shared_ptr<const StlFormula>;

struct StlFormula {
  enum class Kind {
    True,
    False,
    Predicate,
    Not,
    And,
    Or,
    Implies,
    Always,
    Eventually,
    Until,
    Scaled,  // robustness scaled by a constant factor (the `#k` prefix)
  };

  Kind kind;

  // Predicate
  ExprPtr expr;
  Relation rel = Relation::Lt;
  double bound = 0.0;

  // Children: unary nodes use lhs only; Until is (lhs until rhs).
  FormulaPtr lhs;
  FormulaPtr rhs;

  Interval interval;               // Always / Eventually / Until
  std::optional<Semantics> tag;    // And / Or / Implies / temporal nodes
  std::optional<double> scale;     // Implies left-hand-side scale; Scaled factor
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_pred(ExprPtr expr, Relation rel, double bound);
FormulaPtr f_not(FormulaPtr child);
FormulaPtr f_and(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag = {});
FormulaPtr f_or(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag = {});
FormulaPtr f_implies(FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag = {},
                     std::optional<double> scale = {});
FormulaPtr f_always(Interval iv, FormulaPtr child, std::optional<Semantics> tag = {});
FormulaPtr f_eventually(Interval iv, FormulaPtr child, std::optional<Semantics> tag = {});
FormulaPtr f_until(Interval iv, FormulaPtr l, FormulaPtr r, std::optional<Semantics> tag = {});
FormulaPtr f_scaled(double factor, FormulaPtr child);

/// Comparison of two expressions, normalized to the predicate shape
/// `expr REL constant`: a constant side becomes the bound (flipping the
/// relation if it is on the left); otherwise the predicate is lhs - rhs REL 0.
FormulaPtr make_comparison(ExprPtr lhs, Relation rel, ExprPtr rhs);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Canonical text form; parse_stl(to_string(f)) reconstructs f exactly.
std::string to_string(const FormulaPtr& f);

std::string to_string(Relation rel);

/// Deepest nesting of Always/Eventually/Until along any root-to-leaf path.
int modal_depth(const FormulaPtr& f);

/// Pushes negation inward via De Morgan and the always/eventually duality and
/// desugars implication to (not lhs) or rhs. The result is Boolean-equivalent
/// to the input; robustness may differ (implication scaling is dropped).
/// A negation applied to an Until node is kept in place: the grammar has no
/// release operator to rewrite it into.
FormulaPtr nnf(const FormulaPtr& f);

void collect_signals(const FormulaPtr& f, std::set<std::string>& out);
std::set<std::string> collect_signals(const FormulaPtr& f);

}  // namespace vbstl
