#include <cmath>

#include "vbstl/robust_eval.hpp"

namespace vbstl {

double eval_expr(const ExprPtr& e, const Trace& trace, std::size_t k) {
  double value = 0.0;
  switch (e->kind) {
    case SignalExpr::Kind::Constant:
      return e->value;
    case SignalExpr::Kind::Signal: {
      if (!trace.has_signal(e->name)) {
        throw EvalError("unknown signal '" + e->name + "'");
      }
      if (e->time_offset == 0.0) {
        value = trace.samples(e->name)[k];
      } else {
        value = value_at_time(trace, e->name, trace.times()[k] + e->time_offset);
      }
      break;
    }
    case SignalExpr::Kind::Neg:
      value = -eval_expr(e->lhs, trace, k);
      break;
    case SignalExpr::Kind::Abs:
      value = std::abs(eval_expr(e->lhs, trace, k));
      break;
    case SignalExpr::Kind::Add:
      value = eval_expr(e->lhs, trace, k) + eval_expr(e->rhs, trace, k);
      break;
    case SignalExpr::Kind::Sub:
      value = eval_expr(e->lhs, trace, k) - eval_expr(e->rhs, trace, k);
      break;
    case SignalExpr::Kind::Mul:
      value = eval_expr(e->lhs, trace, k) * eval_expr(e->rhs, trace, k);
      break;
    case SignalExpr::Kind::Div:
      value = eval_expr(e->lhs, trace, k) / eval_expr(e->rhs, trace, k);
      break;
  }
  if (std::isnan(value)) {
    throw EvalError("NaN encountered while evaluating '" + to_string(e) + "' at sample " +
                    std::to_string(k));
  }
  return value;
}

namespace {

bool sat_rec(const FormulaPtr& f, const Trace& trace, std::size_t k) {
  switch (f->kind) {
    case StlFormula::Kind::True:
      return true;
    case StlFormula::Kind::False:
      return false;
    case StlFormula::Kind::Predicate: {
      const double v = eval_expr(f->expr, trace, k);
      switch (f->rel) {
        case Relation::Lt: return v < f->bound;
        case Relation::Le: return v <= f->bound;
        case Relation::Ge: return v >= f->bound;
        case Relation::Gt: return v > f->bound;
        case Relation::Eq: return v == f->bound;
      }
      return false;
    }
    case StlFormula::Kind::Not:
      return !sat_rec(f->lhs, trace, k);
    case StlFormula::Kind::Scaled:
      return sat_rec(f->lhs, trace, k);
    case StlFormula::Kind::And:
      return sat_rec(f->lhs, trace, k) && sat_rec(f->rhs, trace, k);
    case StlFormula::Kind::Or:
      return sat_rec(f->lhs, trace, k) || sat_rec(f->rhs, trace, k);
    case StlFormula::Kind::Implies:
      return !sat_rec(f->lhs, trace, k) || sat_rec(f->rhs, trace, k);
    case StlFormula::Kind::Always: {
      const IndexRange w = window_indices(trace, k, f->interval.lo, f->interval.hi);
      for (std::size_t j = w.first; j < w.last; ++j) {
        if (!sat_rec(f->lhs, trace, j)) return false;
      }
      return true;  // vacuously true on an empty window
    }
    case StlFormula::Kind::Eventually: {
      const IndexRange w = window_indices(trace, k, f->interval.lo, f->interval.hi);
      for (std::size_t j = w.first; j < w.last; ++j) {
        if (sat_rec(f->lhs, trace, j)) return true;
      }
      return false;  // vacuously false on an empty window
    }
    case StlFormula::Kind::Until: {
      const IndexRange w = window_indices(trace, k, f->interval.lo, f->interval.hi);
      for (std::size_t j = w.first; j < w.last; ++j) {
        if (!sat_rec(f->rhs, trace, j)) continue;
        bool prefix_holds = true;
        for (std::size_t i = k; i < j; ++i) {
          if (!sat_rec(f->lhs, trace, i)) {
            prefix_holds = false;
            break;
          }
        }
        if (prefix_holds) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool bool_sat(const FormulaPtr& f, const Trace& trace, std::size_t k) {
  if (k >= trace.size()) {
    throw EvalError("evaluation instant " + std::to_string(k) + " out of range");
  }
  for (const auto& name : collect_signals(f)) {
    if (!trace.has_signal(name)) {
      throw EvalError("unknown signal '" + name + "'");
    }
  }
  return sat_rec(f, trace, k);
}

}  // namespace vbstl
