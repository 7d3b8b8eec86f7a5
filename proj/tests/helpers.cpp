#include "helpers.hpp"

#include <cmath>
#include <stdexcept>

namespace vbstl::test {

namespace {

// ---- oracle ----------------------------------------------------------------

double oracle_expr(const ExprPtr& e, const Trace& trace, std::size_t k) {
  switch (e->kind) {
    case SignalExpr::Kind::Constant:
      return e->value;
    case SignalExpr::Kind::Signal: {
      if (e->time_offset == 0.0) return trace.samples(e->name)[k];
      // Hold-left scan at t + offset.
      const double t = trace.times()[k] + e->time_offset;
      const auto& times = trace.times();
      const auto& values = trace.samples(e->name);
      std::size_t best = 0;
      for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] <= t + 1e-9) best = j;
      }
      return values[best];
    }
    case SignalExpr::Kind::Neg:
      return -oracle_expr(e->lhs, trace, k);
    case SignalExpr::Kind::Abs:
      return std::abs(oracle_expr(e->lhs, trace, k));
    case SignalExpr::Kind::Add:
      return oracle_expr(e->lhs, trace, k) + oracle_expr(e->rhs, trace, k);
    case SignalExpr::Kind::Sub:
      return oracle_expr(e->lhs, trace, k) - oracle_expr(e->rhs, trace, k);
    case SignalExpr::Kind::Mul:
      return oracle_expr(e->lhs, trace, k) * oracle_expr(e->rhs, trace, k);
    case SignalExpr::Kind::Div:
      return oracle_expr(e->lhs, trace, k) / oracle_expr(e->rhs, trace, k);
  }
  return 0.0;
}

bool in_window(const Trace& trace, std::size_t k, std::size_t j, double a, double b) {
  const double t = trace.times()[j];
  return t >= trace.times()[k] + a - 1e-9 && t <= trace.times()[k] + b + 1e-9;
}

}  // namespace

bool oracle_sat(const FormulaPtr& f, const Trace& trace, std::size_t k) {
  switch (f->kind) {
    case StlFormula::Kind::True:
      return true;
    case StlFormula::Kind::False:
      return false;
    case StlFormula::Kind::Predicate: {
      const double v = oracle_expr(f->expr, trace, k);
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
      return !oracle_sat(f->lhs, trace, k);
    case StlFormula::Kind::Scaled:
      return oracle_sat(f->lhs, trace, k);
    case StlFormula::Kind::And:
      return oracle_sat(f->lhs, trace, k) && oracle_sat(f->rhs, trace, k);
    case StlFormula::Kind::Or:
      return oracle_sat(f->lhs, trace, k) || oracle_sat(f->rhs, trace, k);
    case StlFormula::Kind::Implies:
      return !oracle_sat(f->lhs, trace, k) || oracle_sat(f->rhs, trace, k);
    case StlFormula::Kind::Always: {
      for (std::size_t j = 0; j < trace.size(); ++j) {
        if (in_window(trace, k, j, f->interval.lo, f->interval.hi) &&
            !oracle_sat(f->lhs, trace, j)) {
          return false;
        }
      }
      return true;
    }
    case StlFormula::Kind::Eventually: {
      for (std::size_t j = 0; j < trace.size(); ++j) {
        if (in_window(trace, k, j, f->interval.lo, f->interval.hi) &&
            oracle_sat(f->lhs, trace, j)) {
          return true;
        }
      }
      return false;
    }
    case StlFormula::Kind::Until: {
      for (std::size_t j = 0; j < trace.size(); ++j) {
        if (!in_window(trace, k, j, f->interval.lo, f->interval.hi)) continue;
        if (!oracle_sat(f->rhs, trace, j)) continue;
        bool prefix = true;
        for (std::size_t i = k; i < j && prefix; ++i) {
          prefix = oracle_sat(f->lhs, trace, i);
        }
        if (prefix) return true;
      }
      return false;
    }
  }
  return false;
}

// ---- generators ------------------------------------------------------------

Trace make_trace(std::vector<double> times,
                 std::vector<std::pair<std::string, std::vector<double>>> signals) {
  return Trace(std::move(times), std::move(signals));
}

Trace random_small_trace(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_int_distribution<int> value_dist(-1, 1);
  const std::size_t n = len_dist(rng);
  std::vector<double> times(n), x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = static_cast<double>(k);
    x[k] = value_dist(rng);
    y[k] = value_dist(rng);
  }
  return Trace(std::move(times), {{"x", std::move(x)}, {"y", std::move(y)}});
}

std::vector<Trace> enumerate_small_traces(std::size_t max_len) {
  std::vector<Trace> traces;
  for (std::size_t n = 1; n <= max_len; ++n) {
    // Each sample has 9 (x, y) combinations; enumerate 9^n assignments.
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 9;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> times(n), x(n), y(n);
      std::size_t rest = code;
      for (std::size_t k = 0; k < n; ++k) {
        times[k] = static_cast<double>(k);
        x[k] = static_cast<double>(static_cast<int>(rest % 3) - 1);
        rest /= 3;
        y[k] = static_cast<double>(static_cast<int>(rest % 3) - 1);
        rest /= 3;
      }
      traces.emplace_back(std::move(times),
                          std::vector<Trace::Series>{{"x", std::move(x)}, {"y", std::move(y)}});
    }
  }
  return traces;
}

namespace {

std::vector<FormulaPtr> atom_pool() {
  return {
      f_pred(expr_signal("x"), Relation::Le, 0.0),
      f_pred(expr_signal("y"), Relation::Gt, 0.0),
      f_pred(expr_signal("x"), Relation::Eq, 0.0),
      f_pred(expr_signal("y"), Relation::Lt, 1.0),
  };
}

std::vector<Interval> interval_pool() {
  return {Interval{}, Interval{1.0, 2.0}, Interval{0.0, 1.0}};
}

}  // namespace

FormulaPtr random_formula(std::mt19937_64& rng, int depth) {
  const auto atoms = atom_pool();
  const auto intervals = interval_pool();
  std::uniform_int_distribution<std::size_t> atom_dist(0, atoms.size() - 1);
  std::uniform_int_distribution<std::size_t> iv_dist(0, intervals.size() - 1);
  std::uniform_int_distribution<int> op_dist(0, 5);
  if (depth <= 0) return atoms[atom_dist(rng)];
  switch (op_dist(rng)) {
    case 0: return f_not(random_formula(rng, depth - 1));
    case 1: return f_and(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2: return f_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3: return f_always(intervals[iv_dist(rng)], random_formula(rng, depth - 1));
    case 4: return f_eventually(intervals[iv_dist(rng)], random_formula(rng, depth - 1));
    default:
      return f_until(intervals[iv_dist(rng)], random_formula(rng, depth - 1),
                     random_formula(rng, depth - 1));
  }
}

std::vector<FormulaPtr> enumerate_formulas(int height) {
  const std::vector<FormulaPtr> atoms = {
      f_pred(expr_signal("x"), Relation::Le, 0.0),
      f_pred(expr_signal("y"), Relation::Gt, 0.0),
  };
  const std::vector<Interval> intervals = {Interval{}, Interval{1.0, 2.0}};

  std::vector<FormulaPtr> current = atoms;
  std::vector<FormulaPtr> all = atoms;
  for (int h = 1; h <= height; ++h) {
    std::vector<FormulaPtr> next;
    for (const auto& f : current) {
      next.push_back(f_not(f));
      for (const auto& iv : intervals) {
        next.push_back(f_always(iv, f));
        next.push_back(f_eventually(iv, f));
      }
    }
    for (const auto& l : current) {
      for (const auto& r : current) {
        next.push_back(f_and(l, r));
        next.push_back(f_or(l, r));
        for (const auto& iv : intervals) {
          next.push_back(f_until(iv, l, r));
        }
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    current = std::move(next);
    if (h >= 2) break;  // heights beyond 2 explode combinatorially
  }
  return all;
}

namespace {

FormulaPtr nnf_rec(std::mt19937_64& rng, int depth, std::vector<double>& directions) {
  std::uniform_int_distribution<int> op_dist(0, 5);
  std::uniform_int_distribution<int> rel_dist(0, 3);
  std::uniform_int_distribution<int> neg_dist(0, 3);
  const auto intervals = interval_pool();
  std::uniform_int_distribution<std::size_t> iv_dist(0, intervals.size() - 1);

  if (depth <= 0) {
    const std::string name = "a" + std::to_string(directions.size());
    // Relations only; equality robustness is flat so "toward violation" is
    // undefined for it.
    Relation rel;
    double direction;
    switch (rel_dist(rng)) {
      case 0: rel = Relation::Lt; direction = +1.0; break;
      case 1: rel = Relation::Le; direction = +1.0; break;
      case 2: rel = Relation::Gt; direction = -1.0; break;
      default: rel = Relation::Ge; direction = -1.0; break;
    }
    FormulaPtr leaf = f_pred(expr_signal(name), rel, 0.0);
    if (neg_dist(rng) == 0) {
      leaf = f_not(leaf);
      direction = -direction;
    }
    directions.push_back(direction);
    return leaf;
  }
  switch (op_dist(rng)) {
    case 0:
      return f_and(nnf_rec(rng, depth - 1, directions), nnf_rec(rng, depth - 1, directions));
    case 1:
      return f_or(nnf_rec(rng, depth - 1, directions), nnf_rec(rng, depth - 1, directions));
    case 2:
      return f_always(intervals[iv_dist(rng)], nnf_rec(rng, depth - 1, directions));
    case 3:
      return f_eventually(intervals[iv_dist(rng)], nnf_rec(rng, depth - 1, directions));
    case 4:
      return f_until(intervals[iv_dist(rng)], nnf_rec(rng, depth - 1, directions),
                     nnf_rec(rng, depth - 1, directions));
    default:
      return nnf_rec(rng, depth - 1, directions);
  }
}

}  // namespace

NnfSample random_nnf_formula(std::mt19937_64& rng, int depth) {
  NnfSample sample;
  sample.formula = nnf_rec(rng, depth, sample.leaf_directions);
  return sample;
}

Trace random_leaf_trace(std::mt19937_64& rng, std::size_t leaf_count, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(2, max_len);
  std::uniform_real_distribution<double> value_dist(-2.0, 2.0);
  const std::size_t n = len_dist(rng);
  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k);
  std::vector<Trace::Series> signals;
  for (std::size_t i = 0; i < leaf_count; ++i) {
    std::vector<double> values(n);
    for (auto& v : values) v = value_dist(rng);
    signals.emplace_back("a" + std::to_string(i), std::move(values));
  }
  return Trace(std::move(times), std::move(signals));
}

}  // namespace vbstl::test
