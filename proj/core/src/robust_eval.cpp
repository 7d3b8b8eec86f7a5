#include "vbstl/robust_eval.hpp"

#include <vector>

namespace vbstl {

SemanticsMode semantics_mode_from_string(const std::string& name) {
  if (name == "max") return SemanticsMode::Max;
  if (name == "additive" || name == "add") return SemanticsMode::Additive;
  if (name == "constant") return SemanticsMode::Constant;
  if (name == "random") return SemanticsMode::Random;
  throw EvalError("unknown semantics '" + name + "'");
}

std::string to_string(SemanticsMode mode) {
  switch (mode) {
    case SemanticsMode::Max: return "max";
    case SemanticsMode::Additive: return "additive";
    case SemanticsMode::Constant: return "constant";
    case SemanticsMode::Random: return "random";
  }
  return "?";
}

VBool always_op(std::span<const VBool> samples, std::span<const double> widths,
                Semantics sem) {
  VBool acc = top_v();
  if (sem == Semantics::Max) {
    for (const VBool& v : samples) acc = and_max(acc, v);
    return acc;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    acc = and_add(acc, sharp_prime(samples[i], widths[i]));
  }
  return acc;
}

VBool eventually_op(std::span<const VBool> samples, std::span<const double> widths,
                    Semantics sem) {
  // Literal duality: eventually = not(always(not .)).
  std::vector<VBool> negated(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) negated[i] = not_v(samples[i]);
  return not_v(always_op(negated, widths, sem));
}

VBool until_op(std::span<const VBool> left, std::span<const VBool> right,
               std::span<const double> widths, IndexRange window, Semantics sem) {
  VBool result = bot_v();
  VBool prefix = top_v();  // conjunction of left[0..j); empty prefix is the identity
  std::size_t prefix_len = 0;
  for (std::size_t j = window.first; j < window.last; ++j) {
    while (prefix_len < j) {
      prefix = sem == Semantics::Max
                   ? and_max(prefix, left[prefix_len])
                   : and_add(prefix, sharp_prime(left[prefix_len], widths[prefix_len]));
      ++prefix_len;
    }
    if (sem == Semantics::Max) {
      result = or_max(result, and_max(right[j], prefix));
    } else {
      result = or_add(result, and_add(sharp_prime(right[j], widths[j]), prefix));
    }
  }
  return result;
}

namespace {

/// Step widths as used by the additive integral weighting: the distance to
/// the next sample, with the trace's final sample carrying zero mass. This
/// keeps the robustness of unbounded additive operators exactly invariant
/// under piecewise-constant resampling.
std::vector<double> integration_widths(const Trace& trace) {
  const auto& t = trace.times();
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) w[k] = t[k + 1] - t[k];
  return w;
}

class RobustEvaluator {
public:
  RobustEvaluator(const Trace& trace, const SemanticsConfig& cfg)
      : trace_(trace), cfg_(cfg), widths_(integration_widths(trace)) {}

  VBool eval(const FormulaPtr& f, std::size_t k) const {
    switch (f->kind) {
      case StlFormula::Kind::True:
        return top_v();
      case StlFormula::Kind::False:
        return bot_v();
      case StlFormula::Kind::Predicate: {
        const double v = eval_expr(f->expr, trace_, k);
        switch (f->rel) {
          case Relation::Lt: return lt_v(v, f->bound);
          case Relation::Le: return leq_v(v, f->bound);
          case Relation::Ge: return geq_v(v, f->bound);
          case Relation::Gt: return gt_v(v, f->bound);
          case Relation::Eq: return eq_v(v, f->bound, cfg_.eq_constant);
        }
        return bot_v();
      }
      case StlFormula::Kind::Not:
        return not_v(eval(f->lhs, k));
      case StlFormula::Kind::Scaled:
        return sharp(eval(f->lhs, k), *f->scale);
      case StlFormula::Kind::And: {
        const VBool l = eval(f->lhs, k);
        const VBool r = eval(f->rhs, k);
        return effective(f) == Semantics::Max ? and_max(l, r) : and_add(l, r);
      }
      case StlFormula::Kind::Or: {
        const VBool l = eval(f->lhs, k);
        const VBool r = eval(f->rhs, k);
        return effective(f) == Semantics::Max ? or_max(l, r) : or_add(l, r);
      }
      case StlFormula::Kind::Implies: {
        const VBool l = eval(f->lhs, k);
        const VBool r = eval(f->rhs, k);
        if (effective(f) == Semantics::Max) {
          // Classical reading; an explicit scale still applies.
          return or_max(not_v(sharp(l, f->scale.value_or(1.0))), r);
        }
        return implies_add(l, r, f->scale.value_or(cfg_.implication_scale));
      }
      case StlFormula::Kind::Always: {
        const IndexRange w = window_indices(trace_, k, f->interval.lo, f->interval.hi);
        std::vector<VBool> samples(w.count());
        for (std::size_t j = w.first; j < w.last; ++j) {
          samples[j - w.first] = eval(f->lhs, j);
        }
        return always_op(samples, window_widths(w), effective(f));
      }
      case StlFormula::Kind::Eventually: {
        const IndexRange w = window_indices(trace_, k, f->interval.lo, f->interval.hi);
        std::vector<VBool> samples(w.count());
        for (std::size_t j = w.first; j < w.last; ++j) {
          samples[j - w.first] = eval(f->lhs, j);
        }
        return eventually_op(samples, window_widths(w), effective(f));
      }
      case StlFormula::Kind::Until: {
        const IndexRange w = window_indices(trace_, k, f->interval.lo, f->interval.hi);
        if (w.empty()) return bot_v();
        // Local frame: index 0 is the evaluation instant k.
        const std::size_t frame = w.last - k;
        std::vector<VBool> left(frame, top_v());
        std::vector<VBool> right(frame, bot_v());
        for (std::size_t i = k; i + 1 < w.last; ++i) left[i - k] = eval(f->lhs, i);
        for (std::size_t j = w.first; j < w.last; ++j) right[j - k] = eval(f->rhs, j);
        std::span<const double> widths(widths_.data() + k, frame);
        return until_op(left, right, widths, IndexRange{w.first - k, w.last - k},
                        effective(f));
      }
    }
    return bot_v();
  }

private:
  Semantics effective(const FormulaPtr& f) const {
    if (f->tag) return *f->tag;
    return cfg_.default_connective == SemanticsMode::Additive ? Semantics::Additive
                                                              : Semantics::Max;
  }

  std::span<const double> window_widths(const IndexRange& w) const {
    return {widths_.data() + w.first, w.count()};
  }

  const Trace& trace_;
  const SemanticsConfig& cfg_;
  std::vector<double> widths_;
};

}  // namespace

VBool eval_robust(const FormulaPtr& f, const Trace& trace, std::size_t k,
                  const SemanticsConfig& cfg, std::mt19937_64& rng) {
  if (k >= trace.size()) {
    throw EvalError("evaluation instant " + std::to_string(k) + " out of range");
  }
  for (const auto& name : collect_signals(f)) {
    if (!trace.has_signal(name)) {
      throw EvalError("unknown signal '" + name + "'");
    }
  }
  switch (cfg.default_connective) {
    case SemanticsMode::Constant:
      return {bool_sat(f, trace, k), cfg.constant_magnitude};
    case SemanticsMode::Random: {
      // Uniform in (0, 1], truth from the Boolean semantics.
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      return {bool_sat(f, trace, k), 1.0 - dist(rng)};
    }
    default:
      return RobustEvaluator(trace, cfg).eval(f, k);
  }
}

VBool eval_robust(const FormulaPtr& f, const Trace& trace, std::size_t k,
                  const SemanticsConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  return eval_robust(f, trace, k, cfg, rng);
}

}  // namespace vbstl
