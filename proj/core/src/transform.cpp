#include "vbstl/transform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vbstl {

namespace {

bool is_true_const(const FormulaPtr& f) { return f->kind == StlFormula::Kind::True; }

/// Conjunction that drops true constants so table preconditions stay tidy.
FormulaPtr and_of(const FormulaPtr& a, const FormulaPtr& b) {
  if (is_true_const(a)) return b;
  if (is_true_const(b)) return a;
  return f_and(a, b);
}

void check_limit(std::size_t count, std::size_t limit) {
  if (count > limit) {
    throw TransformError("table would have " + std::to_string(count) +
                         " entries, exceeding the limit of " + std::to_string(limit));
  }
}

}  // namespace

FormulaTable s2f(const SignalTable& table) {
  FormulaTable out;
  out.entries.reserve(table.entries.size());
  for (const auto& [pre, conseq] : table.entries) {
    out.entries.push_back({pre, f_not(f_pred(conseq, Relation::Eq, 0.0))});
  }
  return out;
}

FormulaPtr flatten_table(const FormulaTable& table, SwitchEncoding encoding) {
  if (table.entries.empty()) {
    throw TransformError("cannot flatten an empty table");
  }
  if (table.entries.size() == 1 && is_true_const(table.entries[0].precondition)) {
    return table.entries[0].consequent;
  }
  FormulaPtr acc;
  for (const auto& [pre, conseq] : table.entries) {
    FormulaPtr clause = encoding == SwitchEncoding::Disjunctive ? f_and(pre, conseq)
                                                                : f_implies(pre, conseq);
    if (!acc) {
      acc = clause;
    } else {
      acc = encoding == SwitchEncoding::Disjunctive ? f_or(acc, clause)
                                                    : f_and(acc, clause);
    }
  }
  return acc;
}

FormulaTable combine_logical(LogicOp op, const FormulaTable& in1, const FormulaTable& in2,
                             std::size_t entry_limit) {
  if (op == LogicOp::Not) {
    throw TransformError("not is unary; use a single-input table rewrite");
  }
  check_limit(in1.entries.size() * in2.entries.size(), entry_limit);
  FormulaTable out;
  for (const auto& [p1, c1] : in1.entries) {
    for (const auto& [p2, c2] : in2.entries) {
      FormulaPtr conseq = op == LogicOp::And ? f_and(c1, c2) : f_or(c1, c2);
      out.entries.push_back({and_of(p1, p2), conseq});
    }
  }
  return out;
}

FormulaTable combine_relational(Relation rel, const SignalTable& in1,
                                const SignalTable& in2, std::size_t entry_limit) {
  check_limit(in1.entries.size() * in2.entries.size(), entry_limit);
  FormulaTable out;
  for (const auto& [p1, c1] : in1.entries) {
    for (const auto& [p2, c2] : in2.entries) {
      out.entries.push_back({and_of(p1, p2), make_comparison(c1, rel, c2)});
    }
  }
  return out;
}

SignalTable combine_arithmetic(ArithOp op, const SignalTable& in1, const SignalTable& in2,
                               std::size_t entry_limit) {
  check_limit(in1.entries.size() * in2.entries.size(), entry_limit);
  SignalTable out;
  for (const auto& [p1, c1] : in1.entries) {
    for (const auto& [p2, c2] : in2.entries) {
      ExprPtr conseq;
      switch (op) {
        case ArithOp::Add: conseq = expr_add(c1, c2); break;
        case ArithOp::Sub: conseq = expr_sub(c1, c2); break;
        case ArithOp::Mul: conseq = expr_mul(c1, c2); break;
        case ArithOp::Div: conseq = expr_div(c1, c2); break;
      }
      out.entries.push_back({and_of(p1, p2), conseq});
    }
  }
  return out;
}

std::size_t table_entry_count(const Table& table) {
  if (const auto* ft = std::get_if<FormulaTable>(&table)) return ft->entries.size();
  return std::get<SignalTable>(table).entries.size();
}

Table translate_switch(const FormulaTable& cond, const Table& in1, const Table& in3,
                       std::size_t entry_limit) {
  check_limit(cond.entries.size() * (table_entry_count(in1) + table_entry_count(in3)),
              entry_limit);
  const bool formulas =
      std::holds_alternative<FormulaTable>(in1) && std::holds_alternative<FormulaTable>(in3);

  auto expand_formula = [&](const FormulaPtr& branch_pre, const FormulaTable& branch,
                            FormulaTable& out) {
    for (const auto& [p, c] : branch.entries) {
      out.entries.push_back({and_of(branch_pre, p), c});
    }
  };
  auto expand_signal = [&](const FormulaPtr& branch_pre, const SignalTable& branch,
                           SignalTable& out) {
    for (const auto& [p, c] : branch.entries) {
      out.entries.push_back({and_of(branch_pre, p), c});
    }
  };

  if (formulas) {
    FormulaTable out;
    for (const auto& [p, c] : cond.entries) {
      expand_formula(and_of(p, c), std::get<FormulaTable>(in1), out);
      expand_formula(and_of(p, f_not(c)), std::get<FormulaTable>(in3), out);
    }
    return out;
  }
  if (std::holds_alternative<SignalTable>(in1) &&
      std::holds_alternative<SignalTable>(in3)) {
    SignalTable out;
    for (const auto& [p, c] : cond.entries) {
      expand_signal(and_of(p, c), std::get<SignalTable>(in1), out);
      expand_signal(and_of(p, f_not(c)), std::get<SignalTable>(in3), out);
    }
    return out;
  }
  // Mixed branches: promote the signal side to formulas and recurse.
  Table lifted1 = std::holds_alternative<FormulaTable>(in1)
                      ? in1
                      : Table(s2f(std::get<SignalTable>(in1)));
  Table lifted3 = std::holds_alternative<FormulaTable>(in3)
                      ? in3
                      : Table(s2f(std::get<SignalTable>(in3)));
  return translate_switch(cond, lifted1, lifted3, entry_limit);
}

// ---------------------------------------------------------------------------
// Template library
// ---------------------------------------------------------------------------

std::string to_string(LogReason reason) {
  switch (reason) {
    case LogReason::RecursiveLoop: return "recursive-loop";
    case LogReason::InexpressibleBlock: return "inexpressible-block";
    case LogReason::FormulaAsSignal: return "formula-as-signal";
    case LogReason::UserForced: return "user-forced";
  }
  return "?";
}

std::string to_string(LoopMode mode) {
  switch (mode) {
    case LoopMode::Auto: return "auto";
    case LoopMode::Templates: return "templates";
    case LoopMode::Unroll: return "unroll";
    case LoopMode::Blackbox: return "blackbox";
  }
  return "?";
}

LoopMode loop_mode_from_string(const std::string& s) {
  if (s == "auto") return LoopMode::Auto;
  if (s == "templates") return LoopMode::Templates;
  if (s == "unroll") return LoopMode::Unroll;
  if (s == "blackbox") return LoopMode::Blackbox;
  throw TransformError("unknown loop mode '" + s + "'");
}

SwitchEncoding switch_encoding_from_string(const std::string& s) {
  if (s == "disjunctive") return SwitchEncoding::Disjunctive;
  if (s == "implicative") return SwitchEncoding::Implicative;
  throw TransformError("unknown switch encoding '" + s + "'");
}

TemplateLibrary TemplateLibrary::standard() {
  TemplateLibrary lib;
  lib.add({"always", LogicOp::And, true,
           [](FormulaPtr inner, const std::map<std::string, double>&, double) {
             return f_always(Interval{}, std::move(inner));
           }});
  lib.add({"eventually", LogicOp::Or, false,
           [](FormulaPtr inner, const std::map<std::string, double>&, double) {
             return f_eventually(Interval{}, std::move(inner));
           }});
  lib.add({"latch", std::nullopt, false,
           [](FormulaPtr inner, const std::map<std::string, double>&, double) {
             return f_eventually(Interval{}, std::move(inner));
           }});
  lib.add({"always_within", std::nullopt, false,
           [](FormulaPtr inner, const std::map<std::string, double>& params,
              double horizon) {
             auto it = params.find("window");
             if (it == params.end()) {
               throw TransformError("always_within template needs a 'window' parameter");
             }
             if (std::isnan(horizon)) {
               throw TransformError(
                   "always_within template needs the simulation horizon");
             }
             const double lo = std::max(0.0, horizon - it->second);
             return f_always(Interval{lo, horizon}, std::move(inner));
           }});
  return lib;
}

void TemplateLibrary::add(TemplateRule rule) { rules_.push_back(std::move(rule)); }

const TemplateRule* TemplateLibrary::by_name(const std::string& name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const TemplateRule* TemplateLibrary::structural(LogicOp op, double delay_initial) const {
  for (const auto& r : rules_) {
    if (!r.structural_op || *r.structural_op != op) continue;
    if (r.requires_nonzero_init && delay_initial == 0.0) continue;
    if (!r.requires_nonzero_init && delay_initial != 0.0) continue;
    return &r;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Backward translation
// ---------------------------------------------------------------------------

namespace {

struct LoopPartner {
  std::string logical;  // the And/Or block of a two-cycle
  std::string delay;
};

class Translator {
public:
  Translator(const BlockGraph& graph, const TranslateOptions& options)
      : graph_(graph), options_(options) {
    find_two_cycles();
  }

  TranslationResult run() {
    graph_.validate();
    Table root = visit(graph_.output);
    const FormulaTable ft = std::holds_alternative<FormulaTable>(root)
                                ? std::get<FormulaTable>(root)
                                : s2f(std::get<SignalTable>(root));
    result_.formula = flatten_table(ft, options_.encoding);
    return std::move(result_);
  }

private:
  void find_two_cycles() {
    // L -> D -> L where D is a unit delay and L a binary logical block.
    for (const auto& b : graph_.blocks) {
      if (b.kind != BlockKind::UnitDelay) continue;
      const std::string& src = graph_.input(b.id, 0);
      const Block& l = graph_.block(src);
      if (l.kind != BlockKind::Logical || l.logic == LogicOp::Not) continue;
      const bool feeds_back = graph_.input(l.id, 0) == b.id || graph_.input(l.id, 1) == b.id;
      if (feeds_back) {
        loops_[l.id] = LoopPartner{l.id, b.id};
      }
    }
  }

  Table logged_signal(const std::string& block_id, LogReason reason) {
    result_.manifest.push_back({block_id, block_id, reason});
    SignalTable t;
    t.entries.push_back({f_true(), expr_signal(block_id)});
    return t;
  }

  Table visit(const std::string& id) {
    auto memo = tables_.find(id);
    if (memo != tables_.end()) return memo->second;
    Table t = compute(id);
    tables_[id] = t;
    result_.tables[id] = t;
    return t;
  }

  FormulaTable to_formula_table(const Table& t) {
    if (const auto* ft = std::get_if<FormulaTable>(&t)) return *ft;
    return s2f(std::get<SignalTable>(t));
  }

  Table compute(const std::string& id) {
    const Block& b = graph_.block(id);

    if (std::find(graph_.log.begin(), graph_.log.end(), id) != graph_.log.end()) {
      // User-forced cut; classify formula-valued blocks for the manifest.
      const bool formula_kind = b.kind == BlockKind::Relational ||
                                b.kind == BlockKind::Logical ||
                                b.kind == BlockKind::Template;
      return logged_signal(id, formula_kind ? LogReason::FormulaAsSignal
                                            : LogReason::UserForced);
    }

    switch (b.kind) {
      case BlockKind::Inport: {
        SignalTable t;
        t.entries.push_back({f_true(), expr_signal(b.signal)});
        return t;
      }
      case BlockKind::Constant: {
        SignalTable t;
        t.entries.push_back({f_true(), expr_const(b.value)});
        return t;
      }
      case BlockKind::Relational: {
        Table in1 = visit(graph_.input(id, 0));
        Table in2 = visit(graph_.input(id, 1));
        if (!std::holds_alternative<SignalTable>(in1) ||
            !std::holds_alternative<SignalTable>(in2)) {
          // Formula fed where a signal is required: the block output becomes
          // an opaque model signal.
          return logged_signal(id, LogReason::FormulaAsSignal);
        }
        return combine_relational(b.rel, std::get<SignalTable>(in1),
                                  std::get<SignalTable>(in2), options_.entry_limit);
      }
      case BlockKind::Logical: {
        auto loop = loops_.find(id);
        if (loop != loops_.end()) return translate_loop(b, loop->second);
        if (b.logic == LogicOp::Not) {
          FormulaTable in = to_formula_table(visit(graph_.input(id, 0)));
          FormulaTable out;
          for (const auto& [p, c] : in.entries) out.entries.push_back({p, f_not(c)});
          return out;
        }
        FormulaTable in1 = to_formula_table(visit(graph_.input(id, 0)));
        FormulaTable in2 = to_formula_table(visit(graph_.input(id, 1)));
        return combine_logical(b.logic, in1, in2, options_.entry_limit);
      }
      case BlockKind::Arithmetic: {
        Table in1 = visit(graph_.input(id, 0));
        Table in2 = visit(graph_.input(id, 1));
        if (!std::holds_alternative<SignalTable>(in1) ||
            !std::holds_alternative<SignalTable>(in2)) {
          return logged_signal(id, LogReason::FormulaAsSignal);
        }
        return combine_arithmetic(b.arith, std::get<SignalTable>(in1),
                                  std::get<SignalTable>(in2), options_.entry_limit);
      }
      case BlockKind::Abs: {
        Table in = visit(graph_.input(id, 0));
        if (!std::holds_alternative<SignalTable>(in)) {
          return logged_signal(id, LogReason::FormulaAsSignal);
        }
        SignalTable out;
        for (const auto& [p, c] : std::get<SignalTable>(in).entries) {
          out.entries.push_back({p, expr_abs(c)});
        }
        return out;
      }
      case BlockKind::Switch:
        return compute_switch(b);
      case BlockKind::UnitDelay: {
        // Reached directly only outside a translated template loop: either
        // the output taps the delay or the loop did not match a template.
        const bool in_cycle = std::any_of(
            loops_.begin(), loops_.end(),
            [&](const auto& kv) { return kv.second.delay == b.id; });
        if (in_cycle || delay_in_any_cycle(b.id)) {
          return logged_signal(id, LogReason::RecursiveLoop);
        }
        return logged_signal(id, LogReason::InexpressibleBlock);
      }
      case BlockKind::Template: {
        const TemplateRule* rule = options_.templates.by_name(b.template_name);
        if (!rule) {
          result_.warnings.push_back("template '" + b.template_name +
                                     "' is not registered; logging block '" + id + "'");
          return logged_signal(id, LogReason::InexpressibleBlock);
        }
        FormulaTable in = to_formula_table(visit(graph_.input(id, 0)));
        FormulaPtr inner = flatten_table(in, options_.encoding);
        FormulaTable out;
        out.entries.push_back(
            {f_true(), rule->emit(inner, b.template_params, options_.horizon)});
        return out;
      }
      case BlockKind::Opaque:
        return logged_signal(id, LogReason::InexpressibleBlock);
    }
    throw TransformError("unhandled block kind for '" + id + "'");
  }

  bool delay_in_any_cycle(const std::string& delay_id) const {
    // The delay is in a cycle iff its output can reach its own input.
    std::set<std::string> seen;
    std::vector<std::string> stack{delay_id};
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      for (const auto& w : graph_.wires) {
        if (w.from_block != cur) continue;
        if (w.to_block == delay_id) return true;
        if (seen.insert(w.to_block).second) stack.push_back(w.to_block);
      }
    }
    return false;
  }

  Table compute_switch(const Block& b) {
    Table u2 = visit(graph_.input(b.id, 1));
    FormulaTable cond;
    if (const auto* st = std::get_if<SignalTable>(&u2)) {
      for (const auto& [p, e] : st->entries) {
        cond.entries.push_back({p, criterion_formula(b, e)});
      }
    } else if (b.criterion == SwitchCriterion::Ne) {
      cond = std::get<FormulaTable>(u2);
    } else {
      // A threshold criterion on a formula-typed condition has no direct
      // reading; the whole switch output becomes a logged signal.
      return logged_signal(b.id, LogReason::FormulaAsSignal);
    }
    Table in1 = visit(graph_.input(b.id, 0));
    Table in3 = visit(graph_.input(b.id, 2));
    return translate_switch(cond, in1, in3, options_.entry_limit);
  }

  static FormulaPtr criterion_formula(const Block& b, const ExprPtr& e) {
    switch (b.criterion) {
      case SwitchCriterion::Ge: return f_pred(e, Relation::Ge, b.threshold);
      case SwitchCriterion::Gt: return f_pred(e, Relation::Gt, b.threshold);
      case SwitchCriterion::Lt: return f_pred(e, Relation::Lt, b.threshold);
      case SwitchCriterion::Le: return f_pred(e, Relation::Le, b.threshold);
      case SwitchCriterion::Ne: return f_not(f_pred(e, Relation::Eq, 0.0));
    }
    throw TransformError("unhandled switch criterion");
  }

  Table translate_loop(const Block& logical, const LoopPartner& loop) {
    const Block& delay = graph_.block(loop.delay);
    const std::string other = graph_.input(logical.id, 0) == loop.delay
                                  ? graph_.input(logical.id, 1)
                                  : graph_.input(logical.id, 0);

    if (options_.loop_mode == LoopMode::Blackbox) {
      return blackbox_loop(logical, loop, other);
    }

    const TemplateRule* rule =
        options_.templates.structural(logical.logic, delay.initial);
    if (!rule) {
      result_.warnings.push_back("loop at '" + logical.id +
                                 "' matches no template (check the delay's initial "
                                 "value); treating the delay output as a signal");
      return blackbox_loop(logical, loop, other);
    }

    FormulaPtr inner = flatten_table(to_formula_table(visit(other)), options_.encoding);

    if (options_.loop_mode == LoopMode::Unroll) {
      return unroll_loop(logical, inner);
    }
    FormulaTable out;
    out.entries.push_back(
        {f_true(), rule->emit(inner, delay.template_params, options_.horizon)});
    return out;
  }

  Table blackbox_loop(const Block& logical, const LoopPartner& loop,
                      const std::string& other) {
    Table delay_sig = visit(loop.delay);  // logs the delay output
    FormulaTable delay_formula = to_formula_table(delay_sig);
    if (logical.logic == LogicOp::Not) {
      throw TransformError("unexpected unary logical in loop");
    }
    FormulaTable other_formula = to_formula_table(visit(other));
    return combine_logical(logical.logic, other_formula, delay_formula,
                           options_.entry_limit);
  }

  Table unroll_loop(const Block& logical, const FormulaPtr& inner) {
    const std::size_t n = options_.unroll_samples;
    if (n == 0) {
      throw TransformError(
          "unroll mode needs the sample count (set unroll_samples)");
    }
    if (std::isnan(options_.horizon)) {
      throw TransformError("unroll mode needs the simulation horizon");
    }
    if (n > options_.unroll_warning_threshold) {
      result_.warnings.push_back("unrolled loop at '" + logical.id + "' has " +
                                 std::to_string(n) +
                                 " connectives; the formula will be large");
    }
    const double step = n > 1 ? options_.horizon / static_cast<double>(n - 1) : 0.0;
    FormulaPtr acc;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * step;
      // Zero-width eventually anchors the loop body at one absolute sample.
      FormulaPtr at_t = f_eventually(Interval{t, t}, inner);
      if (!acc) {
        acc = at_t;
      } else {
        acc = logical.logic == LogicOp::And ? f_and(acc, at_t) : f_or(acc, at_t);
      }
    }
    FormulaTable out;
    out.entries.push_back({f_true(), acc});
    return out;
  }

  const BlockGraph& graph_;
  const TranslateOptions& options_;
  std::map<std::string, LoopPartner> loops_;  // keyed by the logical block
  std::map<std::string, Table> tables_;
  TranslationResult result_;
};

}  // namespace

TranslationResult translate(const BlockGraph& graph, const TranslateOptions& options) {
  return Translator(graph, options).run();
}

}  // namespace vbstl
