#include "vbstl/graph_exec.hpp"

#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <queue>
#include <set>
#include <vector>

namespace vbstl {

std::map<std::string, OpaqueFn> default_opaque_registry() {
  return {
      {"square", [](double x) { return x * x; }},
      {"sin", [](double x) { return std::sin(x); }},
      {"cos", [](double x) { return std::cos(x); }},
      {"sign", [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }},
      {"saturate01", [](double x) { return std::min(1.0, std::max(0.0, x)); }},
  };
}

namespace {

bool truthy(double v) { return v != 0.0; }

/// Same-step evaluation order: Kahn's algorithm with UnitDelay treated as a
/// source (its output is last step's state).
std::vector<const Block*> topological_order(const BlockGraph& g) {
  std::map<std::string, std::size_t> pending;
  std::map<std::string, std::vector<std::string>> consumers;
  for (const auto& b : g.blocks) pending[b.id] = 0;
  for (const auto& w : g.wires) {
    if (g.block(w.to_block).kind == BlockKind::UnitDelay) continue;
    ++pending[w.to_block];
    consumers[w.from_block].push_back(w.to_block);
  }
  std::queue<std::string> ready;
  for (const auto& b : g.blocks) {
    if (pending[b.id] == 0) ready.push(b.id);
  }
  std::vector<const Block*> order;
  std::set<std::string> emitted;
  while (!ready.empty()) {
    const std::string id = ready.front();
    ready.pop();
    if (!emitted.insert(id).second) continue;
    order.push_back(&g.block(id));
    for (const auto& next : consumers[id]) {
      if (--pending[next] == 0) ready.push(next);
    }
  }
  if (order.size() != g.blocks.size()) {
    throw GraphError("graph contains an algebraic loop");
  }
  return order;
}

struct WindowState {
  std::deque<std::pair<double, bool>> samples;
};

}  // namespace

Trace execute_graph(const BlockGraph& graph, const Trace& inputs,
                    const std::map<std::string, OpaqueFn>& opaque) {
  graph.validate();
  const auto order = topological_order(graph);
  const std::size_t n = inputs.size();

  std::map<std::string, std::vector<double>> outputs;
  for (const auto& b : graph.blocks) outputs[b.id] = std::vector<double>(n, 0.0);

  std::map<std::string, double> delay_state;
  std::map<std::string, bool> latch_state;      // always / eventually / latch templates
  std::map<std::string, WindowState> window_state;
  std::set<std::string> reported_nan;
  for (const auto& b : graph.blocks) {
    if (b.kind == BlockKind::UnitDelay) delay_state[b.id] = b.initial;
    if (b.kind == BlockKind::Template) {
      latch_state[b.id] = b.template_name == "always" || b.template_name == "always_within";
    }
  }

  std::map<std::string, double> value;
  for (std::size_t k = 0; k < n; ++k) {
    value.clear();
    for (const Block* b : order) {
      double v = 0.0;
      switch (b->kind) {
        case BlockKind::Inport:
          if (!inputs.has_signal(b->signal)) {
            throw GraphError("inport '" + b->id + "' needs missing signal '" + b->signal +
                             "'");
          }
          v = inputs.samples(b->signal)[k];
          break;
        case BlockKind::Constant:
          v = b->value;
          break;
        case BlockKind::Relational: {
          const double a = value.at(graph.input(b->id, 0));
          const double c = value.at(graph.input(b->id, 1));
          bool res = false;
          switch (b->rel) {
            case Relation::Lt: res = a < c; break;
            case Relation::Le: res = a <= c; break;
            case Relation::Ge: res = a >= c; break;
            case Relation::Gt: res = a > c; break;
            case Relation::Eq: res = a == c; break;
          }
          v = res ? 1.0 : 0.0;
          break;
        }
        case BlockKind::Logical: {
          if (b->logic == LogicOp::Not) {
            v = truthy(value.at(graph.input(b->id, 0))) ? 0.0 : 1.0;
          } else {
            const bool a = truthy(value.at(graph.input(b->id, 0)));
            const bool c = truthy(value.at(graph.input(b->id, 1)));
            v = (b->logic == LogicOp::And ? (a && c) : (a || c)) ? 1.0 : 0.0;
          }
          break;
        }
        case BlockKind::Arithmetic: {
          const double a = value.at(graph.input(b->id, 0));
          const double c = value.at(graph.input(b->id, 1));
          switch (b->arith) {
            case ArithOp::Add: v = a + c; break;
            case ArithOp::Sub: v = a - c; break;
            case ArithOp::Mul: v = a * c; break;
            case ArithOp::Div:
              if (c == 0.0) {
                v = std::numeric_limits<double>::quiet_NaN();
                if (reported_nan.insert(b->id).second) {
                  std::cerr << "vbstl: division by zero in block '" << b->id
                            << "' at sample " << k << ", propagating NaN\n";
                }
              } else {
                v = a / c;
              }
              break;
          }
          break;
        }
        case BlockKind::Switch: {
          const double u2 = value.at(graph.input(b->id, 1));
          bool take_first = false;
          switch (b->criterion) {
            case SwitchCriterion::Ge: take_first = u2 >= b->threshold; break;
            case SwitchCriterion::Gt: take_first = u2 > b->threshold; break;
            case SwitchCriterion::Ne: take_first = u2 != 0.0; break;
            case SwitchCriterion::Lt: take_first = u2 < b->threshold; break;
            case SwitchCriterion::Le: take_first = u2 <= b->threshold; break;
          }
          v = value.at(graph.input(b->id, take_first ? 0 : 2));
          break;
        }
        case BlockKind::UnitDelay:
          v = delay_state.at(b->id);
          break;
        case BlockKind::Abs:
          v = std::abs(value.at(graph.input(b->id, 0)));
          break;
        case BlockKind::Template: {
          const bool in = truthy(value.at(graph.input(b->id, 0)));
          if (b->template_name == "always") {
            latch_state[b->id] = latch_state[b->id] && in;
            v = latch_state[b->id] ? 1.0 : 0.0;
          } else if (b->template_name == "eventually" || b->template_name == "latch") {
            latch_state[b->id] = latch_state[b->id] || in;
            v = latch_state[b->id] ? 1.0 : 0.0;
          } else if (b->template_name == "always_within") {
            const double window = b->template_params.count("window")
                                      ? b->template_params.at("window")
                                      : 0.0;
            auto& ws = window_state[b->id];
            const double now = inputs.times()[k];
            ws.samples.emplace_back(now, in);
            while (!ws.samples.empty() && ws.samples.front().first < now - window - 1e-9) {
              ws.samples.pop_front();
            }
            bool all = true;
            for (const auto& [t, ok] : ws.samples) all = all && ok;
            v = all ? 1.0 : 0.0;
          } else {
            throw GraphError("template '" + b->template_name +
                             "' has no runtime semantics");
          }
          break;
        }
        case BlockKind::Opaque: {
          auto it = opaque.find(b->function);
          if (it == opaque.end()) {
            throw GraphError("opaque function '" + b->function + "' is not registered");
          }
          v = it->second(value.at(graph.input(b->id, 0)));
          break;
        }
      }
      value[b->id] = v;
      outputs[b->id][k] = v;
    }
    // Latch delay inputs after the full step so 2-cycles read consistent data.
    for (const auto& b : graph.blocks) {
      if (b.kind == BlockKind::UnitDelay) {
        delay_state[b.id] = value.at(graph.input(b.id, 0));
      }
    }
  }

  Trace extended = inputs;
  for (const auto& b : graph.blocks) {
    if (extended.has_signal(b.id)) continue;
    extended = extended.with_signal(b.id, std::move(outputs[b.id]));
  }
  return extended;
}

}  // namespace vbstl
