#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "vbstl/graph_exec.hpp"
#include "vbstl/parser.hpp"
#include "vbstl/robust_eval.hpp"
#include "vbstl/transform.hpp"

using namespace vbstl;

namespace {

Trace synthetic_trace(std::size_t samples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<double> times(samples), y(samples), z(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    times[k] = 0.01 * static_cast<double>(k);
    y[k] = 3.0 + noise(rng);
    z[k] = noise(rng);
  }
  return Trace(std::move(times), {{"y", std::move(y)}, {"z", std::move(z)}});
}

SemanticsConfig config(SemanticsMode mode) {
  SemanticsConfig cfg;
  cfg.default_connective = mode;
  return cfg;
}

void BM_AlwaysMax(benchmark::State& state) {
  const Trace trace = synthetic_trace(static_cast<std::size_t>(state.range(0)));
  const FormulaPtr phi = parse_stl("alw ((y >= 0) and (z <= 1))");
  const SemanticsConfig cfg = config(SemanticsMode::Max);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_robust(phi, trace, 0, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlwaysMax)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_AlwaysAdditive(benchmark::State& state) {
  const Trace trace = synthetic_trace(static_cast<std::size_t>(state.range(0)));
  const FormulaPtr phi = parse_stl("alw ((y >= 0) and@add (z <= 1))");
  const SemanticsConfig cfg = config(SemanticsMode::Additive);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_robust(phi, trace, 0, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlwaysAdditive)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_NestedEventuallyWindow(benchmark::State& state) {
  const Trace trace = synthetic_trace(static_cast<std::size_t>(state.range(0)));
  const FormulaPtr phi = parse_stl("alw (ev_[0,0.2] (z > 0.9))");
  const SemanticsConfig cfg = config(SemanticsMode::Max);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_robust(phi, trace, 0, cfg));
  }
}
BENCHMARK(BM_NestedEventuallyWindow)->Arg(500)->Arg(2000);

void BM_ParseFormula(benchmark::State& state) {
  const std::string text =
      "alw_[11,35] (((theta < theta@0.01) or (theta > theta@0.01)) => "
      "(alw_[1,5] (abs((lambda - 14.7) / 14.7) < 0.17)))";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_stl(text));
  }
}
BENCHMARK(BM_ParseFormula);

void BM_TranslateSwitchGraph(benchmark::State& state) {
  const std::string graph_json = R"({
    "blocks": [
      {"id": "gear", "kind": "inport"},
      {"id": "v", "kind": "inport"},
      {"id": "omega", "kind": "inport"},
      {"id": "c50", "kind": "constant", "params": {"value": 50}},
      {"id": "c200", "kind": "constant", "params": {"value": 200}},
      {"id": "c5000", "kind": "constant", "params": {"value": 5000}},
      {"id": "sub1", "kind": "switch", "params": {"criterion": "<", "threshold": 3}},
      {"id": "sub2", "kind": "relational", "params": {"op": "<"}},
      {"id": "relw", "kind": "relational", "params": {"op": "<"}},
      {"id": "phi", "kind": "logical", "params": {"op": "and"}}
    ],
    "wires": [
      {"from": ["c50", 0], "to": ["sub1", 0]},
      {"from": ["gear", 0], "to": ["sub1", 1]},
      {"from": ["c200", 0], "to": ["sub1", 2]},
      {"from": ["v", 0], "to": ["sub2", 0]},
      {"from": ["sub1", 0], "to": ["sub2", 1]},
      {"from": ["omega", 0], "to": ["relw", 0]},
      {"from": ["c5000", 0], "to": ["relw", 1]},
      {"from": ["relw", 0], "to": ["phi", 0]},
      {"from": ["sub2", 0], "to": ["phi", 1]}
    ],
    "output": "phi"
  })";
  const BlockGraph graph = load_block_graph_text(graph_json);
  for (auto _ : state) {
    benchmark::DoNotOptimize(translate(graph));
  }
}
BENCHMARK(BM_TranslateSwitchGraph);

void BM_ExecuteGraph(benchmark::State& state) {
  const BlockGraph graph = load_block_graph_text(R"({
    "blocks": [
      {"id": "omega", "kind": "inport"},
      {"id": "c4500", "kind": "constant", "params": {"value": 4500}},
      {"id": "lt1", "kind": "relational", "params": {"op": "<"}},
      {"id": "req", "kind": "logical", "params": {"op": "and"}},
      {"id": "d1", "kind": "unit_delay", "params": {"initial": 1}}
    ],
    "wires": [
      {"from": ["omega", 0], "to": ["lt1", 0]},
      {"from": ["c4500", 0], "to": ["lt1", 1]},
      {"from": ["lt1", 0], "to": ["req", 0]},
      {"from": ["d1", 0], "to": ["req", 1]},
      {"from": ["req", 0], "to": ["d1", 0]}
    ],
    "output": "req"
  })");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> omega(4000.0, 5000.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> times(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = static_cast<double>(k);
    w[k] = omega(rng);
  }
  const Trace input(times, {{"omega", w}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute_graph(graph, input));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExecuteGraph)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
