#pragma once

#include <functional>
#include <map>
#include <string>

#include "vbstl/block_graph.hpp"
#include "vbstl/trace.hpp"

namespace vbstl {

/// Sample-wise functions an Opaque block may name. The executor can run a
/// registered opaque function; the translator always treats Opaque output as
/// a logged signal either way.
using OpaqueFn = std::function<double(double)>;

std::map<std::string, OpaqueFn> default_opaque_registry();

/// Reference executor: runs the graph sample-by-sample over the input trace
/// and returns the trace extended with every block's output column (keyed by
/// block id; Boolean-valued blocks emit 1/0, nonzero means true). UnitDelay
/// holds its previous input and emits its initial value at the first sample.
/// Division by zero propagates as NaN with a one-shot diagnostic on stderr.
///
/// Block ids that already name an input column are skipped when extending
/// (the usual case: an Inport whose id equals its signal).
Trace execute_graph(const BlockGraph& graph, const Trace& inputs,
                    const std::map<std::string, OpaqueFn>& opaque = default_opaque_registry());

}  // namespace vbstl
