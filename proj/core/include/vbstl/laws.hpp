#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbstl/trace.hpp"
#include "vbstl/vbool.hpp"

namespace vbstl {

/// Outcome of one algebraic-law check over randomized inputs.
struct LawReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;

  bool passed() const { return failures == 0; }
};

/// Runs the connective-law inventory: associativity, commutativity,
/// identity/zero elements and De Morgan for both semantics; idempotence and
/// distributivity for max; the additive idempotence counterexamples
/// ((T,r) and+ (T,r) == (T,r/2), (F,r) and+ (F,r) == (F,2r)); and the strict
/// parallel-resistance bound 1/(1/x+1/y) < min(x,y). Robustness values are
/// compared with absolute tolerance 1e-9 (infinities must match exactly).
std::vector<LawReport> check_vbool_laws(std::size_t trials, std::uint64_t seed);

bool all_passed(const std::vector<LawReport>& reports);

// ---------------------------------------------------------------------------
// Demonstration data for comparing the semantics.
// ---------------------------------------------------------------------------

/// One of four step-profile traces (a-d) together with the robustness that
/// `alw (y >= 0)` receives under each semantics.
struct OrderingDemoRow {
  std::string trace;
  double max_signed = 0.0;
  double additive_signed = 0.0;
};

/// The four constructed profiles: (a) a single dip, (b) the same dip twice,
/// (c) a higher baseline with a deeper dip, (d) the baseline of (a) with a
/// deeper dip. Max ranks only the minimum; additive integrates, so (b) drops
/// below (a) while (c) rises above it.
std::vector<OrderingDemoRow> semantics_ordering_demo();

/// The trace behind a demo row, for plotting or re-evaluation.
Trace ordering_demo_trace(const std::string& name);

struct IsobarPoint {
  double x = 0.0;  // signed robustness of the left conjunct
  double y = 0.0;
  double max_signed = 0.0;
  double additive_signed = 0.0;
};

/// Signed robustness of x AND y under both semantics on a uniform grid of
/// signed inputs in [lo, hi]^2 (points_per_axis >= 2).
std::vector<IsobarPoint> isobar_grid(double lo, double hi, std::size_t points_per_axis);

}  // namespace vbstl
