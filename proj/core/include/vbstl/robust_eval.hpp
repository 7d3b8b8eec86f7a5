#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

#include "vbstl/formula.hpp"
#include "vbstl/trace.hpp"
#include "vbstl/vbool.hpp"

namespace vbstl {

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Whole-evaluation robustness mode. Max and Additive pick the default
/// connective semantics (overridable per node via @max/@add tags); Constant
/// and Random replace the robustness computation wholesale and keep only the
/// Boolean verdict.
enum class SemanticsMode { Max, Additive, Constant, Random };

SemanticsMode semantics_mode_from_string(const std::string& name);
std::string to_string(SemanticsMode mode);

struct SemanticsConfig {
  SemanticsMode default_connective = SemanticsMode::Max;
  double eq_constant = 100.0;       // K in the `=` comparison
  double implication_scale = 10.0;  // antecedent scale of additive implication
  double constant_magnitude = 100.0;
  std::uint64_t rng_seed = 0;       // Random mode only
};

/// Arithmetic expression value at sample k (time-shifted references use
/// hold-left lookup). Throws EvalError on unknown signals or NaN samples.
double eval_expr(const ExprPtr& e, const Trace& trace, std::size_t k);

/// Boolean (qualitative) satisfaction at sample k. Empty temporal windows are
/// vacuous: Always is true, Eventually and Until are false.
bool bool_sat(const FormulaPtr& f, const Trace& trace, std::size_t k);

// ---------------------------------------------------------------------------
// Temporal folds over pre-evaluated sample sequences. `widths` carries the
// per-sample step duration used by the additive integral weighting; a width
// of zero marks a massless sample (the convention used for the final sample
// of a trace).
// ---------------------------------------------------------------------------

VBool always_op(std::span<const VBool> samples, std::span<const double> widths,
                Semantics sem);
VBool eventually_op(std::span<const VBool> samples, std::span<const double> widths,
                    Semantics sem);

/// Until over local frames: index 0 of `left`/`widths` is the evaluation
/// instant, `window` indexes candidate release points into `right` (aligned
/// with `left`). For each release j, the left prefix [0, j) is conjoined;
/// an empty prefix is the identity.
VBool until_op(std::span<const VBool> left, std::span<const VBool> right,
               std::span<const double> widths, IndexRange window, Semantics sem);

/// Robust evaluation at sample k. The RNG is consulted only in Random mode;
/// the overload without one seeds a fresh generator from cfg.rng_seed.
VBool eval_robust(const FormulaPtr& f, const Trace& trace, std::size_t k,
                  const SemanticsConfig& cfg, std::mt19937_64& rng);
VBool eval_robust(const FormulaPtr& f, const Trace& trace, std::size_t k,
                  const SemanticsConfig& cfg);

}  // namespace vbstl
