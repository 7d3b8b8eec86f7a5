#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace vbstl {

/// A valued Boolean: an explicit truth value paired with a non-negative
/// robustness (possibly infinite). Unlike signed robustness, falsehood is
/// carried by the flag, not by the sign.
struct VBool {
  bool truth = false;
  double robustness = 0.0;

  bool operator==(const VBool& other) const = default;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline VBool top_v() { return {true, kInfinity}; }
inline VBool bot_v() { return {false, kInfinity}; }

/// The optimizer-facing view: +robustness when true, -robustness when false.
inline double signed_robustness(const VBool& v) {
  return v.truth ? v.robustness : -v.robustness;
}

/// Inverse of signed_robustness; 0 maps to (true, 0).
inline VBool from_signed(double s) { return {s >= 0.0, std::abs(s)}; }

// ---------------------------------------------------------------------------
// Comparisons
// ---------------------------------------------------------------------------

inline VBool leq_v(double x, double y) {
  return x <= y ? VBool{true, y - x} : VBool{false, x - y};
}

inline VBool lt_v(double x, double y) { return {x < y, std::abs(y - x)}; }
inline VBool geq_v(double x, double y) { return leq_v(y, x); }
inline VBool gt_v(double x, double y) { return {x > y, std::abs(y - x)}; }

/// Equality carries no distance information; it is K-robust either way.
inline VBool eq_v(double x, double y, double eq_constant) {
  return {x == y, eq_constant};
}

// ---------------------------------------------------------------------------
// Connectives
// ---------------------------------------------------------------------------

inline VBool not_v(const VBool& v) { return {!v.truth, v.robustness}; }

inline VBool and_max(const VBool& a, const VBool& b) {
  if (a.truth && b.truth) return {true, std::min(a.robustness, b.robustness)};
  if (!a.truth && b.truth) return a;
  if (a.truth && !b.truth) return b;
  return {false, std::max(a.robustness, b.robustness)};
}

inline VBool and_add(const VBool& a, const VBool& b) {
  if (a.truth && b.truth) {
    if (a.robustness == 0.0 || b.robustness == 0.0) return {true, 0.0};
    return {true, 1.0 / (1.0 / a.robustness + 1.0 / b.robustness)};
  }
  if (!a.truth && b.truth) return a;
  if (a.truth && !b.truth) return b;
  return {false, a.robustness + b.robustness};
}

inline VBool or_max(const VBool& a, const VBool& b) {
  return not_v(and_max(not_v(a), not_v(b)));
}

inline VBool or_add(const VBool& a, const VBool& b) {
  return not_v(and_add(not_v(a), not_v(b)));
}



/// Per-connective semantics selector: classical min/max combination or the
/// parallel-resistance/additive combination.
enum class Semantics { Max, Additive };

inline VBool and_op(const VBool& a, const VBool& b, Semantics sem) {
  return sem == Semantics::Max ? and_max(a, b) : and_add(a, b);
}

inline VBool or_op(const VBool& a, const VBool& b, Semantics sem) {
  return sem == Semantics::Max ? or_max(a, b) : or_add(a, b);
}

// ---------------------------------------------------------------------------
// Robustness scaling
// ---------------------------------------------------------------------------

/// `#`: scales robustness by k regardless of truth.
inline VBool sharp(const VBool& v, double k) { return {v.truth, v.robustness * k}; }

/// `#'`: divides when true, multiplies when false. With dt as the step width
/// this makes additive temporal folds behave like integrals. dt == 0 is
/// accepted as the zero-measure limit: a massless sample contributes its
/// truth but no robustness weight. An infinite robustness stays infinite.
inline VBool sharp_prime(const VBool& v, double dt) {
  if (std::isinf(v.robustness)) return v;
  if (dt == 0.0) {
    return v.truth ? VBool{true, v.robustness == 0.0 ? 0.0 : kInfinity}
                   : VBool{false, 0.0};
  }
  return v.truth ? VBool{true, v.robustness / dt} : VBool{false, v.robustness * dt};
}

/// Additive implication: the antecedent is scaled by k so the optimizer is
/// pushed toward making it true before attacking the consequent.
inline VBool implies_add(const VBool& lhs, const VBool& rhs, double k) {
  return or_add(not_v(sharp(lhs, k)), rhs);
}

/// Classical desugaring (not lhs) or rhs under max semantics.
inline VBool implies_max(const VBool& lhs, const VBool& rhs) {
  return or_max(not_v(lhs), rhs);
}

inline std::string to_string(const VBool& v) {
  return std::string(v.truth ? "(true, " : "(false, ") + std::to_string(v.robustness) +
         ")";
}

}  // namespace vbstl
