#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vbstl/formula.hpp"
#include "vbstl/trace.hpp"

namespace vbstl::test {

/// Independent reference for the Boolean validity relation, written directly
/// against the clause definitions with plain index scans. Shares no
/// evaluation code with the library (its own expression walker, its own
/// window arithmetic) so it can serve as the soundness oracle.
bool oracle_sat(const FormulaPtr& f, const Trace& trace, std::size_t k);

Trace make_trace(std::vector<double> times,
                 std::vector<std::pair<std::string, std::vector<double>>> signals);

/// Uniform-grid trace over the signals x and y with values drawn from
/// {-1, 0, 1}.
Trace random_small_trace(std::mt19937_64& rng, std::size_t max_len = 5);

/// All uniform-grid traces over x and y with values in {-1, 0, 1} and length
/// in [1, max_len]. max_len = 2 gives 90 traces; 3 gives 819.
std::vector<Trace> enumerate_small_traces(std::size_t max_len);

/// Random formula over signals x and y using {not, and, or, alw, ev, until}
/// with small intervals; `depth` bounds the connective tree height.
FormulaPtr random_formula(std::mt19937_64& rng, int depth);

/// Exhaustive formula set up to the given tree height over a fixed two-atom,
/// two-interval basis. Height 2 yields ~3.3k formulas.
std::vector<FormulaPtr> enumerate_formulas(int height);

/// Formula in negation normal form whose leaves are predicates over fresh
/// signals a0, a1, ... (one signal per leaf instance, so an atom can be
/// perturbed independently). `leaf_directions[i]` is the change of signal
/// a_i that lowers that leaf's signed robustness.
struct NnfSample {
  FormulaPtr formula;
  std::vector<double> leaf_directions;  // +1 = increase the sample, -1 = decrease
};

NnfSample random_nnf_formula(std::mt19937_64& rng, int depth);

/// Trace over the fresh leaf signals a0..a(count-1).
Trace random_leaf_trace(std::mt19937_64& rng, std::size_t leaf_count,
                        std::size_t max_len = 5);

}  // namespace vbstl::test
