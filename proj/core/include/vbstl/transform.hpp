#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vbstl/block_graph.hpp"
#include "vbstl/formula.hpp"

namespace vbstl {

class TransformError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Compilation intermediates: a table pairs STL preconditions with either
/// formula consequents (FormulaTable) or signal-expression consequents
/// (SignalTable). The preconditions of any table are exhaustive by
/// construction (a single-entry table carries precondition true; a Switch
/// splits an entry into c and not c).
struct FormulaEntry {
  FormulaPtr precondition;
  FormulaPtr consequent;
};

struct SignalEntry {
  FormulaPtr precondition;
  ExprPtr consequent;
};

struct FormulaTable {
  std::vector<FormulaEntry> entries;
};

struct SignalTable {
  std::vector<SignalEntry> entries;
};

using Table = std::variant<FormulaTable, SignalTable>;

/// Rewrites signal consequents into formulas by the nonzero-is-true
/// convention: <p, e> becomes <p, not (e == 0)>.
FormulaTable s2f(const SignalTable& table);

enum class SwitchEncoding { Disjunctive, Implicative };

/// One STL formula from an exhaustive table: either the disjunction of
/// (precondition and consequent) or the conjunction of
/// (precondition => consequent). A single entry with precondition true
/// flattens to its consequent. The two encodings agree on truth but may
/// assign different robustness.
FormulaPtr flatten_table(const FormulaTable& table, SwitchEncoding encoding);

// Binary table products. Entry counts multiply; `entry_limit` bounds the
// result (the construction is exponential and must fail loudly).
FormulaTable combine_logical(LogicOp op, const FormulaTable& in1, const FormulaTable& in2,
                             std::size_t entry_limit);
FormulaTable combine_relational(Relation rel, const SignalTable& in1,
                                const SignalTable& in2, std::size_t entry_limit);
SignalTable combine_arithmetic(ArithOp op, const SignalTable& in1, const SignalTable& in2,
                               std::size_t entry_limit);

/// Switch product: for every condition entry (p, c), entries (p and c, in1)
/// and (p and not c, in3), expanded over the branch tables. The result has
/// alpha2 * (alpha1 + alpha3) entries.
Table translate_switch(const FormulaTable& cond, const Table& in1, const Table& in3,
                       std::size_t entry_limit);

enum class LoopMode { Auto, Templates, Unroll, Blackbox };
enum class LogReason { RecursiveLoop, InexpressibleBlock, FormulaAsSignal, UserForced };

std::string to_string(LogReason reason);
std::string to_string(LoopMode mode);
LoopMode loop_mode_from_string(const std::string& s);
SwitchEncoding switch_encoding_from_string(const std::string& s);

struct LoggedSignal {
  std::string signal;  // equals the originating block's output column
  std::string block;
  LogReason reason = LogReason::UserForced;
};

/// Delay-loop template library. A template either matches a structural
/// pattern (a Logical block in a two-cycle with a UnitDelay whose initial
/// value suits the operator) or is instantiated explicitly by a Template
/// block naming it.
struct TemplateRule {
  std::string name;
  std::optional<LogicOp> structural_op;  // And or Or for structural matching
  bool requires_nonzero_init = false;    // delay initial condition demanded
  /// Builds the operator formula from the translated loop input. `horizon`
  /// is the simulation horizon (needed by windowed rules), NaN if unknown.
  std::function<FormulaPtr(FormulaPtr inner, const std::map<std::string, double>& params,
                           double horizon)>
      emit;
};

class TemplateLibrary {
public:
  /// Ships with: always (And-loop, nonzero init), eventually (Or-loop, zero
  /// init), latch (alias of eventually), always_within (explicit only;
  /// param `window`, anchored to the end of the horizon).
  static TemplateLibrary standard();

  void add(TemplateRule rule);
  const TemplateRule* by_name(const std::string& name) const;
  const TemplateRule* structural(LogicOp op, double delay_initial) const;

private:
  std::vector<TemplateRule> rules_;
};

struct TranslateOptions {
  LoopMode loop_mode = LoopMode::Auto;
  SwitchEncoding encoding = SwitchEncoding::Implicative;
  std::size_t entry_limit = 4096;
  /// Simulation horizon in seconds; required by unroll mode and windowed
  /// templates, otherwise unused.
  double horizon = std::numeric_limits<double>::quiet_NaN();
  /// Number of samples for unroll mode (Unroll errors without it).
  std::size_t unroll_samples = 0;
  /// Emit a size warning when an unrolled loop exceeds this many conjuncts.
  std::size_t unroll_warning_threshold = 100;
  TemplateLibrary templates = TemplateLibrary::standard();
};

struct TranslationResult {
  FormulaPtr formula;
  std::vector<LoggedSignal> manifest;
  /// Intermediate table assigned to every visited block output.
  std::map<std::string, Table> tables;
  std::vector<std::string> warnings;
};

/// Backward depth-first translation from the designated output. Logged
/// signals (user-forced, recursive loops without a matching template,
/// inexpressible blocks, and formula-typed inputs where signals are needed)
/// are cut into opaque trace references and recorded in the manifest.
/// Deterministic: identical inputs produce identical formulas.
TranslationResult translate(const BlockGraph& graph, const TranslateOptions& options = {});

std::size_t table_entry_count(const Table& table);

}  // namespace vbstl
