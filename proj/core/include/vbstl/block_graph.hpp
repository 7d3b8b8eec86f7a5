#pragma once

#include <stdexcept>
#include <string>
#include <map>
#include <vector>

#include "vbstl/formula.hpp"

namespace vbstl {

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class BlockKind {
  Inport,
  Constant,
  Relational,
  Logical,
  Arithmetic,
  Switch,
  UnitDelay,
  Abs,
  Template,
  Opaque,
};

enum class LogicOp { And, Or, Not };
enum class ArithOp { Add, Sub, Mul, Div };

/// Condition on a Switch block's second input. Ne means `u2 ~= 0`
/// (threshold fixed at zero); the remaining forms compare against the
/// threshold.
enum class SwitchCriterion { Ge, Gt, Ne, Lt, Le };

struct Block {
  std::string id;
  BlockKind kind = BlockKind::Inport;

  std::string signal;                       // Inport: trace signal name
  double value = 0.0;                       // Constant
  Relation rel = Relation::Lt;              // Relational
  LogicOp logic = LogicOp::And;             // Logical
  ArithOp arith = ArithOp::Add;             // Arithmetic
  SwitchCriterion criterion = SwitchCriterion::Ge;  // Switch
  double threshold = 0.0;                   // Switch
  double initial = 0.0;                     // UnitDelay
  std::string template_name;                // Template
  std::map<std::string, double> template_params;
  std::string function;                     // Opaque: registered function id
};

struct Wire {
  std::string from_block;
  int from_port = 0;
  std::string to_block;
  int to_port = 0;
};

/// A causal dataflow specification: blocks, wires, one designated
/// Boolean-valued output, and an optional list of user-forced logged signals.
/// Cycles are legal only when they pass through a UnitDelay.
struct BlockGraph {
  std::vector<Block> blocks;
  std::vector<Wire> wires;
  std::string output;
  std::vector<std::string> log;

  const Block& block(const std::string& id) const;
  bool has_block(const std::string& id) const;
  /// Source block id wired into `id`'s input port, or throws.
  const std::string& input(const std::string& id, int port) const;
  std::size_t input_count(const std::string& id) const;

  /// Structural checks: output designated and present, wires reference
  /// existing blocks, arities match the block kinds, ports are uniquely fed,
  /// and every cycle passes through a UnitDelay.
  void validate() const;
};

std::size_t block_arity(const Block& b);

/// JSON form:
///   {"blocks":[{"id":..., "kind":..., "params":{...}}, ...],
///    "wires":[{"from":[id,port], "to":[id,port]}, ...],
///    "output": id, "log":[id, ...]}
BlockGraph load_block_graph_text(const std::string& json_text);
BlockGraph load_block_graph_file(const std::string& path);

}  // namespace vbstl
