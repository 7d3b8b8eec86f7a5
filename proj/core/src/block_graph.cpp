#include "vbstl/block_graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vbstl {

const Block& BlockGraph::block(const std::string& id) const {
  for (const auto& b : blocks) {
    if (b.id == id) return b;
  }
  throw GraphError("unknown block '" + id + "'");
}

bool BlockGraph::has_block(const std::string& id) const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [&](const Block& b) { return b.id == id; });
}

const std::string& BlockGraph::input(const std::string& id, int port) const {
  for (const auto& w : wires) {
    if (w.to_block == id && w.to_port == port) return w.from_block;
  }
  throw GraphError("block '" + id + "' has no wire into port " + std::to_string(port));
}

std::size_t BlockGraph::input_count(const std::string& id) const {
  std::size_t n = 0;
  for (const auto& w : wires) {
    if (w.to_block == id) ++n;
  }
  return n;
}

std::size_t block_arity(const Block& b) {
  switch (b.kind) {
    case BlockKind::Inport:
    case BlockKind::Constant:
      return 0;
    case BlockKind::Logical:
      return b.logic == LogicOp::Not ? 1 : 2;
    case BlockKind::Relational:
    case BlockKind::Arithmetic:
      return 2;
    case BlockKind::Switch:
      return 3;
    case BlockKind::UnitDelay:
    case BlockKind::Abs:
    case BlockKind::Template:
    case BlockKind::Opaque:
      return 1;
  }
  return 0;
}

namespace {

/// Cycle check on the dependency graph with UnitDelay inputs removed: a
/// delay's output depends on state, not on its same-step input, so any cycle
/// left over is algebraic.
void check_algebraic_loops(const BlockGraph& g) {
  std::map<std::string, std::vector<std::string>> deps;
  for (const auto& w : g.wires) {
    if (g.block(w.to_block).kind == BlockKind::UnitDelay) continue;
    deps[w.to_block].push_back(w.from_block);
  }
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> marks;
  for (const auto& b : g.blocks) marks[b.id] = Mark::White;

  std::function<void(const std::string&)> dfs = [&](const std::string& id) {
    marks[id] = Mark::Grey;
    for (const auto& dep : deps[id]) {
      if (marks[dep] == Mark::Grey) {
        throw GraphError("algebraic loop through block '" + dep +
                         "' (cycles must pass through a unit delay)");
      }
      if (marks[dep] == Mark::White) dfs(dep);
    }
    marks[id] = Mark::Black;
  };
  for (const auto& b : g.blocks) {
    if (marks[b.id] == Mark::White) dfs(b.id);
  }
}

}  // namespace

void BlockGraph::validate() const {
  if (output.empty()) {
    throw GraphError("graph has no designated output");
  }
  std::set<std::string> ids;
  for (const auto& b : blocks) {
    if (!ids.insert(b.id).second) {
      throw GraphError("duplicate block id '" + b.id + "'");
    }
  }
  if (!ids.count(output)) {
    throw GraphError("output '" + output + "' is not a block");
  }
  for (const auto& name : log) {
    if (!ids.count(name)) {
      throw GraphError("logged signal '" + name + "' is not a block");
    }
  }
  std::set<std::pair<std::string, int>> fed;
  for (const auto& w : wires) {
    if (!ids.count(w.from_block)) {
      throw GraphError("wire references unknown source block '" + w.from_block + "'");
    }
    if (!ids.count(w.to_block)) {
      throw GraphError("wire references unknown destination block '" + w.to_block + "'");
    }
    if (!fed.insert({w.to_block, w.to_port}).second) {
      throw GraphError("port " + std::to_string(w.to_port) + " of block '" + w.to_block +
                       "' is fed twice");
    }
  }
  for (const auto& b : blocks) {
    const std::size_t need = block_arity(b);
    for (std::size_t port = 0; port < need; ++port) {
      if (!fed.count({b.id, static_cast<int>(port)})) {
        throw GraphError("block '" + b.id + "' is missing input port " +
                         std::to_string(port));
      }
    }
    if (input_count(b.id) != need) {
      throw GraphError("block '" + b.id + "' has " + std::to_string(input_count(b.id)) +
                       " inputs, expected " + std::to_string(need));
    }
  }
  check_algebraic_loops(*this);
}

namespace {

using nlohmann::json;

BlockKind kind_from_string(const std::string& s) {
  if (s == "inport") return BlockKind::Inport;
  if (s == "constant") return BlockKind::Constant;
  if (s == "relational") return BlockKind::Relational;
  if (s == "logical") return BlockKind::Logical;
  if (s == "arithmetic") return BlockKind::Arithmetic;
  if (s == "switch") return BlockKind::Switch;
  if (s == "unit_delay") return BlockKind::UnitDelay;
  if (s == "abs") return BlockKind::Abs;
  if (s == "template") return BlockKind::Template;
  if (s == "opaque") return BlockKind::Opaque;
  throw GraphError("unknown block kind '" + s + "'");
}

Relation relation_from_string(const std::string& s) {
  if (s == "<" || s == "lt") return Relation::Lt;
  if (s == "<=" || s == "le") return Relation::Le;
  if (s == ">=" || s == "ge") return Relation::Ge;
  if (s == ">" || s == "gt") return Relation::Gt;
  if (s == "==" || s == "=" || s == "eq") return Relation::Eq;
  throw GraphError("unknown relational operator '" + s + "'");
}

Block parse_block(const json& jb) {
  Block b;
  b.id = jb.at("id").get<std::string>();
  b.kind = kind_from_string(jb.at("kind").get<std::string>());
  const json params = jb.value("params", json::object());
  switch (b.kind) {
    case BlockKind::Inport:
      b.signal = params.value("signal", b.id);
      break;
    case BlockKind::Constant:
      b.value = params.at("value").get<double>();
      break;
    case BlockKind::Relational:
      b.rel = relation_from_string(params.at("op").get<std::string>());
      break;
    case BlockKind::Logical: {
      const std::string op = params.at("op").get<std::string>();
      if (op == "and") {
        b.logic = LogicOp::And;
      } else if (op == "or") {
        b.logic = LogicOp::Or;
      } else if (op == "not") {
        b.logic = LogicOp::Not;
      } else {
        throw GraphError("unknown logical operator '" + op + "'");
      }
      break;
    }
    case BlockKind::Arithmetic: {
      const std::string op = params.at("op").get<std::string>();
      if (op == "+" || op == "add") {
        b.arith = ArithOp::Add;
      } else if (op == "-" || op == "sub") {
        b.arith = ArithOp::Sub;
      } else if (op == "*" || op == "mul") {
        b.arith = ArithOp::Mul;
      } else if (op == "/" || op == "div") {
        b.arith = ArithOp::Div;
      } else {
        throw GraphError("unknown arithmetic operator '" + op + "'");
      }
      break;
    }
    case BlockKind::Switch: {
      const std::string crit = params.at("criterion").get<std::string>();
      if (crit == ">=" || crit == "ge") {
        b.criterion = SwitchCriterion::Ge;
      } else if (crit == ">" || crit == "gt") {
        b.criterion = SwitchCriterion::Gt;
      } else if (crit == "~=" || crit == "ne") {
        b.criterion = SwitchCriterion::Ne;
      } else if (crit == "<" || crit == "lt") {
        b.criterion = SwitchCriterion::Lt;
      } else if (crit == "<=" || crit == "le") {
        b.criterion = SwitchCriterion::Le;
      } else {
        throw GraphError("unknown switch criterion '" + crit + "'");
      }
      b.threshold = params.value("threshold", 0.0);
      if (b.criterion == SwitchCriterion::Ne && b.threshold != 0.0) {
        throw GraphError("switch criterion ~= supports only a zero threshold");
      }
      break;
    }
    case BlockKind::UnitDelay:
      b.initial = params.value("initial", 0.0);
      break;
    case BlockKind::Abs:
      break;
    case BlockKind::Template: {
      b.template_name = params.at("name").get<std::string>();
      for (const auto& [key, value] : params.items()) {
        if (key != "name") b.template_params[key] = value.get<double>();
      }
      break;
    }
    case BlockKind::Opaque:
      b.function = params.at("function").get<std::string>();
      break;
  }
  return b;
}

BlockGraph parse_graph(const json& j) {
  BlockGraph g;
  for (const auto& jb : j.at("blocks")) g.blocks.push_back(parse_block(jb));
  for (const auto& jw : j.at("wires")) {
    Wire w;
    const auto& from = jw.at("from");
    const auto& to = jw.at("to");
    w.from_block = from.at(0).get<std::string>();
    w.from_port = from.size() > 1 ? from.at(1).get<int>() : 0;
    w.to_block = to.at(0).get<std::string>();
    w.to_port = to.size() > 1 ? to.at(1).get<int>() : 0;
    g.wires.push_back(w);
  }
  g.output = j.at("output").get<std::string>();
  if (j.contains("log")) {
    for (const auto& name : j.at("log")) g.log.push_back(name.get<std::string>());
  }
  g.validate();
  return g;
}

}  // namespace

BlockGraph load_block_graph_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw GraphError(std::string("invalid graph JSON: ") + e.what());
  }
  try {
    return parse_graph(j);
  } catch (const json::exception& e) {
    throw GraphError(std::string("invalid graph document: ") + e.what());
  }
}

BlockGraph load_block_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot open graph file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_block_graph_text(buf.str());
}

}  // namespace vbstl
