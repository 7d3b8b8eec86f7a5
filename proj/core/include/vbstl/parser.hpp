#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "vbstl/formula.hpp"

namespace vbstl {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses one STL formula.
///
/// Grammar sketch (loosest to tightest):
///   formula  := or_f ('=>' or_f)*                      right-associative
///   or_f     := and_f ('or' and_f)*
///   and_f    := until_f ('and' until_f)*
///   until_f  := unary ('until' unary)?
///   unary    := 'not' unary | 'alw' unary | 'ev' unary | '#' NUM unary | atom
///   atom     := 'true' | 'false' | '(' formula ')' | expr REL expr
///
/// Temporal operators and `until` take an optional `_[a,b]` interval (omitted
/// means [0, horizon]); every connective takes an optional `@max` / `@add`
/// semantics tag (e.g. `and@add`, `alw@max_[0,5]`); `=>` additionally takes an
/// optional `#k` left-hand scale (e.g. `=>@add#5`); `#k` before a formula
/// scales its robustness. Predicates compare arithmetic expressions over
/// signals (+, -, *, /, abs, unary minus, and `name@offset` time shifts)
/// against each other; a comparison with a non-constant right-hand side is
/// normalized to `lhs - rhs REL 0`.
FormulaPtr parse_stl(const std::string& text);

/// Spec-file format: `#`-prefixed comment lines, `param NAME = value` lines,
/// and one formula (possibly spanning several lines). Parameters are
/// substituted textually before parsing; `param NAME` without a value
/// declares a parameter the caller must supply via `params`.
FormulaPtr parse_spec_text(const std::string& text,
                           const std::map<std::string, std::string>& params = {});
FormulaPtr parse_spec_file(const std::string& path,
                           const std::map<std::string, std::string>& params = {});

}  // namespace vbstl
