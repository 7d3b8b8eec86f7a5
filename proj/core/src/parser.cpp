#include "vbstl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace vbstl {

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  At,
  Hash,
  Underscore,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,       // '=' or '=='
  Implies,  // '=>'
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(&text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws();
    current_ = Token{};
    current_.line = line_;
    current_.column = col_;
    if (pos_ >= (*text_).size()) {
      current_.kind = Tok::End;
      return;
    }
    const char c = (*text_)[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      lex_ident();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    switch (c) {
      case '(': take(Tok::LParen); return;
      case ')': take(Tok::RParen); return;
      case '[': take(Tok::LBracket); return;
      case ']': take(Tok::RBracket); return;
      case ',': take(Tok::Comma); return;
      case '@': take(Tok::At); return;
      case '#': take(Tok::Hash); return;
      case '_': take(Tok::Underscore); return;
      case '+': take(Tok::Plus); return;
      case '-': take(Tok::Minus); return;
      case '*': take(Tok::Star); return;
      case '/': take(Tok::Slash); return;
      case '<':
        if (pos_ + 1 < (*text_).size() && (*text_)[pos_ + 1] == '=') {
          take2(Tok::Le);
        } else {
          take(Tok::Lt);
        }
        return;
      case '>':
        if (pos_ + 1 < (*text_).size() && (*text_)[pos_ + 1] == '=') {
          take2(Tok::Ge);
        } else {
          take(Tok::Gt);
        }
        return;
      case '=':
        if (pos_ + 1 < (*text_).size() && (*text_)[pos_ + 1] == '>') {
          take2(Tok::Implies);
        } else if (pos_ + 1 < (*text_).size() && (*text_)[pos_ + 1] == '=') {
          take2(Tok::Eq);
        } else {
          take(Tok::Eq);
        }
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

  void skip_ws() {
    while (pos_ < (*text_).size()) {
      const char c = (*text_)[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  void take(Tok kind) {
    current_.kind = kind;
    current_.text = (*text_).substr(pos_, 1);
    ++pos_;
    ++col_;
  }

  void take2(Tok kind) {
    current_.kind = kind;
    current_.text = (*text_).substr(pos_, 2);
    pos_ += 2;
    col_ += 2;
  }

  void lex_ident() {
    std::size_t start = pos_;
    while (pos_ < (*text_).size()) {
      const char c = (*text_)[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    // `alw_[0,5]`: give the trailing underscore back so it introduces the
    // interval instead of ending up inside the identifier.
    if (pos_ > start + 1 && (*text_)[pos_ - 1] == '_' && pos_ < (*text_).size() &&
        (*text_)[pos_] == '[') {
      --pos_;
      --col_;
    }
    current_.kind = Tok::Ident;
    current_.text = (*text_).substr(start, pos_ - start);
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < (*text_).size() && std::isdigit(static_cast<unsigned char>((*text_)[pos_]))) {
      ++pos_;
      ++col_;
    }
    if (pos_ < (*text_).size() && (*text_)[pos_] == '.') {
      ++pos_;
      ++col_;
      while (pos_ < (*text_).size() && std::isdigit(static_cast<unsigned char>((*text_)[pos_]))) {
        ++pos_;
        ++col_;
      }
    }
    if (pos_ < (*text_).size() && ((*text_)[pos_] == 'e' || (*text_)[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < (*text_).size() && ((*text_)[pos_] == '+' || (*text_)[pos_] == '-')) ++pos_;
      if (pos_ < (*text_).size() && std::isdigit(static_cast<unsigned char>((*text_)[pos_]))) {
        while (pos_ < (*text_).size() && std::isdigit(static_cast<unsigned char>((*text_)[pos_]))) ++pos_;
        col_ += pos_ - mark;
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier
      }
    }
    current_.kind = Tok::Number;
    current_.text = (*text_).substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(current_.text.data(),
                                     current_.text.data() + current_.text.size(), value);
    if (ec != std::errc() || ptr != current_.text.data() + current_.text.size()) {
      throw ParseError("malformed number '" + current_.text + "'", current_.line,
                       current_.column);
    }
    current_.number = value;
  }

  const std::string* text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token current_;
};

bool is_keyword(const Token& t, const char* kw) {
  return t.kind == Tok::Ident && t.text == kw;
}

bool is_relation(Tok k) {
  return k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge || k == Tok::Eq;
}

Relation to_relation(Tok k) {
  switch (k) {
    case Tok::Lt: return Relation::Lt;
    case Tok::Le: return Relation::Le;
    case Tok::Gt: return Relation::Gt;
    case Tok::Ge: return Relation::Ge;
    default: return Relation::Eq;
  }
}

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text), lexer_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_formula();
    const Token& t = lexer_.peek();
    if (t.kind != Tok::End) {
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
    }
    return f;
  }

private:
  // ---- formula levels -----------------------------------------------------

  FormulaPtr parse_formula() { return parse_implies(); }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (lexer_.peek().kind == Tok::Implies) {
      lexer_.next();
      auto tag = parse_tag();
      std::optional<double> scale;
      if (lexer_.peek().kind == Tok::Hash) {
        lexer_.next();
        scale = expect_positive_number("implication scale");
      }
      FormulaPtr rhs = parse_implies();  // right-associative
      return f_implies(std::move(lhs), std::move(rhs), tag, scale);
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (is_keyword(lexer_.peek(), "or")) {
      lexer_.next();
      auto tag = parse_tag();
      lhs = f_or(std::move(lhs), parse_and(), tag);
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_until();
    while (is_keyword(lexer_.peek(), "and")) {
      lexer_.next();
      auto tag = parse_tag();
      lhs = f_and(std::move(lhs), parse_until(), tag);
    }
    return lhs;
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (is_keyword(lexer_.peek(), "until")) {
      lexer_.next();
      auto tag = parse_tag();
      Interval iv = parse_optional_interval();
      return f_until(iv, std::move(lhs), parse_unary(), tag);
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    const Token& t = lexer_.peek();
    if (is_keyword(t, "not")) {
      lexer_.next();
      return f_not(parse_unary());
    }
    if (is_keyword(t, "alw") || is_keyword(t, "ev")) {
      const bool always = t.text == "alw";
      lexer_.next();
      auto tag = parse_tag();
      Interval iv = parse_optional_interval();
      FormulaPtr child = parse_unary();
      return always ? f_always(iv, std::move(child), tag)
                    : f_eventually(iv, std::move(child), tag);
    }
    if (t.kind == Tok::Hash) {
      lexer_.next();
      double factor = expect_positive_number("scale factor");
      return f_scaled(factor, parse_unary());
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    const Token& t = lexer_.peek();
    if (is_keyword(t, "true")) {
      lexer_.next();
      return f_true();
    }
    if (is_keyword(t, "false")) {
      lexer_.next();
      return f_false();
    }
    if (t.kind == Tok::LParen) {
      // Either a parenthesized formula or a parenthesized arithmetic group;
      // try the formula reading first and fall back on failure.
      Lexer saved = lexer_;
      try {
        lexer_.next();  // '('
        FormulaPtr inner = parse_formula();
        expect(Tok::RParen, "')'");
        const Tok after = lexer_.peek().kind;
        if (!is_relation(after) && after != Tok::Plus && after != Tok::Minus &&
            after != Tok::Star && after != Tok::Slash) {
          return inner;
        }
      } catch (const ParseError&) {
      }
      lexer_ = saved;
      return parse_predicate();
    }
    return parse_predicate();
  }

  FormulaPtr parse_predicate() {
    ExprPtr lhs = parse_expr();
    const Token& t = lexer_.peek();
    if (!is_relation(t.kind)) {
      throw ParseError("expected comparison operator, got '" + t.text + "'", t.line,
                       t.column);
    }
    Relation rel = to_relation(lexer_.next().kind);
    ExprPtr rhs = parse_expr();
    return make_comparison(std::move(lhs), rel, std::move(rhs));
  }

  // ---- arithmetic expressions ---------------------------------------------

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (true) {
      const Tok k = lexer_.peek().kind;
      if (k == Tok::Plus) {
        lexer_.next();
        lhs = expr_add(std::move(lhs), parse_term());
      } else if (k == Tok::Minus) {
        lexer_.next();
        lhs = expr_sub(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (true) {
      const Tok k = lexer_.peek().kind;
      if (k == Tok::Star) {
        lexer_.next();
        lhs = expr_mul(std::move(lhs), parse_factor());
      } else if (k == Tok::Slash) {
        lexer_.next();
        lhs = expr_div(std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::Minus) {
      lexer_.next();
      ExprPtr inner = parse_factor();
      if (auto c = expr_constant_value(inner)) return expr_const(-*c);
      return expr_neg(std::move(inner));
    }
    if (t.kind == Tok::Number) {
      return expr_const(lexer_.next().number);
    }
    if (t.kind == Tok::LParen) {
      lexer_.next();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (is_keyword(t, "abs")) {
      lexer_.next();
      expect(Tok::LParen, "'('");
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return expr_abs(std::move(inner));
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "inf") {
        lexer_.next();
        return expr_const(std::numeric_limits<double>::infinity());
      }
      Token name = lexer_.next();
      double offset = 0.0;
      if (lexer_.peek().kind == Tok::At) {
        lexer_.next();
        bool negative = false;
        if (lexer_.peek().kind == Tok::Minus) {
          lexer_.next();
          negative = true;
        }
        const Token& num = lexer_.peek();
        if (num.kind != Tok::Number) {
          throw ParseError("expected time offset after '@'", num.line, num.column);
        }
        offset = lexer_.next().number;
        if (negative) offset = -offset;
      }
      return expr_signal(name.text, offset);
    }
    throw ParseError("expected expression, got '" + t.text + "'", t.line, t.column);
  }

  // ---- helpers ------------------------------------------------------------

  std::optional<Semantics> parse_tag() {
    if (lexer_.peek().kind != Tok::At) return std::nullopt;
    lexer_.next();
    const Token& t = lexer_.peek();
    if (is_keyword(t, "max")) {
      lexer_.next();
      return Semantics::Max;
    }
    if (is_keyword(t, "add")) {
      lexer_.next();
      return Semantics::Additive;
    }
    throw ParseError("expected 'max' or 'add' after '@'", t.line, t.column);
  }

  Interval parse_optional_interval() {
    if (lexer_.peek().kind != Tok::Underscore) return Interval{};
    Token underscore = lexer_.next();
    expect(Tok::LBracket, "'['");
    double lo = parse_interval_bound();
    expect(Tok::Comma, "','");
    double hi = parse_interval_bound();
    expect(Tok::RBracket, "']'");
    if (lo < 0 || hi < 0) {
      throw ParseError("interval bounds must be non-negative", underscore.line,
                       underscore.column);
    }
    if (lo > hi) {
      throw ParseError("malformed interval: lower bound exceeds upper bound",
                       underscore.line, underscore.column);
    }
    return Interval{lo, hi};
  }

  double parse_interval_bound() {
    const Token& t = lexer_.peek();
    ExprPtr e = parse_expr();
    auto c = expr_constant_value(e);
    if (!c) {
      throw ParseError("interval bound must be a constant expression", t.line, t.column);
    }
    return *c;
  }

  double expect_positive_number(const char* what) {
    const Token& t = lexer_.peek();
    if (t.kind != Tok::Number) {
      throw ParseError(std::string("expected ") + what, t.line, t.column);
    }
    double v = lexer_.next().number;
    if (!(v > 0)) {
      throw ParseError(std::string(what) + " must be positive", t.line, t.column);
    }
    return v;
  }

  void expect(Tok kind, const char* what) {
    const Token& t = lexer_.peek();
    if (t.kind != kind) {
      throw ParseError(std::string("expected ") + what + ", got '" + t.text + "'", t.line,
                       t.column);
    }
    lexer_.next();
  }

  const std::string& text_;
  Lexer lexer_;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string substitute_params(const std::string& text,
                              const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      auto it = values.find(word);
      if (it != values.end()) {
        out += "(" + it->second + ")";
      } else {
        out += word;
      }
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

FormulaPtr parse_stl(const std::string& text) {
  Parser parser(text);
  return parser.parse();
}

FormulaPtr parse_spec_text(const std::string& text,
                           const std::map<std::string, std::string>& params) {
  std::map<std::string, std::string> values;
  std::vector<std::string> declared_without_value;
  std::string formula_text;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string stripped = strip(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped.rfind("param", 0) == 0 &&
        (stripped.size() == 5 || std::isspace(static_cast<unsigned char>(stripped[5])))) {
      std::string rest = strip(stripped.substr(5));
      auto eq = rest.find('=');
      if (eq == std::string::npos) {
        if (rest.empty()) throw ParseError("param line without a name", 1, 1);
        declared_without_value.push_back(rest);
      } else {
        std::string name = strip(rest.substr(0, eq));
        std::string value = strip(rest.substr(eq + 1));
        if (name.empty() || value.empty()) {
          throw ParseError("malformed param line '" + stripped + "'", 1, 1);
        }
        values[name] = value;
      }
      continue;
    }
    if (!formula_text.empty()) formula_text += ' ';
    formula_text += stripped;
  }

  for (const auto& [name, value] : params) values[name] = value;
  for (const auto& name : declared_without_value) {
    if (!values.count(name)) {
      throw ParseError("parameter '" + name + "' requires a value", 1, 1);
    }
  }
  if (formula_text.empty()) {
    throw ParseError("spec file contains no formula", 1, 1);
  }
  return parse_stl(substitute_params(formula_text, values));
}

FormulaPtr parse_spec_file(const std::string& path,
                           const std::map<std::string, std::string>& params) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open spec file '" + path + "'", 0, 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str(), params);
}

}  // namespace vbstl
