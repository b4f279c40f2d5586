#include "nsrag/filter.hpp"

#include <cctype>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

const char* kFields[] = {"pdf_id", "page_number", "table_name", "column_name",
                         "primary_key", "text"};

bool is_known_field(const std::string& name) {
  for (const char* f : kFields) {
    if (name == f) return true;
  }
  return false;
}

[[noreturn]] void syntax_error(size_t offset, const std::string& why) {
  raise(ErrorKind::FilterSyntax, why + " (at offset " + std::to_string(offset) + ")");
}

struct Token {
  enum class Kind { Ident, Number, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  Value literal;
  size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        pos_++;
      }
      current_.kind = Token::Kind::Ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      size_t start = pos_;
      bool is_float = false;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          pos_++;
        } else if (d == '.' && !is_float) {
          is_float = true;
          pos_++;
        } else if ((d == 'e' || d == 'E') && pos_ > start) {
          is_float = true;
          pos_++;
          if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) pos_++;
        } else {
          break;
        }
      }
      std::string num = text_.substr(start, pos_ - start);
      current_.kind = Token::Kind::Number;
      current_.text = num;
      if (is_float) {
        current_.literal = Value(std::stod(num));
      } else {
        try {
          current_.literal = Value(static_cast<std::int64_t>(std::stoll(num)));
        } catch (...) {
          syntax_error(start, "integer literal out of range");
        }
      }
      return;
    }
    if (c == '\'' || c == '"') {
      char quote = c;
      size_t start = pos_++;
      std::string out;
      while (pos_ < text_.size() && text_[pos_] != quote) {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
          char e = text_[++pos_];
          switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: out += e;
          }
          pos_++;
        } else {
          out += text_[pos_++];
        }
      }
      if (pos_ >= text_.size()) syntax_error(start, "unterminated string literal");
      pos_++;
      current_.kind = Token::Kind::String;
      current_.literal = Value(std::move(out));
      return;
    }
    static const char* kTwoChar[] = {"==", "!=", "<=", ">="};
    for (const char* sym : kTwoChar) {
      if (text_.compare(pos_, 2, sym) == 0) {
        current_.kind = Token::Kind::Symbol;
        current_.text = sym;
        pos_ += 2;
        return;
      }
    }
    if (std::string("<>+-*/()[],").find(c) != std::string::npos) {
      current_.kind = Token::Kind::Symbol;
      current_.text = std::string(1, c);
      pos_++;
      return;
    }
    syntax_error(pos_, std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token current_;
};

using NodePtr = std::unique_ptr<FilterExpr>;

NodePtr make_node(FilterExpr::Op op) {
  auto node = std::make_unique<FilterExpr>();
  node->op = op;
  return node;
}

NodePtr make_binary(FilterExpr::Op op, NodePtr lhs, NodePtr rhs) {
  auto node = make_node(op);
  node->args.push_back(std::move(lhs));
  node->args.push_back(std::move(rhs));
  return node;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) {}

  NodePtr parse() {
    NodePtr expr = parse_or();
    if (lexer_.peek().kind != Token::Kind::End) {
      syntax_error(lexer_.peek().offset, "unexpected trailing input");
    }
    return expr;
  }

 private:
  bool at_ident(const char* word) const {
    return lexer_.peek().kind == Token::Kind::Ident && lexer_.peek().text == word;
  }
  bool at_symbol(const char* sym) const {
    return lexer_.peek().kind == Token::Kind::Symbol && lexer_.peek().text == sym;
  }

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (at_ident("or")) {
      lexer_.take();
      lhs = make_binary(FilterExpr::Op::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  NodePtr parse_and() {
    NodePtr lhs = parse_not();
    while (at_ident("and")) {
      lexer_.take();
      lhs = make_binary(FilterExpr::Op::And, std::move(lhs), parse_not());
    }
    return lhs;
  }

  NodePtr parse_not() {
    if (at_ident("not")) {
      lexer_.take();
      auto node = make_node(FilterExpr::Op::Not);
      node->args.push_back(parse_not());
      return node;
    }
    return parse_comparison();
  }

  NodePtr parse_comparison() {
    NodePtr lhs = parse_additive();
    if (lexer_.peek().kind == Token::Kind::Symbol) {
      const std::string& sym = lexer_.peek().text;
      FilterExpr::Op op;
      if (sym == "==") op = FilterExpr::Op::Eq;
      else if (sym == "!=") op = FilterExpr::Op::Ne;
      else if (sym == "<") op = FilterExpr::Op::Lt;
      else if (sym == "<=") op = FilterExpr::Op::Le;
      else if (sym == ">") op = FilterExpr::Op::Gt;
      else if (sym == ">=") op = FilterExpr::Op::Ge;
      else return lhs;
      lexer_.take();
      return make_binary(op, std::move(lhs), parse_additive());
    }
    if (at_ident("in")) {
      lexer_.take();
      return make_binary(FilterExpr::Op::In, std::move(lhs), parse_additive());
    }
    if (at_ident("not")) {
      size_t offset = lexer_.peek().offset;
      lexer_.take();
      if (!at_ident("in")) syntax_error(offset, "expected 'in' after 'not'");
      lexer_.take();
      return make_binary(FilterExpr::Op::NotIn, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  NodePtr parse_additive() {
    NodePtr lhs = parse_multiplicative();
    while (at_symbol("+") || at_symbol("-")) {
      FilterExpr::Op op = lexer_.take().text == "+" ? FilterExpr::Op::Add : FilterExpr::Op::Sub;
      lhs = make_binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  NodePtr parse_multiplicative() {
    NodePtr lhs = parse_unary();
    while (at_symbol("*") || at_symbol("/")) {
      FilterExpr::Op op = lexer_.take().text == "*" ? FilterExpr::Op::Mul : FilterExpr::Op::Div;
      lhs = make_binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (at_symbol("-")) {
      lexer_.take();
      auto node = make_node(FilterExpr::Op::Negate);
      node->args.push_back(parse_unary());
      return node;
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    const Token& tok = lexer_.peek();
    if (tok.kind == Token::Kind::Number || tok.kind == Token::Kind::String) {
      auto node = make_node(FilterExpr::Op::Literal);
      node->literal = lexer_.take().literal;
      return node;
    }
    if (tok.kind == Token::Kind::Symbol && tok.text == "(") {
      lexer_.take();
      NodePtr inner = parse_or();
      if (!at_symbol(")")) syntax_error(lexer_.peek().offset, "expected ')'");
      lexer_.take();
      return inner;
    }
    if (tok.kind == Token::Kind::Symbol && tok.text == "[") {
      lexer_.take();
      auto node = make_node(FilterExpr::Op::ListExpr);
      if (!at_symbol("]")) {
        while (true) {
          node->args.push_back(parse_or());
          if (at_symbol(",")) {
            lexer_.take();
            continue;
          }
          break;
        }
      }
      if (!at_symbol("]")) syntax_error(lexer_.peek().offset, "expected ']'");
      lexer_.take();
      return node;
    }
    if (tok.kind == Token::Kind::Ident) {
      if (is_known_field(tok.text)) {
        auto node = make_node(FilterExpr::Op::Field);
        node->field = lexer_.take().text;
        return node;
      }
      raise(ErrorKind::UnknownField,
            "'" + tok.text + "' is not a filterable field (at offset " +
                std::to_string(tok.offset) + "); fields are pdf_id, page_number, table_name, "
                "column_name, primary_key, text");
    }
    syntax_error(tok.offset, "expected an expression");
  }

  Lexer lexer_;
};

// -----------------------------------------------------------------------
// Static type check
// -----------------------------------------------------------------------

enum class Type { Bool, Int, Float, Str, List };

bool numeric(Type t) { return t == Type::Int || t == Type::Float; }

Type check(const FilterExpr& node) {
  switch (node.op) {
    case FilterExpr::Op::True: return Type::Bool;
    case FilterExpr::Op::Literal:
      if (node.literal.is_int()) return Type::Int;
      if (node.literal.is_float()) return Type::Float;
      if (node.literal.is_string()) return Type::Str;
      return Type::List;
    case FilterExpr::Op::Field:
      return node.field == "page_number" ? Type::Int : Type::Str;
    case FilterExpr::Op::Not:
      if (check(*node.args[0]) != Type::Bool) {
        raise(ErrorKind::FilterType, "'not' expects a boolean operand");
      }
      return Type::Bool;
    case FilterExpr::Op::Negate:
      if (!numeric(check(*node.args[0]))) {
        raise(ErrorKind::FilterType, "unary '-' expects a numeric operand");
      }
      return check(*node.args[0]);
    case FilterExpr::Op::And:
    case FilterExpr::Op::Or:
      if (check(*node.args[0]) != Type::Bool || check(*node.args[1]) != Type::Bool) {
        raise(ErrorKind::FilterType, "'and'/'or' expect boolean operands");
      }
      return Type::Bool;
    case FilterExpr::Op::Eq:
    case FilterExpr::Op::Ne:
    case FilterExpr::Op::Lt:
    case FilterExpr::Op::Le:
    case FilterExpr::Op::Gt:
    case FilterExpr::Op::Ge: {
      Type l = check(*node.args[0]);
      Type r = check(*node.args[1]);
      bool ok = (numeric(l) && numeric(r)) || (l == Type::Str && r == Type::Str);
      if (!ok) raise(ErrorKind::FilterType, "comparison operands have incompatible types");
      return Type::Bool;
    }
    case FilterExpr::Op::In:
    case FilterExpr::Op::NotIn: {
      check(*node.args[0]);
      if (check(*node.args[1]) != Type::List) {
        raise(ErrorKind::FilterType, "'in' expects a list right operand");
      }
      return Type::Bool;
    }
    case FilterExpr::Op::Add:
    case FilterExpr::Op::Sub:
    case FilterExpr::Op::Mul:
    case FilterExpr::Op::Div: {
      Type l = check(*node.args[0]);
      Type r = check(*node.args[1]);
      if (!numeric(l) || !numeric(r)) {
        raise(ErrorKind::FilterType, "arithmetic expects numeric operands");
      }
      return l == Type::Float || r == Type::Float || node.op == FilterExpr::Op::Div ? Type::Float
                                                                                    : Type::Int;
    }
    case FilterExpr::Op::ListExpr:
      for (const auto& arg : node.args) check(*arg);
      return Type::List;
  }
  return Type::Bool;
}

// -----------------------------------------------------------------------
// Evaluation
// -----------------------------------------------------------------------

Value eval(const FilterExpr& node, const FilterContext& entry);

bool eval_bool(const FilterExpr& node, const FilterContext& entry) {
  Value v = eval(node, entry);
  if (!v.is_bool()) raise(ErrorKind::FilterType, "expected a boolean subexpression");
  return v.as_bool();
}

bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return a.as_double() == b.as_double();
  return a == b;
}

int compare_values(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    double l = a.as_double(), r = b.as_double();
    return l < r ? -1 : l > r ? 1 : 0;
  }
  if (a.is_string() && b.is_string()) {
    return a.as_string().compare(b.as_string()) < 0 ? -1
           : a.as_string() == b.as_string()         ? 0
                                                    : 1;
  }
  raise(ErrorKind::FilterType, "cannot compare " + a.to_literal_text() + " with " +
                                   b.to_literal_text());
}

Value eval(const FilterExpr& node, const FilterContext& entry) {
  switch (node.op) {
    case FilterExpr::Op::True: return Value(true);
    case FilterExpr::Op::Literal: return node.literal;
    case FilterExpr::Op::Field:
      if (node.field == "pdf_id") return Value(entry.pdf_id);
      if (node.field == "page_number") return Value(entry.page_number);
      if (node.field == "table_name") return Value(entry.table_name);
      if (node.field == "column_name") return Value(entry.column_name);
      if (node.field == "primary_key") return Value(entry.primary_key);
      return Value(entry.text);
    case FilterExpr::Op::Not: return Value(!eval_bool(*node.args[0], entry));
    case FilterExpr::Op::Negate: {
      Value v = eval(*node.args[0], entry);
      if (v.is_int()) return Value(-v.as_int());
      if (v.is_float()) return Value(-v.as_float());
      raise(ErrorKind::FilterType, "unary '-' on a non-number");
    }
    case FilterExpr::Op::And:
      return Value(eval_bool(*node.args[0], entry) && eval_bool(*node.args[1], entry));
    case FilterExpr::Op::Or:
      return Value(eval_bool(*node.args[0], entry) || eval_bool(*node.args[1], entry));
    case FilterExpr::Op::Eq:
      return Value(values_equal(eval(*node.args[0], entry), eval(*node.args[1], entry)));
    case FilterExpr::Op::Ne:
      return Value(!values_equal(eval(*node.args[0], entry), eval(*node.args[1], entry)));
    case FilterExpr::Op::Lt:
      return Value(compare_values(eval(*node.args[0], entry), eval(*node.args[1], entry)) < 0);
    case FilterExpr::Op::Le:
      return Value(compare_values(eval(*node.args[0], entry), eval(*node.args[1], entry)) <= 0);
    case FilterExpr::Op::Gt:
      return Value(compare_values(eval(*node.args[0], entry), eval(*node.args[1], entry)) > 0);
    case FilterExpr::Op::Ge:
      return Value(compare_values(eval(*node.args[0], entry), eval(*node.args[1], entry)) >= 0);
    case FilterExpr::Op::In:
    case FilterExpr::Op::NotIn: {
      Value needle = eval(*node.args[0], entry);
      Value haystack = eval(*node.args[1], entry);
      if (!haystack.is_list()) raise(ErrorKind::FilterType, "'in' right operand is not a list");
      bool found = false;
      for (const auto& e : haystack.as_list()) {
        if (values_equal(needle, e)) {
          found = true;
          break;
        }
      }
      return Value(node.op == FilterExpr::Op::In ? found : !found);
    }
    case FilterExpr::Op::Add:
    case FilterExpr::Op::Sub:
    case FilterExpr::Op::Mul:
    case FilterExpr::Op::Div: {
      Value l = eval(*node.args[0], entry);
      Value r = eval(*node.args[1], entry);
      if (!l.is_number() || !r.is_number()) {
        raise(ErrorKind::FilterType, "arithmetic on non-numbers");
      }
      if (node.op == FilterExpr::Op::Div) {
        if (r.as_double() == 0) raise(ErrorKind::FilterType, "division by zero in filter");
        return Value(l.as_double() / r.as_double());
      }
      if (l.is_int() && r.is_int()) {
        std::int64_t a = l.as_int(), b = r.as_int();
        switch (node.op) {
          case FilterExpr::Op::Add: return Value(a + b);
          case FilterExpr::Op::Sub: return Value(a - b);
          default: return Value(a * b);
        }
      }
      double a = l.as_double(), b = r.as_double();
      switch (node.op) {
        case FilterExpr::Op::Add: return Value(a + b);
        case FilterExpr::Op::Sub: return Value(a - b);
        default: return Value(a * b);
      }
    }
    case FilterExpr::Op::ListExpr: {
      Value::List list;
      for (const auto& arg : node.args) list.push_back(eval(*arg, entry));
      return Value(std::move(list));
    }
  }
  raise(ErrorKind::FilterType, "unreachable filter node");
}

}  // namespace

std::unique_ptr<FilterExpr> parse_filter(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return make_node(FilterExpr::Op::True);
  }
  Parser parser(text);
  NodePtr expr = parser.parse();
  if (check(*expr) != Type::Bool) {
    raise(ErrorKind::FilterType, "filter must evaluate to a boolean");
  }
  return expr;
}

bool evaluate_filter(const FilterExpr& expr, const FilterContext& entry) {
  return eval_bool(expr, entry);
}

}  // namespace nsrag
