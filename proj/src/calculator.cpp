#include "nsrag/calculator.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

struct Num {
  bool is_int;
  std::int64_t i;
  double f;

  static Num of_int(std::int64_t v) { return {true, v, static_cast<double>(v)}; }
  static Num of_float(double v) { return {false, 0, v}; }
  double as_double() const { return is_int ? static_cast<double>(i) : f; }
};

void check_finite(double d) {
  if (!std::isfinite(d)) {
    raise(ErrorKind::ExpressionOverflow, "the result is not a finite number");
  }
}

Num add(Num a, Num b) {
  if (a.is_int && b.is_int) {
    std::int64_t out;
    if (!__builtin_add_overflow(a.i, b.i, &out)) return Num::of_int(out);
  }
  double d = a.as_double() + b.as_double();
  check_finite(d);
  return Num::of_float(d);
}

Num sub(Num a, Num b) {
  if (a.is_int && b.is_int) {
    std::int64_t out;
    if (!__builtin_sub_overflow(a.i, b.i, &out)) return Num::of_int(out);
  }
  double d = a.as_double() - b.as_double();
  check_finite(d);
  return Num::of_float(d);
}

Num mul(Num a, Num b) {
  if (a.is_int && b.is_int) {
    std::int64_t out;
    if (!__builtin_mul_overflow(a.i, b.i, &out)) return Num::of_int(out);
  }
  double d = a.as_double() * b.as_double();
  check_finite(d);
  return Num::of_float(d);
}

Num true_div(Num a, Num b) {
  if (b.as_double() == 0.0) raise(ErrorKind::DivisionByZero, "division by zero");
  double d = a.as_double() / b.as_double();
  check_finite(d);
  return Num::of_float(d);
}

Num floor_div(Num a, Num b) {
  if (b.as_double() == 0.0) raise(ErrorKind::DivisionByZero, "integer division by zero");
  if (a.is_int && b.is_int) {
    std::int64_t q = a.i / b.i;
    if ((a.i % b.i != 0) && ((a.i < 0) != (b.i < 0))) q--;
    return Num::of_int(q);
  }
  double d = std::floor(a.as_double() / b.as_double());
  check_finite(d);
  return Num::of_float(d);
}

Num modulo(Num a, Num b) {
  if (b.as_double() == 0.0) raise(ErrorKind::DivisionByZero, "modulo by zero");
  if (a.is_int && b.is_int) {
    std::int64_t r = a.i % b.i;
    if (r != 0 && ((r < 0) != (b.i < 0))) r += b.i;
    return Num::of_int(r);
  }
  double r = std::fmod(a.as_double(), b.as_double());
  if (r != 0 && ((r < 0) != (b.as_double() < 0))) r += b.as_double();
  check_finite(r);
  return Num::of_float(r);
}

Num power(Num a, Num b) {
  if (a.is_int && b.is_int && b.i >= 0) {
    // Exact integer power unless it overflows.
    std::int64_t result = 1;
    std::int64_t base = a.i;
    std::int64_t exp = b.i;
    bool overflow = false;
    while (exp > 0 && !overflow) {
      if (exp & 1) overflow |= __builtin_mul_overflow(result, base, &result);
      exp >>= 1;
      if (exp) overflow |= __builtin_mul_overflow(base, base, &base);
    }
    if (!overflow) return Num::of_int(result);
  }
  double d = std::pow(a.as_double(), b.as_double());
  check_finite(d);
  return Num::of_float(d);
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  Num parse() {
    Num result = parse_additive();
    skip_ws();
    if (pos_ != text_.size()) {
      raise(ErrorKind::ExpressionSyntax,
            "unexpected character '" + std::string(1, text_[pos_]) + "' at offset " +
                std::to_string(pos_));
    }
    return result;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
  }
  bool at(const char* sym) const {
    return text_.compare(pos_, std::char_traits<char>::length(sym), sym) == 0;
  }

  Num parse_additive() {
    Num lhs = parse_multiplicative();
    while (true) {
      skip_ws();
      if (at("+")) {
        pos_++;
        lhs = add(lhs, parse_multiplicative());
      } else if (at("-")) {
        pos_++;
        lhs = sub(lhs, parse_multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Num parse_multiplicative() {
    Num lhs = parse_unary();
    while (true) {
      skip_ws();
      if (at("**")) return continue_power(lhs);
      if (at("//")) {
        pos_ += 2;
        lhs = floor_div(lhs, parse_unary());
      } else if (at("*")) {
        pos_++;
        lhs = mul(lhs, parse_unary());
      } else if (at("/")) {
        pos_++;
        lhs = true_div(lhs, parse_unary());
      } else if (at("%")) {
        pos_++;
        lhs = modulo(lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // '**' binds tighter than unary minus on its left and is right
  // associative; -2 ** 2 == -4 and 2 ** -1 == 0.5.
  Num parse_unary() {
    skip_ws();
    if (at("-")) {
      pos_++;
      Num v = parse_unary();
      return v.is_int ? Num::of_int(-v.i) : Num::of_float(-v.f);
    }
    if (at("+")) {
      pos_++;
      return parse_unary();
    }
    Num base = parse_primary();
    skip_ws();
    if (at("**")) return continue_power(base);
    return base;
  }

  Num continue_power(Num base) {
    pos_ += 2;
    Num exponent = parse_unary();
    return power(base, exponent);
  }

  Num parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      raise(ErrorKind::ExpressionSyntax, "unexpected end of expression");
    }
    char c = text_[pos_];
    if (c == '(') {
      pos_++;
      Num inner = parse_additive();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        raise(ErrorKind::ExpressionSyntax, "expected ')' at offset " + std::to_string(pos_));
      }
      pos_++;
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      raise(ErrorKind::DisallowedConstruct,
            "names and function calls are not allowed; only pure arithmetic is supported");
    }
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') {
      raise(ErrorKind::ExpressionSyntax,
            "unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(pos_));
    }
    size_t start = pos_;
    bool is_float = false;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(d))) {
        pos_++;
      } else if (d == '.' && !is_float) {
        is_float = true;
        pos_++;
      } else if ((d == 'e' || d == 'E') && pos_ > start &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_ - 1]))) {
        is_float = true;
        pos_++;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) pos_++;
      } else {
        break;
      }
    }
    std::string num = text_.substr(start, pos_ - start);
    if (num == ".") raise(ErrorKind::ExpressionSyntax, "lone '.' is not a number");
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      raise(ErrorKind::DisallowedConstruct,
            "names and function calls are not allowed; only pure arithmetic is supported");
    }
    if (!is_float) {
      try {
        return Num::of_int(std::stoll(num));
      } catch (...) {
        is_float = true;  // out of int64 range
      }
    }
    try {
      return Num::of_float(std::stod(num));
    } catch (...) {
      raise(ErrorKind::ExpressionSyntax, "cannot parse the number '" + num + "'");
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Value calculate_expr(const std::string& expr) {
  if (expr.find_first_not_of(" \t\r\n") == std::string::npos) {
    raise(ErrorKind::ExpressionSyntax, "empty expression");
  }
  ExprParser parser(expr);
  Num result = parser.parse();
  if (result.is_int) return Value(result.i);
  return Value(result.f);
}

std::string render_calc_result(const Value& v) {
  if (v.is_int()) return std::to_string(v.as_int());
  return format_double(v.as_float());
}

}  // namespace nsrag
