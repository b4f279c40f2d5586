#pragma once

#include <string>

#include "nsrag/value.hpp"

namespace nsrag {

/// Closed arithmetic evaluator: numbers, + - * / // % **, parentheses,
/// unary minus, Python-style semantics ('/' is float division, '//' floor,
/// '%' follows the divisor's sign, '**' is right-associative). Names and
/// calls are rejected outright.
Value calculate_expr(const std::string& expr);

/// Integers render without a decimal point; floats with up to 12
/// significant digits.
std::string render_calc_result(const Value& v);

}  // namespace nsrag
