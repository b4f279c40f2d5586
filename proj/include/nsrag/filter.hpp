#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsrag/value.hpp"

namespace nsrag {

/// The entry fields visible to filter expressions.
struct FilterContext {
  std::string pdf_id;
  std::int64_t page_number = -1;
  std::string table_name;
  std::string column_name;
  std::string primary_key;
  std::string text;
};

/// Expression tree for the vector-search filter language: boolean
/// {and, or, not}, comparisons {==, !=, <, <=, >, >=}, membership
/// {in, not in}, arithmetic {+, -, *, /}, parentheses, and literals
/// (quoted strings, integers, floats, bracketed lists).
class FilterExpr {
 public:
  enum class Op {
    True,      // the empty filter
    Literal,
    Field,
    Not,
    Negate,
    And,
    Or,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    NotIn,
    Add,
    Sub,
    Mul,
    Div,
    ListExpr,
  };

  Op op = Op::True;
  Value literal;                                  // for Literal
  std::string field;                              // for Field
  std::vector<std::unique_ptr<FilterExpr>> args;  // operands / list elements
};

/// Parses a filter with conventional precedence (or < and < not <
/// comparisons/membership < additive < multiplicative < unary). The empty
/// string yields the trivially-true filter. Errors carry the byte offset.
std::unique_ptr<FilterExpr> parse_filter(const std::string& text);

bool evaluate_filter(const FilterExpr& expr, const FilterContext& entry);

}  // namespace nsrag
