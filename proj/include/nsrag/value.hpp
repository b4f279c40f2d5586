#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace nsrag {

/// One literal value: the shared currency between SQL cells, action
/// parameters, final answers, and dataset gold values. Closed under
/// null, bool, int, float, string, list, and string-keyed map.
class Value {
 public:
  using List = std::vector<Value>;
  using Map = std::map<std::string, Value>;
  using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, List, Map>;

  Value() = default;
  Value(bool b) : v_(b) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(double d) : v_(d) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(List l) : v_(std::move(l)) {}
  Value(Map m) : v_(std::move(m)) {}

  static Value null() { return Value(); }

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_int() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_list() const { return std::holds_alternative<List>(v_); }
  bool is_map() const { return std::holds_alternative<Map>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  /// Numeric value as double regardless of int/float storage.
  double as_double() const;
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const List& as_list() const { return std::get<List>(v_); }
  List& as_list() { return std::get<List>(v_); }
  const Map& as_map() const { return std::get<Map>(v_); }
  Map& as_map() { return std::get<Map>(v_); }

  bool operator==(const Value& other) const = default;

  /// Plain-cell rendering: bare strings, "None" for null, "true"/"false".
  std::string to_text() const;
  /// Literal rendering: strings double-quoted with escapes; round-trips
  /// through parse_python_literal.
  std::string to_literal_text() const;

  nlohmann::ordered_json to_json() const;
  static Value from_json(const nlohmann::json& j);

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

/// Canonical float rendering: up to 12 significant digits, always with a
/// decimal point or exponent so floats stay distinguishable from ints.
std::string format_double(double d);

/// Parse a full Python/JSON-style literal (strings with single or double
/// quotes, numbers, True/False/true/false, None/null/none, lists, dicts).
/// Returns nullopt unless the whole input (modulo surrounding space) parses.
std::optional<Value> parse_python_literal(std::string_view text);

/// Parse one literal starting at pos, advancing pos past it on success.
std::optional<Value> parse_literal_prefix(std::string_view text, size_t& pos);

}  // namespace nsrag
