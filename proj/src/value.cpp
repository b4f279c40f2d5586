#include "nsrag/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace nsrag {

double Value::as_double() const {
  if (is_int()) return static_cast<double>(as_int());
  return as_float();
}

std::string format_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", d);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";  // n catches inf/nan
  return s;
}

namespace {

void append_quoted(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

void render(const Value& v, std::string& out, bool quote_strings) {
  if (v.is_null()) {
    out += quote_strings ? "null" : "None";
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else if (v.is_int()) {
    out += std::to_string(v.as_int());
  } else if (v.is_float()) {
    out += format_double(v.as_float());
  } else if (v.is_string()) {
    if (quote_strings) {
      append_quoted(out, v.as_string());
    } else {
      out += v.as_string();
    }
  } else if (v.is_list()) {
    out += '[';
    bool first = true;
    for (const auto& e : v.as_list()) {
      if (!first) out += ", ";
      first = false;
      render(e, out, true);
    }
    out += ']';
  } else {
    out += '{';
    bool first = true;
    for (const auto& [k, val] : v.as_map()) {
      if (!first) out += ", ";
      first = false;
      append_quoted(out, k);
      out += ": ";
      render(val, out, true);
    }
    out += '}';
  }
}

}  // namespace

std::string Value::to_text() const {
  std::string out;
  render(*this, out, false);
  return out;
}

std::string Value::to_literal_text() const {
  std::string out;
  render(*this, out, true);
  return out;
}

nlohmann::ordered_json Value::to_json() const {
  using json = nlohmann::ordered_json;
  if (is_null()) return nullptr;
  if (is_bool()) return as_bool();
  if (is_int()) return as_int();
  if (is_float()) return as_float();
  if (is_string()) return as_string();
  if (is_list()) {
    json arr = json::array();
    for (const auto& e : as_list()) arr.push_back(e.to_json());
    return arr;
  }
  json obj = json::object();
  for (const auto& [k, v] : as_map()) obj[k] = v.to_json();
  return obj;
}

Value Value::from_json(const nlohmann::json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer() || j.is_number_unsigned()) return Value(j.get<std::int64_t>());
  if (j.is_number_float()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_array()) {
    Value::List list;
    for (const auto& e : j) list.push_back(from_json(e));
    return Value(std::move(list));
  }
  Value::Map map;
  for (auto it = j.begin(); it != j.end(); ++it) map[it.key()] = from_json(it.value());
  return Value(std::move(map));
}

namespace {

struct LiteralParser {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  bool match_word(std::string_view word) {
    if (text.substr(pos, word.size()) != word) return false;
    size_t end = pos + word.size();
    if (end < text.size()) {
      char c = text[end];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    pos = end;
    return true;
  }

  std::optional<Value> parse_value() {
    skip_ws();
    if (eof()) return std::nullopt;
    char c = peek();
    if (c == '\'' || c == '"') return parse_string();
    if (c == '[') return parse_list();
    if (c == '{') return parse_map();
    if (match_word("true") || match_word("True")) return Value(true);
    if (match_word("false") || match_word("False")) return Value(false);
    if (match_word("null") || match_word("None") || match_word("none")) return Value::null();
    return parse_number();
  }

  std::optional<Value> parse_string() {
    char quote = text[pos++];
    std::string out;
    while (pos < text.size()) {
      char c = text[pos++];
      if (c == quote) return Value(std::move(out));
      if (c == '\\' && pos < text.size()) {
        char e = text[pos++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case 'u': {
            if (pos + 4 > text.size()) return std::nullopt;
            unsigned code = 0;
            for (int i = 0; i < 4; i++) {
              char h = text[pos++];
              code <<= 4;
              if (h >= '0' && h <= '9') code |= unsigned(h - '0');
              else if (h >= 'a' && h <= 'f') code |= unsigned(h - 'a' + 10);
              else if (h >= 'A' && h <= 'F') code |= unsigned(h - 'A' + 10);
              else return std::nullopt;
            }
            // UTF-8 encode the code point (BMP only).
            if (code < 0x80) {
              out += static_cast<char>(code);
            } else if (code < 0x800) {
              out += static_cast<char>(0xC0 | (code >> 6));
              out += static_cast<char>(0x80 | (code & 0x3F));
            } else {
              out += static_cast<char>(0xE0 | (code >> 12));
              out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
              out += static_cast<char>(0x80 | (code & 0x3F));
            }
            break;
          }
          default: out += e;
        }
      } else {
        out += c;
      }
    }
    return std::nullopt;  // unterminated
  }

  std::optional<Value> parse_number() {
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) pos++;
    bool digits = false, dot = false, exp = false;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = true;
        pos++;
      } else if (c == '.' && !dot && !exp) {
        dot = true;
        pos++;
      } else if ((c == 'e' || c == 'E') && digits && !exp) {
        exp = true;
        pos++;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) pos++;
      } else {
        break;
      }
    }
    if (!digits) return std::nullopt;
    std::string_view num = text.substr(start, pos - start);
    if (!dot && !exp) {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), i);
      if (ec == std::errc() && ptr == num.data() + num.size()) return Value(i);
    }
    try {
      return Value(std::stod(std::string(num)));
    } catch (...) {
      return std::nullopt;
    }
  }

  std::optional<Value> parse_list() {
    pos++;  // '['
    Value::List list;
    skip_ws();
    if (!eof() && peek() == ']') {
      pos++;
      return Value(std::move(list));
    }
    while (true) {
      auto v = parse_value();
      if (!v) return std::nullopt;
      list.push_back(std::move(*v));
      skip_ws();
      if (eof()) return std::nullopt;
      if (peek() == ',') {
        pos++;
        continue;
      }
      if (peek() == ']') {
        pos++;
        return Value(std::move(list));
      }
      return std::nullopt;
    }
  }

  std::optional<Value> parse_map() {
    pos++;  // '{'
    Value::Map map;
    skip_ws();
    if (!eof() && peek() == '}') {
      pos++;
      return Value(std::move(map));
    }
    while (true) {
      skip_ws();
      if (eof() || (peek() != '\'' && peek() != '"')) return std::nullopt;
      auto key = parse_string();
      if (!key) return std::nullopt;
      skip_ws();
      if (eof() || peek() != ':') return std::nullopt;
      pos++;
      auto v = parse_value();
      if (!v) return std::nullopt;
      map[key->as_string()] = std::move(*v);
      skip_ws();
      if (eof()) return std::nullopt;
      if (peek() == ',') {
        pos++;
        continue;
      }
      if (peek() == '}') {
        pos++;
        return Value(std::move(map));
      }
      return std::nullopt;
    }
  }
};

}  // namespace

std::optional<Value> parse_python_literal(std::string_view text) {
  LiteralParser p{text};
  auto v = p.parse_value();
  if (!v) return std::nullopt;
  p.skip_ws();
  if (!p.eof()) return std::nullopt;
  return v;
}

std::optional<Value> parse_literal_prefix(std::string_view text, size_t& pos) {
  LiteralParser p{text, pos};
  auto v = p.parse_value();
  if (!v) return std::nullopt;
  pos = p.pos;
  return v;
}

}  // namespace nsrag
