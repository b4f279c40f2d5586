#include "nsrag/action_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

using json = nlohmann::ordered_json;

enum class ParamType { Str, Int, NumList, Any };

struct ParamDef {
  const char* name;
  ParamType type;
  bool required;
  const char* default_text;  // rendered in syntax blocks
  const char* description;
};

struct ActionDef {
  ActionType type;
  const char* name;
  const char* description;
  const char* observation;
  std::vector<ParamDef> params;
};

const std::vector<ActionDef>& action_defs() {
  static const std::vector<ActionDef> defs = {
      {ActionType::RetrieveFromVectorstore, "RetrieveFromVectorstore",
       "Given a query text, retrieve relevant context from the Milvus vectorstore. Please refer "
       "to the schema of different collections and fields for each stored data entry.",
       "The observation space is the retrieved top-ranked entries from the Milvus vectorstore "
       "based on input parameters.",
       {
           {"query", ParamType::Str, true, nullptr,
            "This query will be encoded and used to search for relevant context. You can "
            "rephrase the user question to obtain a more clear and structured requirement."},
           {"collection_name", ParamType::Str, true, nullptr,
            "The name of the collection in the Milvus vectorstore to search for relevant "
            "context. Please ensure the collection does exist in the vectorstore."},
           {"table_name", ParamType::Str, true, nullptr,
            "The table name is used to narrow down the search space. And it will be added to "
            "the filter condition. Please ensure this table has encodable columns."},
           {"column_name", ParamType::Str, true, nullptr,
            "The column name is used to narrow down the search space. And it will be added to "
            "the filter condition. Please ensure it is encodable in `table_name`."},
           {"filter", ParamType::Str, false, "''",
            "The filter condition to narrow down the search space. Please refer to the syntax "
            "of filter rules. By default, it is empty. It is suggested to restrict "
            "`primary_key`, `pdf_id`, or `page_number` to refine search results."},
           {"limit", ParamType::Int, false, "5",
            "The number of top-ranked context to retrieve. Please ensure that it is a positive "
            "integer. And extremely large limit values may be truncated."},
       }},
      {ActionType::RetrieveFromDatabase, "RetrieveFromDatabase",
       "Execute a SQL query against the DuckDB database which stores the parsed PDF content, "
       "and fetch the resulting table.",
       "The observation space is the execution result of the SQL query serialized as a table, "
       "or the error message if the execution fails.",
       {
           {"sql", ParamType::Str, true, nullptr,
            "The concrete DuckDB SQL query to execute and retrieve results."},
       }},
      {ActionType::CalculateExpr, "CalculateExpr",
       "Calculate the result of a pure arithmetic expression to avoid hallucinated math.",
       "The observation space is the numeric result of the expression, or the error message if "
       "the expression is invalid.",
       {
           {"expr", ParamType::Str, true, nullptr,
            "The expression to calculate, e.g., '13 * 42'."},
       }},
      {ActionType::ViewImage, "ViewImage",
       "You can retrieve the visual information of the paper by taking this action. Please "
       "provide the paper id, the page number, and the optional bounding box.",
       "The observation space is the image that you want to view. We will show you the image "
       "according to your parameters. The error message will be shown if there is any problem "
       "with the image retrieval.",
       {
           {"paper_id", ParamType::Str, true, nullptr, "The paper id to retrieve the image."},
           {"page_number", ParamType::Int, true, nullptr,
            "The page number (starting from 1) of the paper to retrieve the image."},
           {"bounding_box", ParamType::NumList, false, "[]",
            "The bounding box of the image to retrieve. The format is [x_min, y_min, delta_x, "
            "delta_y]. The complete PDF page will be retrieved if not provided."},
       }},
      {ActionType::GenerateAnswer, "GenerateAnswer",
       "This is the terminal action. Take it to return the final answer when the retrieved "
       "context suffices to resolve the user question.",
       "There is no observation for this terminal action; the interaction ends once it is "
       "taken.",
       {
           {"answer", ParamType::Any, true, nullptr,
            "The final answer to the user question. Please adhere to the answer format for the "
            "current question."},
       }},
  };
  return defs;
}

const ActionDef* find_def(const std::string& name) {
  for (const auto& def : action_defs()) {
    if (name == def.name) return &def;
  }
  return nullptr;
}

const ActionDef& def_for(ActionType type) {
  for (const auto& def : action_defs()) {
    if (def.type == type) return def;
  }
  throw std::logic_error("unreachable");
}

std::string allowed_names() {
  std::string out;
  for (const auto& def : action_defs()) {
    if (!out.empty()) out += ", ";
    out += def.name;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction from a parameter map
// ---------------------------------------------------------------------------

using ParamMap = std::map<std::string, Value>;

std::int64_t as_int_param(const ActionDef& def, const ParamDef& param, const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_float() && v.as_float() == std::floor(v.as_float())) {
    return static_cast<std::int64_t>(v.as_float());
  }
  raise(ErrorKind::MalformedAction, std::string("parameter '") + param.name + "' of " + def.name +
                                        " must be an integer, got " + v.to_literal_text());
}

Action build_action(const std::string& name, const ParamMap& params) {
  const ActionDef* def = find_def(name);
  if (!def) {
    raise(ErrorKind::UnknownActionType,
          "'" + name + "' is not a known action type; expected one of [" + allowed_names() + "]");
  }
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& p : def->params) known |= key == p.name;
    if (!known) {
      raise(ErrorKind::MalformedAction,
            "unknown parameter '" + key + "' for action " + def->name);
    }
  }
  std::string missing;
  for (const auto& p : def->params) {
    if (p.required && !params.count(p.name)) {
      if (!missing.empty()) missing += ", ";
      missing += p.name;
    }
  }
  if (!missing.empty()) {
    raise(ErrorKind::MissingRequiredParameter,
          std::string(def->name) + " requires the parameter(s): " + missing);
  }

  auto get_str = [&](const char* key, const char* fallback) -> std::string {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (!it->second.is_string()) {
      raise(ErrorKind::MalformedAction, std::string("parameter '") + key + "' of " + def->name +
                                            " must be a string, got " +
                                            it->second.to_literal_text());
    }
    return it->second.as_string();
  };

  switch (def->type) {
    case ActionType::RetrieveFromVectorstore: {
      RetrieveFromVectorstore a;
      a.query = get_str("query", "");
      a.collection_name = get_str("collection_name", "");
      a.table_name = get_str("table_name", "");
      a.column_name = get_str("column_name", "");
      a.filter = get_str("filter", "");
      a.limit = 5;
      if (auto it = params.find("limit"); it != params.end()) {
        a.limit = as_int_param(*def, def->params.back(), it->second);
      }
      return Action{a};
    }
    case ActionType::RetrieveFromDatabase: return Action{RetrieveFromDatabase{get_str("sql", "")}};
    case ActionType::CalculateExpr: return Action{CalculateExpr{get_str("expr", "")}};
    case ActionType::ViewImage: {
      ViewImage a;
      a.paper_id = get_str("paper_id", "");
      a.page_number = as_int_param(*def, def->params[1], params.at("page_number"));
      if (auto it = params.find("bounding_box"); it != params.end()) {
        if (!it->second.is_list()) {
          raise(ErrorKind::MalformedAction,
                "parameter 'bounding_box' of ViewImage must be a list of numbers");
        }
        for (const auto& e : it->second.as_list()) {
          if (!e.is_number()) {
            raise(ErrorKind::MalformedAction,
                  "parameter 'bounding_box' of ViewImage must contain numbers only");
          }
          a.bounding_box.push_back(e.as_double());
        }
      }
      return Action{a};
    }
    case ActionType::GenerateAnswer: return Action{GenerateAnswer{params.at("answer")}};
  }
  throw std::logic_error("unreachable");
}

/// Parameter map of an action, defaults materialized, in schema order.
std::vector<std::pair<std::string, Value>> action_params(const Action& action) {
  auto number = [](double d) {
    if (d == std::floor(d) && std::abs(d) < 9e15) {
      return Value(static_cast<std::int64_t>(d));
    }
    return Value(d);
  };
  switch (action.type()) {
    case ActionType::RetrieveFromVectorstore: {
      const auto& a = action.as<RetrieveFromVectorstore>();
      return {{"query", Value(a.query)},
              {"collection_name", Value(a.collection_name)},
              {"table_name", Value(a.table_name)},
              {"column_name", Value(a.column_name)},
              {"filter", Value(a.filter)},
              {"limit", Value(a.limit)}};
    }
    case ActionType::RetrieveFromDatabase:
      return {{"sql", Value(action.as<RetrieveFromDatabase>().sql)}};
    case ActionType::CalculateExpr: return {{"expr", Value(action.as<CalculateExpr>().expr)}};
    case ActionType::ViewImage: {
      const auto& a = action.as<ViewImage>();
      Value::List box;
      for (double d : a.bounding_box) box.push_back(number(d));
      return {{"paper_id", Value(a.paper_id)},
              {"page_number", Value(a.page_number)},
              {"bounding_box", Value(std::move(box))}};
    }
    case ActionType::GenerateAnswer: return {{"answer", action.as<GenerateAnswer>().answer}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Shared text utilities
// ---------------------------------------------------------------------------

std::string strip_code_fences(const std::string& text) {
  size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return text;
  if (text.compare(begin, 3, "```") != 0) return text;
  size_t line_end = text.find('\n', begin);
  if (line_end == std::string::npos) return text;
  size_t close = text.rfind("```");
  if (close <= line_end) return text;
  return text.substr(line_end + 1, close - line_end - 1);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Collapse whitespace runs that contain a newline into one space (how
// line-wrapped XML/YAML string content is normalized).
std::string collapse_wrapped_lines(const std::string& s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      size_t j = i;
      bool newline = false;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) {
        newline |= s[j] == '\n';
        j++;
      }
      if (newline) {
        out += ' ';
        i = j;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Markdown call syntax
// ---------------------------------------------------------------------------

Action parse_markdown(const std::string& input) {
  const std::string text = strip_code_fences(input);
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  };
  auto read_ident = [&]() -> std::string {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      pos++;
    }
    return text.substr(start, pos - start);
  };

  skip_ws();
  std::string name = read_ident();
  if (name.empty()) {
    raise(ErrorKind::MalformedAction,
          "expected an action call like ActionName(key=value, ...) in markdown format");
  }
  skip_ws();
  if (pos >= text.size() || text[pos] != '(') {
    raise(ErrorKind::MalformedAction,
          "expected '(' after the action name '" + name + "' in markdown format");
  }
  pos++;
  ParamMap params;
  skip_ws();
  if (pos < text.size() && text[pos] == ')') {
    pos++;
  } else {
    while (true) {
      skip_ws();
      std::string key = read_ident();
      if (key.empty()) {
        raise(ErrorKind::MalformedAction,
              "expected a parameter name inside " + name + "(...) in markdown format");
      }
      skip_ws();
      if (pos >= text.size() || text[pos] != '=') {
        raise(ErrorKind::MalformedAction,
              "expected '=' after parameter '" + key + "' in markdown format");
      }
      pos++;
      skip_ws();
      auto value = parse_literal_prefix(text, pos);
      if (!value) {
        raise(ErrorKind::MalformedAction,
              "expected a literal value (quoted string, number, boolean, list, dict, or null) "
              "for parameter '" + key + "' in markdown format");
      }
      if (!params.emplace(key, std::move(*value)).second) {
        raise(ErrorKind::MalformedAction, "duplicate parameter '" + key + "'");
      }
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        pos++;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        pos++;
        break;
      }
      raise(ErrorKind::MalformedAction,
            "expected ',' or ')' after the value of parameter '" + key + "' in markdown format");
    }
  }
  skip_ws();
  if (pos != text.size()) {
    raise(ErrorKind::MalformedAction,
          "unexpected text after the closing ')' of the markdown action call");
  }
  return build_action(name, params);
}

std::string serialize_markdown(const Action& action) {
  std::string out = action.name();
  out += '(';
  bool first = true;
  for (const auto& [key, value] : action_params(action)) {
    if (!first) out += ", ";
    first = false;
    out += key;
    out += '=';
    out += value.to_literal_text();
  }
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

Action parse_json_action(const std::string& input) {
  json j;
  try {
    j = json::parse(strip_code_fences(input));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::MalformedAction,
          std::string("the action block is not valid JSON (") + e.what() +
              "); expected {\"action_type\": \"...\", \"parameters\": {...}}");
  }
  if (!j.is_object() || !j.contains("action_type") || !j["action_type"].is_string()) {
    raise(ErrorKind::MalformedAction,
          "JSON action must be an object with a string \"action_type\" field");
  }
  ParamMap params;
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) {
      raise(ErrorKind::MalformedAction, "\"parameters\" must be a JSON object");
    }
    for (auto it = j["parameters"].begin(); it != j["parameters"].end(); ++it) {
      params[it.key()] = Value::from_json(it.value());
    }
  }
  return build_action(j["action_type"].get<std::string>(), params);
}

std::string serialize_json_action(const Action& action) {
  json j;
  j["action_type"] = action.name();
  json params = json::object();
  for (const auto& [key, value] : action_params(action)) params[key] = value.to_json();
  j["parameters"] = params;
  return j.dump();
}

// ---------------------------------------------------------------------------
// XML (closed element-tree subset used by the action layout)
// ---------------------------------------------------------------------------

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attr(const std::string& key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  const XmlNode* child(const std::string& tag) const {
    for (const auto& c : children) {
      if (c.name == tag) return &c;
    }
    return nullptr;
  }
};

class XmlParser {
 public:
  explicit XmlParser(const std::string& text) : text_(text) {}

  XmlNode parse() {
    skip_ws();
    XmlNode root = parse_element();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected content after the closing </" + root.name + "> tag");
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    raise(ErrorKind::MalformedAction, "invalid XML action: " + why);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
  }
  std::string read_name() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-' || text_[pos_] == ':')) {
      pos_++;
    }
    if (start == pos_) fail("expected a tag or attribute name");
    return text_.substr(start, pos_ - start);
  }

  std::string decode_entities(const std::string& raw) {
    std::string out;
    size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string::npos) fail("unterminated entity reference");
      std::string entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "lt") out += '<';
      else if (entity == "gt") out += '>';
      else if (entity == "amp") out += '&';
      else if (entity == "quot") out += '"';
      else if (entity == "apos") out += '\'';
      else if (!entity.empty() && entity[0] == '#') {
        out += static_cast<char>(std::stoi(entity.substr(1)));
      } else {
        fail("unknown entity &" + entity + ";");
      }
      i = semi + 1;
    }
    return out;
  }

  XmlNode parse_element() {
    if (pos_ >= text_.size() || text_[pos_] != '<') fail("expected '<'");
    pos_++;
    XmlNode node;
    node.name = read_name();
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated <" + node.name + "> tag");
      if (text_[pos_] == '/') {
        if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '>') fail("expected '/>'");
        pos_ += 2;
        return node;
      }
      if (text_[pos_] == '>') {
        pos_++;
        break;
      }
      std::string key = read_name();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '=' in attribute " + key);
      pos_++;
      skip_ws();
      if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
        fail("expected a quoted attribute value for " + key);
      }
      char quote = text_[pos_++];
      size_t end = text_.find(quote, pos_);
      if (end == std::string::npos) fail("unterminated attribute value for " + key);
      node.attrs.emplace_back(key, decode_entities(text_.substr(pos_, end - pos_)));
      pos_ = end + 1;
    }
    // Content: interleaved text and child elements until </name>.
    std::string raw_text;
    while (true) {
      if (pos_ >= text_.size()) fail("missing closing tag </" + node.name + ">");
      if (text_[pos_] == '<') {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
          pos_ += 2;
          std::string closing = read_name();
          if (closing != node.name) {
            fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
          }
          skip_ws();
          if (pos_ >= text_.size() || text_[pos_] != '>') fail("expected '>'");
          pos_++;
          node.text = decode_entities(raw_text);
          return node;
        }
        node.children.push_back(parse_element());
      } else {
        raw_text += text_[pos_++];
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

void xml_escape(const std::string& in, std::string& out) {
  for (char c : in) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

const char* value_type_tag(const Value& v) {
  if (v.is_null()) return "null";
  if (v.is_bool()) return "bool";
  if (v.is_int()) return "int";
  if (v.is_float()) return "float";
  if (v.is_string()) return "str";
  if (v.is_list()) return "list";
  return "dict";
}

void write_xml_value(const std::string& tag, const Value& v, bool typed, std::string& out,
                     const std::string& key_attr = "") {
  out += '<' + tag;
  if (!key_attr.empty()) {
    out += " key=\"";
    xml_escape(key_attr, out);
    out += '"';
  }
  if (typed) out += std::string(" type=\"") + value_type_tag(v) + "\"";
  out += '>';
  if (v.is_list()) {
    for (const auto& e : v.as_list()) write_xml_value("item", e, typed, out);
  } else if (v.is_map()) {
    for (const auto& [k, e] : v.as_map()) write_xml_value("item", e, typed, out, k);
  } else if (!v.is_null()) {
    xml_escape(v.is_string() ? v.as_string() : v.to_text(), out);
  }
  out += "</" + tag + '>';
}

Value sniff_scalar(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) return Value(std::string());
  if (auto v = parse_python_literal(t); v && !v->is_list() && !v->is_map()) {
    if (v->is_string()) return Value(collapse_wrapped_lines(t));
    return *v;
  }
  return Value(collapse_wrapped_lines(t));
}

Value xml_to_value(const XmlNode& node) {
  const std::string* type = node.attr("type");
  if (type) {
    if (*type == "null") return Value::null();
    if (*type == "bool") return Value(trim(node.text) == "true");
    if (*type == "int") {
      try {
        return Value(static_cast<std::int64_t>(std::stoll(trim(node.text))));
      } catch (...) {
        raise(ErrorKind::MalformedAction, "<" + node.name + " type=\"int\"> holds no integer");
      }
    }
    if (*type == "float") {
      try {
        return Value(std::stod(trim(node.text)));
      } catch (...) {
        raise(ErrorKind::MalformedAction, "<" + node.name + " type=\"float\"> holds no number");
      }
    }
    if (*type == "str") return Value(node.text);
    if (*type == "list") {
      Value::List list;
      for (const auto& c : node.children) list.push_back(xml_to_value(c));
      return Value(std::move(list));
    }
    if (*type == "dict") {
      Value::Map map;
      for (const auto& c : node.children) {
        const std::string* key = c.attr("key");
        if (!key) raise(ErrorKind::MalformedAction, "dict items need a key attribute");
        map[*key] = xml_to_value(c);
      }
      return Value(std::move(map));
    }
    raise(ErrorKind::MalformedAction, "unknown type attribute '" + *type + "'");
  }
  if (!node.children.empty()) {
    if (node.children.front().attr("key")) {
      Value::Map map;
      for (const auto& c : node.children) {
        const std::string* key = c.attr("key");
        if (!key) raise(ErrorKind::MalformedAction, "dict items need a key attribute");
        map[*key] = xml_to_value(c);
      }
      return Value(std::move(map));
    }
    Value::List list;
    for (const auto& c : node.children) list.push_back(xml_to_value(c));
    return Value(std::move(list));
  }
  return sniff_scalar(node.text);
}

Action parse_xml_action(const std::string& input) {
  XmlParser parser(strip_code_fences(input));
  XmlNode root = parser.parse();
  if (root.name != "action") {
    raise(ErrorKind::MalformedAction,
          "XML action must be wrapped in <action>...</action>, got <" + root.name + ">");
  }
  const XmlNode* type_node = root.child("action_type");
  if (!type_node) {
    raise(ErrorKind::MalformedAction, "XML action is missing the <action_type> element");
  }
  std::string name = trim(type_node->text);
  const ActionDef* def = find_def(name);

  ParamMap params;
  const XmlNode* params_node = root.child("parameters");
  if (params_node) {
    for (const auto& child : params_node->children) {
      const ParamDef* pd = nullptr;
      if (def) {
        for (const auto& p : def->params) {
          if (child.name == p.name) pd = &p;
        }
      }
      if (!pd || pd->type == ParamType::Any) {
        params[child.name] = xml_to_value(child);
        continue;
      }
      switch (pd->type) {
        case ParamType::Str:
          params[child.name] = Value(collapse_wrapped_lines(trim(child.text)));
          break;
        case ParamType::Int: {
          try {
            params[child.name] = Value(static_cast<std::int64_t>(std::stoll(trim(child.text))));
          } catch (...) {
            raise(ErrorKind::MalformedAction,
                  "<" + child.name + "> must hold an integer, got '" + trim(child.text) + "'");
          }
          break;
        }
        case ParamType::NumList: {
          Value::List list;
          for (const auto& item : child.children) {
            Value v = sniff_scalar(item.text);
            if (!v.is_number()) {
              raise(ErrorKind::MalformedAction,
                    "<" + child.name + "> items must be numbers, got '" + item.text + "'");
            }
            list.push_back(v);
          }
          if (child.children.empty() && !trim(child.text).empty()) {
            raise(ErrorKind::MalformedAction,
                  "<" + child.name + "> must hold <item> children, one per number");
          }
          params[child.name] = Value(std::move(list));
          break;
        }
        default: break;
      }
    }
  }
  return build_action(name, params);
}

std::string serialize_xml_action(const Action& action) {
  std::string out = "<action><action_type>";
  out += action.name();
  out += "</action_type><parameters>";
  for (const auto& [key, value] : action_params(action)) {
    bool typed = action.type() == ActionType::GenerateAnswer && key == "answer";
    if (!typed && value.is_list()) {
      out += '<' + key + '>';
      for (const auto& e : value.as_list()) write_xml_value("item", e, false, out);
      out += "</" + key + '>';
    } else {
      write_xml_value(key, value, typed, out);
    }
  }
  out += "</parameters></action>";
  return out;
}

// ---------------------------------------------------------------------------
// YAML
// ---------------------------------------------------------------------------

Value yaml_to_value(const YAML::Node& node) {
  if (!node.IsDefined() || node.IsNull()) return Value::null();
  if (node.IsScalar()) {
    const std::string& s = node.Scalar();
    // Quoted scalars keep their string type; plain scalars are sniffed.
    if (node.Tag() == "!") return Value(s);
    if (auto v = parse_python_literal(s); v && !v->is_list() && !v->is_map()) return *v;
    return Value(s);
  }
  if (node.IsSequence()) {
    Value::List list;
    for (const auto& item : node) list.push_back(yaml_to_value(item));
    return Value(std::move(list));
  }
  Value::Map map;
  for (const auto& kv : node) map[kv.first.as<std::string>()] = yaml_to_value(kv.second);
  return Value(std::move(map));
}

Action parse_yaml_action(const std::string& input) {
  YAML::Node root;
  try {
    root = YAML::Load(strip_code_fences(input));
  } catch (const YAML::Exception& e) {
    raise(ErrorKind::MalformedAction,
          std::string("the action block is not valid YAML (") + e.what() +
              "); expected 'action_type: ...' with a 'parameters:' map");
  }
  if (!root.IsMap() || !root["action_type"]) {
    raise(ErrorKind::MalformedAction,
          "YAML action must be a map with an 'action_type' key and a 'parameters' map");
  }
  std::string name;
  try {
    name = root["action_type"].as<std::string>();
  } catch (const YAML::Exception&) {
    raise(ErrorKind::MalformedAction, "'action_type' must be a scalar action name");
  }
  const ActionDef* def = find_def(name);

  ParamMap params;
  if (root["parameters"]) {
    if (!root["parameters"].IsMap()) {
      raise(ErrorKind::MalformedAction, "'parameters' must be a YAML map");
    }
    for (const auto& kv : root["parameters"]) {
      std::string key = kv.first.as<std::string>();
      const ParamDef* pd = nullptr;
      if (def) {
        for (const auto& p : def->params) {
          if (key == p.name) pd = &p;
        }
      }
      if (pd && pd->type == ParamType::Str) {
        if (!kv.second.IsScalar() && !kv.second.IsNull()) {
          raise(ErrorKind::MalformedAction, "parameter '" + key + "' must be a string scalar");
        }
        params[key] = Value(kv.second.IsNull() ? std::string() : kv.second.Scalar());
      } else {
        params[key] = yaml_to_value(kv.second);
      }
    }
  }
  return build_action(name, params);
}

void emit_yaml_value(YAML::Emitter& out, const Value& v) {
  if (v.is_null()) {
    out << YAML::Null;
  } else if (v.is_bool()) {
    out << v.as_bool();
  } else if (v.is_int()) {
    out << v.as_int();
  } else if (v.is_float()) {
    out << format_double(v.as_float());  // keep float rendering canonical
  } else if (v.is_string()) {
    out << YAML::DoubleQuoted << v.as_string();
  } else if (v.is_list()) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& e : v.as_list()) emit_yaml_value(out, e);
    out << YAML::EndSeq;
  } else {
    out << YAML::BeginMap;
    for (const auto& [k, e] : v.as_map()) {
      out << YAML::Key << YAML::DoubleQuoted << k << YAML::Value;
      emit_yaml_value(out, e);
    }
    out << YAML::EndMap;
  }
}

std::string serialize_yaml_action(const Action& action) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "action_type" << YAML::Value << action.name();
  out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
  for (const auto& [key, value] : action_params(action)) {
    out << YAML::Key << key << YAML::Value;
    emit_yaml_value(out, value);
  }
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace

const char* to_string(ActionFormat fmt) {
  switch (fmt) {
    case ActionFormat::Markdown: return "markdown";
    case ActionFormat::Json: return "json";
    case ActionFormat::Xml: return "xml";
    case ActionFormat::Yaml: return "yaml";
  }
  return "markdown";
}

std::optional<ActionFormat> action_format_from_string(const std::string& name) {
  if (name == "markdown") return ActionFormat::Markdown;
  if (name == "json") return ActionFormat::Json;
  if (name == "xml") return ActionFormat::Xml;
  if (name == "yaml") return ActionFormat::Yaml;
  return std::nullopt;
}

Action parse_action(const std::string& text, ActionFormat fmt) {
  switch (fmt) {
    case ActionFormat::Markdown: return parse_markdown(text);
    case ActionFormat::Json: return parse_json_action(text);
    case ActionFormat::Xml: return parse_xml_action(text);
    case ActionFormat::Yaml: return parse_yaml_action(text);
  }
  throw std::logic_error("unreachable");
}

std::string serialize_action(const Action& action, ActionFormat fmt) {
  switch (fmt) {
    case ActionFormat::Markdown: return serialize_markdown(action);
    case ActionFormat::Json: return serialize_json_action(action);
    case ActionFormat::Xml: return serialize_xml_action(action);
    case ActionFormat::Yaml: return serialize_yaml_action(action);
  }
  throw std::logic_error("unreachable");
}

Action validate_action(const Action& action, const SchemaCatalog& catalog,
                       const VectorStore* store) {
  Action out = action;
  if (out.is<RetrieveFromVectorstore>()) {
    auto& a = std::get<RetrieveFromVectorstore>(out.v);
    if (a.limit < 1) {
      raise(ErrorKind::InvalidLimit,
            "limit must be a positive integer, got " + std::to_string(a.limit));
    }
    a.limit = std::min<std::int64_t>(a.limit, kSearchLimitCap);
    if (store && !store->find_collection(a.collection_name)) {
      raise(ErrorKind::UnknownCollection,
            "collection '" + a.collection_name + "' does not exist in the vectorstore");
    }
    if (!catalog.is_encodable(a.table_name, a.column_name)) {
      raise(ErrorKind::NotEncodablePair,
            "(" + a.table_name + ", " + a.column_name + ") is not an encodable pair");
    }
  } else if (out.is<ViewImage>()) {
    const auto& a = out.as<ViewImage>();
    if (!a.bounding_box.empty() && a.bounding_box.size() != 4) {
      raise(ErrorKind::MalformedAction,
            "bounding_box must be empty or exactly 4 numbers, got " +
                std::to_string(a.bounding_box.size()));
    }
    if (a.page_number < 1) {
      raise(ErrorKind::MalformedAction,
            "page_number must be >= 1, got " + std::to_string(a.page_number));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Action and observation space prompt
// ---------------------------------------------------------------------------

namespace {

std::string type_label(ParamType type) {
  switch (type) {
    case ParamType::Str: return "str";
    case ParamType::Int: return "int";
    case ParamType::NumList: return "List[float]";
    case ParamType::Any: return "Any";
  }
  return "str";
}

std::string markdown_syntax(const ActionDef& def) {
  std::string out = def.name;
  out += '(';
  for (size_t i = 0; i < def.params.size(); i++) {
    const auto& p = def.params[i];
    if (i) out += ", ";
    out += std::string(p.name) + ": " + type_label(p.type);
    if (!p.required) out += std::string(" = ") + p.default_text;
  }
  out += ")\n";
  for (const auto& p : def.params) {
    out += "    - " + std::string(p.name) + ": " + type_label(p.type) + ", " +
           (p.required ? "required. " : "optional, default to " + std::string(p.default_text) +
                                            ". ") +
           p.description + "\n";
  }
  return out;
}

std::string json_syntax(const ActionDef& def) {
  json spec;
  spec["action_type"] = def.name;
  json params = json::object();
  for (const auto& p : def.params) {
    json pj;
    pj["type"] = type_label(p.type);
    pj["required"] = p.required;
    if (!p.required) {
      pj["default"] = p.default_text == std::string("''") ? json("") : json::parse(p.default_text);
    }
    pj["description"] = p.description;
    params[p.name] = pj;
  }
  spec["parameters"] = params;
  return spec.dump(4) + "\n";
}

std::string xml_syntax(const ActionDef& def) {
  std::string out = "<action>\n    <action_type>" + std::string(def.name) +
                    "</action_type>\n    <parameters>\n";
  for (const auto& p : def.params) {
    out += "        <" + std::string(p.name) + ">\n";
    out += "            <type>" + type_label(p.type) + "</type>\n";
    out += std::string("            <required>") + (p.required ? "true" : "false") +
           "</required>\n";
    if (!p.required) {
      std::string def_text = p.default_text == std::string("''") ? "" : p.default_text;
      out += "            <default>" + def_text + "</default>\n";
    }
    std::string desc;
    xml_escape(p.description, desc);
    out += "            <description>" + desc + "</description>\n";
    out += "        </" + std::string(p.name) + ">\n";
  }
  out += "    </parameters>\n</action>\n";
  return out;
}

std::string yaml_syntax(const ActionDef& def) {
  std::string out = "action_type: " + std::string(def.name) + "\nparameters:\n";
  for (const auto& p : def.params) {
    out += "    " + std::string(p.name) + ":\n";
    out += "        type: " + type_label(p.type) + "\n";
    out += std::string("        required: ") + (p.required ? "true" : "false") + "\n";
    if (!p.required) {
      out += "        default: " + std::string(p.default_text) + "\n";
    }
    out += "        description: " + std::string(p.description) + "\n";
  }
  return out;
}

struct UseCase {
  std::string prose;
  Action action;
};

// The two vectorstore retrieval use cases keep their canonical multi-line
// markdown renderings; everything else serializes canonically.
const char* kVsCase1Markdown =
    "RetrieveFromVectorstore(query=\"Does this paper discuss LLM-based agent on its first "
    "page?\",\n    collection_name='text_bm25_en', table_name='chunks', "
    "column_name='text_content',\n    filter=\"pdf_id == '12345678' and page_number == 1\", "
    "limit=10)";

const char* kVsCase2Markdown =
    "RetrieveFromVectorstore(query=\"Is there any work about the topic structured RAG?\", "
    "collection_name=\n    'text_sentence_transformers_all_minilm_l6_v2', "
    "table_name='metadata', column_name='abstract')";

std::vector<UseCase> use_cases_for(ActionType type) {
  switch (type) {
    case ActionType::RetrieveFromVectorstore:
      return {
          {"Search the Milvus collection `text_bm25_en`, which uses BM25 sparse embeddings, "
           "with the filter condition \"table_name == 'chunks' and column_name == "
           "'text_content' and pdf_id == '12345678' and page_number == 1\" to restrict the "
           "content source and return the top 10 relevant entries.",
           Action{RetrieveFromVectorstore{
               "Does this paper discuss LLM-based agent on its first page?", "text_bm25_en",
               "chunks", "text_content", "pdf_id == '12345678' and page_number == 1", 10}}},
          {"Perform a vector-based similarity search on all cell values from the `abstract` "
           "column in the `metadata` table in the database, using the MiniLM-L6-v2 sentence "
           "transformer embeddings. By default, the top 5 most relevant entries will be "
           "returned.",
           Action{RetrieveFromVectorstore{"Is there any work about the topic structured RAG?",
                                          "text_sentence_transformers_all_minilm_l6_v2",
                                          "metadata", "abstract", "", 5}}},
      };
    case ActionType::RetrieveFromDatabase:
      return {{"Retrieve the title and publication year of at most 3 papers published at ACL.",
               Action{RetrieveFromDatabase{
                   "select title, pub_year from metadata where conference_abbreviation = 'ACL' "
                   "limit 3;"}}}};
    case ActionType::CalculateExpr:
      return {{"Calculate the product of 13 and 42 instead of doing the math in your head.",
               Action{CalculateExpr{"13 * 42"}}}};
    case ActionType::ViewImage:
      return {{"View the complete first page of the paper whose id is '12345678'.",
               Action{ViewImage{"12345678", 1, {}}}}};
    case ActionType::GenerateAnswer:
      return {{"Return the final answer once the retrieved context suffices; here the expected "
               "answer format is a single string.",
               Action{GenerateAnswer{Value("Yes")}}}};
  }
  return {};
}

}  // namespace

std::string action_space_prompt(const std::set<ActionType>& allowed, ActionFormat fmt) {
  // Paper ordering of the action inventory.
  const ActionType order[] = {ActionType::RetrieveFromVectorstore,
                              ActionType::RetrieveFromDatabase, ActionType::CalculateExpr,
                              ActionType::ViewImage, ActionType::GenerateAnswer};
  std::string fmt_upper = to_string(fmt);
  std::transform(fmt_upper.begin(), fmt_upper.end(), fmt_upper.begin(), ::toupper);

  std::string out = "## Action and Observation Space\n\nAll allowable action types include [";
  bool first = true;
  for (ActionType t : order) {
    if (!allowed.count(t)) continue;
    if (!first) out += ", ";
    first = false;
    out += std::string("\"") + to_string(t) + "\"";
  }
  out += "]. Here is the detailed specification in " + fmt_upper + " format for them:\n";

  for (ActionType t : order) {
    if (!allowed.count(t)) continue;
    const ActionDef& def = def_for(t);
    out += "\n### Action Type\n\n" + std::string(def.name) + "\n";
    out += "\n### Description\n\n" + std::string(def.description) + "\n";
    out += "\n### Observation\n\n" + std::string(def.observation) + "\n";
    out += "\n### Syntax and Parameters (" + fmt_upper + " Format)\n\n";
    switch (fmt) {
      case ActionFormat::Markdown: out += markdown_syntax(def); break;
      case ActionFormat::Json: out += json_syntax(def); break;
      case ActionFormat::Xml: out += xml_syntax(def); break;
      case ActionFormat::Yaml: out += yaml_syntax(def); break;
    }
    out += "\n### Use Cases (" + fmt_upper + " Format)\n";
    auto cases = use_cases_for(t);
    for (size_t i = 0; i < cases.size(); i++) {
      out += "\n#### Case " + std::to_string(i + 1) + "\n\n" + cases[i].prose + "\n\n[Action]:\n";
      if (fmt == ActionFormat::Markdown && t == ActionType::RetrieveFromVectorstore) {
        out += (i == 0 ? kVsCase1Markdown : kVsCase2Markdown);
        out += "\n";
      } else {
        out += serialize_action(cases[i].action, fmt) + "\n";
      }
    }
  }
  return out;
}

}  // namespace nsrag
