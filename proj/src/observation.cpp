#include "nsrag/observation.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsrag/tokenizer.hpp"

namespace nsrag {

namespace {

/// Cell text for the plain-text formats; newlines are escaped so rows stay
/// one line each.
std::string cell_text(const Value& v) {
  std::string raw = v.to_text();
  std::string out;
  for (char c : raw) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<size_t> column_widths(const ResultTable& table,
                                  const std::vector<std::vector<std::string>>& cells) {
  std::vector<size_t> widths;
  for (size_t c = 0; c < table.column_names.size(); c++) {
    size_t w = table.column_names[c].size();
    for (const auto& row : cells) w = std::max(w, row[c].size());
    widths.push_back(w);
  }
  return widths;
}

std::vector<std::vector<std::string>> render_cells(const ResultTable& table) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : table.rows) {
    std::vector<std::string> out;
    out.reserve(row.size());
    for (const auto& v : row) out.push_back(cell_text(v));
    cells.push_back(std::move(out));
  }
  return cells;
}

std::string centered(const std::string& s, size_t width) {
  size_t pad = width - s.size();
  size_t left = pad / 2;
  return std::string(left, ' ') + s + std::string(pad - left, ' ');
}

std::string right_aligned(const std::string& s, size_t width) {
  return std::string(width - s.size(), ' ') + s;
}

std::string format_markdown(const ResultTable& table) {
  auto cells = render_cells(table);
  auto widths = column_widths(table, cells);
  std::string border = "+";
  for (size_t w : widths) border += std::string(w + 2, '-') + "+";

  std::string out = border + "\n|";
  for (size_t c = 0; c < widths.size(); c++) {
    out += " " + centered(table.column_names[c], widths[c]) + " |";
  }
  out += "\n" + border;
  for (const auto& row : cells) {
    out += "\n|";
    for (size_t c = 0; c < widths.size(); c++) {
      out += " " + centered(row[c], widths[c]) + " |";
    }
  }
  out += "\n" + border;
  return out;
}

std::string format_string(const ResultTable& table) {
  auto cells = render_cells(table);
  auto widths = column_widths(table, cells);
  std::string out;
  for (size_t c = 0; c < widths.size(); c++) {
    if (c) out += "  ";
    out += right_aligned(table.column_names[c], widths[c]);
  }
  for (const auto& row : cells) {
    out += "\n";
    for (size_t c = 0; c < widths.size(); c++) {
      if (c) out += "  ";
      out += right_aligned(row[c], widths[c]);
    }
  }
  return out;
}

std::string format_json(const ResultTable& table) {
  std::string out;
  for (size_t r = 0; r < table.rows.size(); r++) {
    nlohmann::ordered_json obj;
    for (size_t c = 0; c < table.column_names.size(); c++) {
      obj[table.column_names[c]] = table.rows[r][c].to_json();
    }
    if (r) out += "\n";
    out += obj.dump();
  }
  return out;
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format_html(const ResultTable& table) {
  std::string out = "<table border=\"1\" class=\"dataframe\">\n";
  out += "  <thead>\n    <tr style=\"text-align: right;\">\n";
  for (const auto& name : table.column_names) {
    out += "      <th>" + html_escape(name) + "</th>\n";
  }
  out += "    </tr>\n  </thead>\n  <tbody>\n";
  for (const auto& row : table.rows) {
    out += "    <tr>\n";
    for (const auto& v : row) {
      out += "      <td>" + html_escape(cell_text(v)) + "</td>\n";
    }
    out += "    </tr>\n";
  }
  out += "  </tbody>\n</table>";
  return out;
}

}  // namespace

const char* to_string(ObservationFormat fmt) {
  switch (fmt) {
    case ObservationFormat::Markdown: return "markdown";
    case ObservationFormat::Json: return "json";
    case ObservationFormat::String: return "string";
    case ObservationFormat::Html: return "html";
  }
  return "json";
}

std::optional<ObservationFormat> observation_format_from_string(const std::string& name) {
  if (name == "markdown") return ObservationFormat::Markdown;
  if (name == "json") return ObservationFormat::Json;
  if (name == "string") return ObservationFormat::String;
  if (name == "html") return ObservationFormat::Html;
  return std::nullopt;
}

std::string format_observation(const ResultTable& table, ObservationFormat fmt) {
  std::string body;
  switch (fmt) {
    case ObservationFormat::Markdown: body = format_markdown(table); break;
    case ObservationFormat::Json: body = format_json(table); break;
    case ObservationFormat::String: body = format_string(table); break;
    case ObservationFormat::Html: body = format_html(table); break;
  }
  std::string fmt_upper = to_string(fmt);
  std::transform(fmt_upper.begin(), fmt_upper.end(), fmt_upper.begin(), ::toupper);
  std::string footer = "In total, " + std::to_string(table.rows.size()) + " rows are displayed in " +
                       fmt_upper + " format.";
  if (body.empty()) return footer;
  return body + "\n" + footer;
}

std::string truncate_tokens(const std::string& text, int budget) {
  if (static_cast<std::int64_t>(count_tokens(text)) <= budget) return text;

  std::string marker = "... [observation truncated at " + std::to_string(budget) + " tokens]";
  std::string kept;
  std::int64_t used = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find('\n', pos);
    std::string line =
        next == std::string::npos ? text.substr(pos) : text.substr(pos, next - pos);
    std::int64_t line_tokens = static_cast<std::int64_t>(count_tokens(line));
    if (used + line_tokens > budget) break;
    used += line_tokens;
    kept += line;
    if (next == std::string::npos) {
      pos = text.size();
    } else {
      kept += '\n';
      pos = next + 1;
    }
  }
  if (kept.empty()) return marker;
  if (kept.back() != '\n') kept += '\n';
  return kept + marker;
}

}  // namespace nsrag
