#include "nsrag/report.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "nsrag/dataset.hpp"

namespace nsrag {

Report aggregate_report(std::vector<TaskOutcome> outcomes) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const TaskOutcome& a, const TaskOutcome& b) { return a.uuid < b.uuid; });

  Report report;
  for (const auto& tag : valid_tags()) report.rows.push_back({tag, 0, 0.0});
  Report::Row overall{"overall", 0, 0.0};

  for (const auto& outcome : outcomes) {
    overall.n++;
    overall.score_sum += outcome.score;
    for (const auto& tag : outcome.tags) {
      for (auto& row : report.rows) {
        if (row.tag == tag) {
          row.n++;
          row.score_sum += outcome.score;
        }
      }
    }
  }
  std::erase_if(report.rows, [](const Report::Row& row) { return row.n == 0; });
  report.rows.push_back(overall);
  return report;
}

std::string render_report_text(const Report& report) {
  size_t tag_width = 7;  // "overall"
  for (const auto& row : report.rows) tag_width = std::max(tag_width, row.tag.size());

  auto pad = [](const std::string& s, size_t width) {
    return s + std::string(width - s.size(), ' ');
  };
  std::string out = pad("tag", tag_width) + "      n  accuracy\n";
  for (const auto& row : report.rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%7d  %7.1f%%", row.n, row.accuracy() * 100.0);
    out += pad(row.tag, tag_width) + buf + "\n";
  }
  return out;
}

std::string render_report_json(const Report& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    entry["n"] = row.n;
    entry["accuracy"] = row.accuracy();
    if (row.tag == "overall") {
      j["overall"] = entry;
    } else {
      tags[row.tag] = entry;
    }
  }
  j["tags"] = tags;
  return j.dump(2) + "\n";
}

}  // namespace nsrag
