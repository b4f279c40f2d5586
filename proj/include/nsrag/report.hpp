#pragma once

#include <string>
#include <vector>

#include "nsrag/evalfuncs.hpp"

namespace nsrag {

/// Everything the aggregator needs about one finished task.
struct TaskOutcome {
  std::string uuid;
  std::vector<std::string> tags;
  double score = 0.0;
  bool episode_failed = false;
};

struct Report {
  struct Row {
    std::string tag;
    int n = 0;
    double score_sum = 0.0;

    double accuracy() const { return n == 0 ? 0.0 : score_sum / n; }
  };
  std::vector<Row> rows;  // per-tag rows in canonical order, then "overall"

  const Row& overall() const { return rows.back(); }
};

/// Accuracy per tag and overall; a task counts toward every tag it
/// carries; partial scores average in. Accumulation runs in uuid order so
/// regenerated reports are byte-identical.
Report aggregate_report(std::vector<TaskOutcome> outcomes);

std::string render_report_text(const Report& report);
std::string render_report_json(const Report& report);

}  // namespace nsrag
