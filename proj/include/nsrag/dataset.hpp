#pragma once

#include <string>
#include <vector>

#include "nsrag/value.hpp"

namespace nsrag {

struct EvaluatorSpec {
  std::string eval_func;
  Value::Map eval_kwargs;
};

/// One dataset record: a question over one or more papers plus the
/// instance-specific evaluator that scores the final answer.
struct TaskExample {
  std::string uuid;
  std::string question;
  std::string answer_format;
  std::vector<std::string> tags;
  std::vector<std::string> anchor_pdf;
  std::vector<std::string> reference_pdf;
  std::vector<std::string> conference;
  EvaluatorSpec evaluator;
};

/// The closed tag vocabulary: task types, categories, evaluation genres.
const std::vector<std::string>& valid_tags();

/// Loads a JSON array or JSON-lines file of task records; every record is
/// validated (field shapes, known tags, registered eval_func).
std::vector<TaskExample> load_tasks(const std::string& path);

TaskExample task_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace nsrag
