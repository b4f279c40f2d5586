#include "nsrag/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsrag/errors.hpp"
#include "nsrag/evalfuncs.hpp"

namespace nsrag {

namespace {

using json = nlohmann::json;

std::vector<std::string> string_list(const json& j, const std::string& where,
                                     const std::string& key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) raise(ErrorKind::ParseError, where + "." + key + ": expected an array");
  for (const auto& e : j[key]) {
    if (!e.is_string()) {
      raise(ErrorKind::ParseError, where + "." + key + ": expected strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

const std::vector<std::string>& valid_tags() {
  static const std::vector<std::string> tags = {"single",  "multiple", "retrieval", "text",
                                                "image",   "table",    "formula",   "metadata",
                                                "subjective", "objective"};
  return tags;
}

TaskExample task_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) raise(ErrorKind::ParseError, where + ": task record must be an object");
  TaskExample task;
  for (const char* key : {"uuid", "question", "answer_format"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      raise(ErrorKind::ParseError, where + "." + key + ": missing required string field");
    }
  }
  task.uuid = j["uuid"].get<std::string>();
  task.question = j["question"].get<std::string>();
  task.answer_format = j["answer_format"].get<std::string>();
  task.tags = string_list(j, where, "tags");
  for (const auto& tag : task.tags) {
    const auto& tags = valid_tags();
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
      raise(ErrorKind::BadTag, where + " (uuid " + task.uuid + "): unknown tag '" + tag + "'");
    }
  }
  task.anchor_pdf = string_list(j, where, "anchor_pdf");
  task.reference_pdf = string_list(j, where, "reference_pdf");
  task.conference = string_list(j, where, "conference");

  if (!j.contains("evaluator") || !j["evaluator"].is_object()) {
    raise(ErrorKind::ParseError, where + ".evaluator: missing required object");
  }
  const json& ev = j["evaluator"];
  if (!ev.contains("eval_func") || !ev["eval_func"].is_string()) {
    raise(ErrorKind::ParseError, where + ".evaluator.eval_func: missing required string");
  }
  task.evaluator.eval_func = ev["eval_func"].get<std::string>();
  if (!eval_func_registered(task.evaluator.eval_func)) {
    raise(ErrorKind::UnknownEvalFunc,
          where + " (uuid " + task.uuid + "): unknown eval_func '" + task.evaluator.eval_func +
              "'");
  }
  if (ev.contains("eval_kwargs")) {
    if (!ev["eval_kwargs"].is_object()) {
      raise(ErrorKind::ParseError, where + ".evaluator.eval_kwargs: expected an object");
    }
    task.evaluator.eval_kwargs = Value::from_json(ev["eval_kwargs"]).as_map();
  }
  return task;
}

std::vector<TaskExample> load_tasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot read dataset file " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<TaskExample> tasks;
  size_t first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return tasks;

  if (content[first] == '[') {
    json j;
    try {
      j = json::parse(content);
    } catch (const json::exception& e) {
      raise(ErrorKind::ParseError, path + ": " + e.what());
    }
    for (size_t i = 0; i < j.size(); i++) {
      tasks.push_back(task_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return tasks;
  }

  // JSON-lines
  std::istringstream lines(content);
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    lineno++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    tasks.push_back(task_from_json(j, path + ":" + std::to_string(lineno)));
  }
  return tasks;
}

}  // namespace nsrag
