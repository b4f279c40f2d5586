#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsrag/dataset.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/value.hpp"

namespace nsrag {

/// Outcome of one evaluation: objective functions score 0 or 1; partial
/// scoring functions return a fraction in [0, 1].
struct EvalResult {
  double score = 0.0;
  std::string detail;
  std::vector<std::string> judge_transcript;

  bool passed() const { return score >= 1.0 - 1e-9; }
};

/// Total literal reader for model answers: Python/JSON literals, optional
/// surrounding code fences, bare text falls back to a trimmed string.
Value parse_literal(const std::string& text);

bool eval_func_registered(const std::string& name);
std::vector<std::string> registered_eval_funcs();

/// Dispatches to the registered evaluation function. `judge` is required
/// by the subjective functions and ignored by the objective ones;
/// `question` gives judge prompts their context when available.
EvalResult evaluate(const Value& prediction, const EvaluatorSpec& spec, Gateway* judge,
                    const std::string& question = "");

}  // namespace nsrag
