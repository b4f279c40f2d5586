#pragma once

#include <optional>
#include <set>
#include <string>

#include "nsrag/action_grammar.hpp"
#include "nsrag/observation.hpp"

namespace nsrag {

/// The eight retrieval methods.
enum class Method {
  Classic,
  IterativeClassic,
  TwoStageNeu,
  IterativeNeu,
  TwoStageSym,
  IterativeSym,
  Hybrid,
  NeuSym,
};

const char* to_string(Method method);
std::optional<Method> method_from_string(const std::string& name);

bool method_is_iterative(Method method);
bool method_is_two_stage(Method method);
bool method_uses_db(Method method);
bool method_uses_vs(Method method);

/// The action set the method's prompt advertises and its loop enforces.
std::set<ActionType> allowed_actions(Method method);

struct MethodConfig {
  Method method = Method::NeuSym;
  ActionFormat action_format = ActionFormat::Markdown;
  ObservationFormat observation_format = ObservationFormat::Json;
  int max_turns = 20;
  int per_turn_token_budget = kDefaultTurnTokenBudget;
  int classic_top_k = 4;
};

/// The pinned view of Classic and Iterative Classic retrieval.
inline constexpr const char* kClassicCollection = "text_sentence_transformers_all_minilm_l6_v2";
inline constexpr const char* kClassicTable = "chunks";
inline constexpr const char* kClassicColumn = "text_content";

}  // namespace nsrag
