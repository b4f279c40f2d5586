#include "nsrag/methods.hpp"

namespace nsrag {

const char* to_string(Method method) {
  switch (method) {
    case Method::Classic: return "classic";
    case Method::IterativeClassic: return "iterative-classic";
    case Method::TwoStageNeu: return "two-stage-neu";
    case Method::IterativeNeu: return "iterative-neu";
    case Method::TwoStageSym: return "two-stage-sym";
    case Method::IterativeSym: return "iterative-sym";
    case Method::Hybrid: return "hybrid";
    case Method::NeuSym: return "neusym";
  }
  return "neusym";
}

std::optional<Method> method_from_string(const std::string& name) {
  for (Method m : {Method::Classic, Method::IterativeClassic, Method::TwoStageNeu,
                   Method::IterativeNeu, Method::TwoStageSym, Method::IterativeSym,
                   Method::Hybrid, Method::NeuSym}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

bool method_is_iterative(Method method) {
  return method == Method::IterativeClassic || method == Method::IterativeNeu ||
         method == Method::IterativeSym || method == Method::NeuSym;
}

bool method_is_two_stage(Method method) {
  return method == Method::TwoStageNeu || method == Method::TwoStageSym ||
         method == Method::Hybrid;
}

bool method_uses_db(Method method) {
  return method == Method::TwoStageSym || method == Method::IterativeSym ||
         method == Method::Hybrid || method == Method::NeuSym;
}

bool method_uses_vs(Method method) {
  return method != Method::TwoStageSym && method != Method::IterativeSym;
}

std::set<ActionType> allowed_actions(Method method) {
  switch (method) {
    case Method::Classic: return {};
    case Method::IterativeClassic:
      return {ActionType::RetrieveFromVectorstore, ActionType::GenerateAnswer};
    case Method::TwoStageNeu: return {ActionType::RetrieveFromVectorstore};
    case Method::IterativeNeu:
      return {ActionType::RetrieveFromVectorstore, ActionType::CalculateExpr,
              ActionType::ViewImage, ActionType::GenerateAnswer};
    case Method::TwoStageSym: return {ActionType::RetrieveFromDatabase};
    case Method::IterativeSym:
      return {ActionType::RetrieveFromDatabase, ActionType::CalculateExpr, ActionType::ViewImage,
              ActionType::GenerateAnswer};
    case Method::Hybrid:
      return {ActionType::RetrieveFromVectorstore, ActionType::RetrieveFromDatabase};
    case Method::NeuSym:
      return {ActionType::RetrieveFromVectorstore, ActionType::RetrieveFromDatabase,
              ActionType::CalculateExpr, ActionType::ViewImage, ActionType::GenerateAnswer};
  }
  return {};
}

}  // namespace nsrag
