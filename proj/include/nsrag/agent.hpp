#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsrag/action.hpp"
#include "nsrag/dataset.hpp"
#include "nsrag/environment.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/methods.hpp"
#include "nsrag/observation.hpp"
#include "nsrag/prompts.hpp"

namespace nsrag {

/// One (thought, action, observation) triplet. The terminal GenerateAnswer
/// turn carries no observation; turns whose action text failed to parse
/// keep the raw text and carry the error observation instead.
struct Turn {
  std::string thought;
  std::string action_text;
  std::optional<Action> action;
  std::optional<Observation> observation;
};

struct Trajectory {
  enum class Status { Completed, Failed };

  std::vector<Turn> turns;
  std::optional<Value> final_answer;
  bool forced_answer = false;
  Status status = Status::Completed;
  std::string failure;
  std::string classic_context;  // classic method only: the inlined chunks
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  int llm_calls = 0;
};

/// Extracts the thought and action blocks from one completion. The thought
/// is the text after "[Thought]:" up to "[Action]:"; the action block runs
/// to the end (or to a hallucinated "[Observation]"). Text outside the
/// markers is ignored.
std::pair<std::string, std::string> parse_turn(const std::string& completion);

/// Runs one episode with the method semantics of cfg.method: single-shot
/// context stuffing (classic), exactly-one-retrieval two-stage methods,
/// or the full ReAct loop with per-method action sets. Reaching the turn
/// cap without GenerateAnswer forces a final answer completion.
Trajectory run_episode(const TaskExample& task, const MethodConfig& cfg, Environment& env,
                       Gateway& gateway, const PromptSchemas& schemas);

}  // namespace nsrag
