#pragma once

#include <string>
#include <vector>

#include "nsrag/dataset.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/methods.hpp"

namespace nsrag {

/// Pre-rendered schema texts shared by every episode over one store.
struct PromptSchemas {
  std::string db_name;
  std::string db_schema;  // render_schema_prompt output
  std::string vs_schema;  // VectorStore::render_schema_prompt output
};

enum class PromptStage {
  Main,      // classic and iterative methods
  StageOne,  // two-stage retrieval turn
  StageTwo,  // two-stage answer turn
};

/// Five blocks in order: system prompt (as the system message), then
/// action/observation space, interaction framework, hints, and the task
/// block as the first user message. Blocks that do not apply to the
/// method/stage are omitted. `context` carries retrieved context for
/// classic and stage-two prompts.
std::vector<ChatMessage> assemble_prompt(const TaskExample& task, const MethodConfig& cfg,
                                         const PromptSchemas& schemas,
                                         const std::string& context = "",
                                         PromptStage stage = PromptStage::Main);

/// The instruction injected when the turn cap is reached without a
/// GenerateAnswer action.
std::string forced_answer_instruction();

std::string system_prompt_for(Method method, PromptStage stage);
std::string interaction_framework_prompt();
std::string hint_prompt(Method method);

}  // namespace nsrag
