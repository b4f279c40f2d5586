#include "nsrag/agent.hpp"

#include "nsrag/errors.hpp"
#include "nsrag/evalfuncs.hpp"
#include "nsrag/tokenizer.hpp"

namespace nsrag {

namespace {

std::string trim_copy(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Observation make_error_observation(const std::string& message, int budget) {
  Observation obs;
  obs.kind = Observation::Kind::Error;
  obs.error = message;
  obs.rendered = truncate_tokens("[ERROR] " + message, budget);
  obs.token_count = static_cast<std::int64_t>(count_tokens(obs.rendered));
  return obs;
}

std::string allowed_action_names(const std::set<ActionType>& allowed) {
  std::string out;
  for (ActionType t : allowed) {
    if (!out.empty()) out += ", ";
    out += to_string(t);
  }
  return out;
}

class EpisodeRunner {
 public:
  EpisodeRunner(const TaskExample& task, const MethodConfig& cfg, Environment& env,
                Gateway& gateway, const PromptSchemas& schemas)
      : task_(task), cfg_(cfg), env_(env), gateway_(gateway), schemas_(schemas) {}

  Trajectory run() {
    switch (cfg_.method) {
      case Method::Classic: return run_classic();
      case Method::TwoStageNeu:
      case Method::TwoStageSym:
      case Method::Hybrid: return run_two_stage();
      default: return run_iterative();
    }
  }

 private:
  std::string chat(std::vector<ChatMessage>& messages) {
    std::string completion = gateway_.chat(messages);
    for (const auto& m : messages) {
      trajectory_.prompt_tokens += static_cast<std::int64_t>(count_tokens(m.text));
    }
    trajectory_.completion_tokens += static_cast<std::int64_t>(count_tokens(completion));
    trajectory_.llm_calls++;
    return completion;
  }

  void append_observation(std::vector<ChatMessage>& messages, const std::string& completion,
                          const Observation& obs) {
    messages.push_back(ChatMessage::assistant(completion));
    ChatMessage user = ChatMessage::user("[Observation]:\n" + obs.rendered);
    if (obs.kind == Observation::Kind::Image && env_.config().vision_capable) {
      user.image_png_base64.push_back(obs.image_png_base64);
    }
    messages.push_back(std::move(user));
  }

  /// Parse, check against the method's action set, and validate. Throws
  /// Error on any rejection; never executes a disallowed action.
  Action resolve_action(const std::string& action_text) {
    Action action = parse_action(action_text, cfg_.action_format);
    const auto allowed = allowed_actions(cfg_.method);
    if (!allowed.count(action.type())) {
      raise(ErrorKind::NotSupported,
            std::string("action '") + action.name() + "' is not available for method '" +
                to_string(cfg_.method) + "'; allowed actions are [" +
                allowed_action_names(allowed) + "]");
    }
    if (cfg_.method == Method::IterativeClassic && action.is<RetrieveFromVectorstore>()) {
      // The view of Iterative Classic retrieval is always pinned.
      auto& a = std::get<RetrieveFromVectorstore>(action.v);
      a.collection_name = classic_collection();
      a.table_name = kClassicTable;
      a.column_name = kClassicColumn;
    }
    return validate_action(action, env_.db_catalog(), env_.store());
  }

  std::string classic_collection() const {
    const VectorStore* store = env_.store();
    if (store && !store->find_collection(kClassicCollection) &&
        store->find_collection("text_bm25_en")) {
      return "text_bm25_en";
    }
    return kClassicCollection;
  }

  Observation fetch_classic_context() {
    Action search{RetrieveFromVectorstore{task_.question, classic_collection(), kClassicTable,
                                          kClassicColumn, "",
                                          static_cast<std::int64_t>(cfg_.classic_top_k)}};
    return env_.step(search);
  }

  Trajectory run_classic() {
    Observation context = fetch_classic_context();
    if (context.kind == Observation::Kind::Error) {
      trajectory_.status = Trajectory::Status::Failed;
      trajectory_.failure = "classic retrieval failed: " + context.error;
      return trajectory_;
    }
    trajectory_.classic_context = context.rendered;
    auto messages = assemble_prompt(task_, cfg_, schemas_, context.rendered);
    try {
      std::string completion = chat(messages);
      trajectory_.final_answer = parse_literal(completion);
    } catch (const Error& e) {
      trajectory_.status = Trajectory::Status::Failed;
      trajectory_.failure = e.what();
    }
    return trajectory_;
  }

  Trajectory run_two_stage() {
    auto messages = assemble_prompt(task_, cfg_, schemas_, "", PromptStage::StageOne);
    Observation retrieved;
    bool have_context = false;
    // One retrieval action, with a single re-prompt on a malformed or
    // disallowed stage-one output.
    for (int attempt = 0; attempt < 2 && !have_context; attempt++) {
      std::string completion;
      try {
        completion = chat(messages);
      } catch (const Error& e) {
        trajectory_.status = Trajectory::Status::Failed;
        trajectory_.failure = e.what();
        return trajectory_;
      }
      Turn turn;
      std::string action_text = completion;
      if (completion.find("[Action]:") != std::string::npos) {
        auto [thought, block] = parse_turn_lenient(completion);
        turn.thought = thought;
        action_text = block;
      }
      turn.action_text = trim_copy(action_text);
      try {
        Action action = resolve_action(turn.action_text);
        retrieved = env_.step(action);
        turn.action = action;
        turn.observation = retrieved;
        trajectory_.turns.push_back(std::move(turn));
        if (retrieved.kind == Observation::Kind::Error) {
          // Execution errors (bad SQL, bad filter) also grant the retry.
          append_observation(messages, completion, retrieved);
          messages.push_back(ChatMessage::user(
              "The retrieval failed. Please output one corrected retrieval action."));
          continue;
        }
        have_context = true;
      } catch (const Error& e) {
        Observation obs = make_error_observation(e.what(), cfg_.per_turn_token_budget);
        turn.observation = obs;
        trajectory_.turns.push_back(std::move(turn));
        append_observation(messages, completion, obs);
        messages.push_back(ChatMessage::user(
            "The previous action was invalid. Please output one valid retrieval action that "
            "follows the specification."));
      }
    }
    if (!have_context) {
      trajectory_.status = Trajectory::Status::Failed;
      trajectory_.failure = "stage one produced no valid retrieval after a re-prompt";
      return trajectory_;
    }

    auto answer_messages =
        assemble_prompt(task_, cfg_, schemas_, retrieved.rendered, PromptStage::StageTwo);
    try {
      std::string completion = chat(answer_messages);
      trajectory_.final_answer = parse_literal(completion);
    } catch (const Error& e) {
      trajectory_.status = Trajectory::Status::Failed;
      trajectory_.failure = e.what();
    }
    return trajectory_;
  }

  Trajectory run_iterative() {
    auto messages = assemble_prompt(task_, cfg_, schemas_);
    for (int turn_index = 0; turn_index < cfg_.max_turns; turn_index++) {
      std::string completion;
      try {
        completion = chat(messages);
      } catch (const Error& e) {
        trajectory_.status = Trajectory::Status::Failed;
        trajectory_.failure = e.what();
        return trajectory_;
      }

      Turn turn;
      try {
        auto [thought, action_text] = parse_turn(completion);
        turn.thought = thought;
        turn.action_text = action_text;
        Action action = resolve_action(action_text);
        turn.action = action;
        Observation obs = env_.step(action);
        if (obs.kind == Observation::Kind::Terminal) {
          trajectory_.final_answer = obs.answer;
          trajectory_.turns.push_back(std::move(turn));
          return trajectory_;
        }
        turn.observation = obs;
        trajectory_.turns.push_back(turn);
        append_observation(messages, completion, obs);
      } catch (const Error& e) {
        if (turn.action_text.empty()) turn.action_text = trim_copy(completion);
        Observation obs = make_error_observation(
            std::string(e.what()) +
                ". Please follow the interaction framework: reply with \"[Thought]: ...\" "
                "followed by \"[Action]: ...\" holding exactly one action in " +
                to_string(cfg_.action_format) + " format.",
            cfg_.per_turn_token_budget);
        turn.observation = obs;
        trajectory_.turns.push_back(std::move(turn));
        append_observation(messages, completion, obs);
      }
    }

    // Turn cap reached without GenerateAnswer: force a final answer.
    messages.push_back(ChatMessage::user(forced_answer_instruction()));
    try {
      std::string completion = chat(messages);
      trajectory_.final_answer = parse_literal(completion);
      trajectory_.forced_answer = true;
    } catch (const Error& e) {
      trajectory_.status = Trajectory::Status::Failed;
      trajectory_.failure = e.what();
    }
    return trajectory_;
  }

  /// parse_turn without the missing-thought requirement (two-stage outputs
  /// often skip the thought marker).
  static std::pair<std::string, std::string> parse_turn_lenient(const std::string& completion) {
    size_t action = completion.find("[Action]:");
    std::string thought;
    size_t thought_pos = completion.find("[Thought]:");
    if (thought_pos != std::string::npos && thought_pos < action) {
      thought = trim_copy(
          completion.substr(thought_pos + 10, action - thought_pos - 10));
    }
    std::string block = completion.substr(action + 9);
    size_t obs = block.find("[Observation]");
    if (obs != std::string::npos) block = block.substr(0, obs);
    return {thought, trim_copy(block)};
  }

  const TaskExample& task_;
  const MethodConfig& cfg_;
  Environment& env_;
  Gateway& gateway_;
  const PromptSchemas& schemas_;
  Trajectory trajectory_;
};

}  // namespace

std::pair<std::string, std::string> parse_turn(const std::string& completion) {
  size_t thought = completion.find("[Thought]:");
  if (thought == std::string::npos) {
    raise(ErrorKind::ParseError, "missing-thought: the completion has no \"[Thought]:\" marker");
  }
  size_t action = completion.find("[Action]:", thought);
  if (action == std::string::npos) {
    raise(ErrorKind::ParseError, "missing-action: the completion has no \"[Action]:\" marker");
  }
  std::string thought_text = trim_copy(completion.substr(thought + 10, action - thought - 10));
  std::string action_block = completion.substr(action + 9);
  size_t obs = action_block.find("[Observation]");
  if (obs != std::string::npos) action_block = action_block.substr(0, obs);
  return {thought_text, trim_copy(action_block)};
}

Trajectory run_episode(const TaskExample& task, const MethodConfig& cfg, Environment& env,
                       Gateway& gateway, const PromptSchemas& schemas) {
  EpisodeRunner runner(task, cfg, env, gateway, schemas);
  return runner.run();
}

}  // namespace nsrag
