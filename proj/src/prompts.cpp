#include "nsrag/prompts.hpp"

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

// Task-description sections appended to the iterative system prompts.
constexpr const char* kQuestionPart =
    "[Question]: A natural language question from the user regarding PDF files, e.g., Is there "
    "any ...?";
constexpr const char* kAnswerFormatPart =
    "[Answer Format]: Specifies the required format of the final answer, e.g., the answer is "
    "\"Yes\" or \"No\" without punctuation.";
constexpr const char* kDbSchemaPart =
    "[Database Schema]: A detailed serialized schema of the DuckDB database for reference when "
    "generating SQL queries. It includes 1) tables, 2) columns and their data types, 3) "
    "descriptions for these schema items, and 4) primary key and foreign key constraints.";
constexpr const char* kVsSchemaPart =
    "[Vectorstore Schema]: A detailed serialized schema of the Milvus vectorstore for reference "
    "when generating executable retrieval actions with specific parameters. It includes 1) "
    "collections, 2) fields, 3) encodable (table, column) pairs in the relational database "
    "where the vectorized content originates, and 4) grammar for valid filter rules.";

std::string task_description(bool with_db, bool with_vs) {
  std::string out = "## Task Description\nEach input task consists of the following parts:\n";
  out += std::string(kQuestionPart) + "\n";
  out += std::string(kAnswerFormatPart) + "\n";
  if (with_db) out += std::string(kDbSchemaPart) + "\n";
  if (with_vs) out += std::string(kVsSchemaPart) + "\n";
  return out;
}

}  // namespace

std::string system_prompt_for(Method method, PromptStage stage) {
  switch (method) {
    case Method::Classic:
      return "You are intelligent agent who is expert in answering user questions based on the "
             "retrieved context. You will be given a natural language question concerning a PDF "
             "file, and your task is to answer the input question with predefined output format "
             "using the relevant information.";
    case Method::NeuSym:
      return "You are an intelligent agent with expertise in retrieving useful context from "
             "both the DuckDB database and the Milvus vectorstore through SQL execution and "
             "similarity search and answering user questions. You will be given a natural "
             "language question concerning PDF files, along with the schema of both the "
             "database and the vectorstore. Your ultimate goal is to answer the input question "
             "with pre-defined answer format. The DuckDB database contains all parsed content "
             "of raw PDF files, while the Milvus vectorstore encodes specific column cells from "
             "the database as vectors. You can predict executable actions, interact with the "
             "hybrid environment (including database and vectorstore) across multiple turns, "
             "and retrieve necessary context until you are confident in resolving the "
             "question.\n\n" +
             task_description(true, true);
    case Method::IterativeClassic:
    case Method::IterativeNeu:
      return "You are intelligent agent who is expert in retrieving useful context from the "
             "vectorstore based on similarity search and answering user questions. You will be "
             "given a natural language question concerning a PDF file and a vectorstore schema "
             "of Milvus, and your ultimate task is to answer the input question with "
             "pre-defined output format. The Milvus vectorstore encodes various context from "
             "the parsed PDF in multi-views. You can predict executable actions, interact with "
             "the vectorstore in multiple turns, and retrieve desired context to help you "
             "better resolve the question.\n\n" +
             task_description(false, true);
    case Method::IterativeSym:
      return "You are intelligent agent who is expert in leveraging SQL programs to retrieve "
             "useful information and answer user questions. You will be given a natural "
             "language question concerning a PDF file and a database schema of DuckDB which "
             "stores the parsed PDF content, and your ultimate task is to answer the input "
             "question with predefined output format. You can predict intermediate SQLs, "
             "interact with the database in multiple turns, and retrieve desired information to "
             "help you better resolve the question.\n\n" +
             task_description(true, false);
    case Method::TwoStageNeu:
      if (stage == PromptStage::StageOne) {
        return "You are intelligent agent who is expert in predicting a well-formed retrieval "
               "action to search useful information to answer the user question. You will be "
               "given a natural language question concerning a PDF file and a vectorstore "
               "schema which defines all usable collections and fields in them. The vectorized "
               "contents in the vectorstore all come from cell values in another relational "
               "database which stores the parsed content of the PDF files. And your task is to "
               "predict a parametrized retrieval action to find useful information based on "
               "vector similarity search. Please refer to the concrete vectorstore schema to "
               "produce a valid retrieval action.";
      }
      break;
    case Method::TwoStageSym:
      if (stage == PromptStage::StageOne) {
        return "You are intelligent agent who is expert in writing SQL programs to retrieve "
               "useful information. You will be given a natural language question concerning a "
               "PDF file and a database schema which stores the parsed PDF content, and your "
               "task is to predict SQL to retrieve content from the database. Please refer to "
               "the concrete database schema to produce the valid SQL.";
      }
      break;
    case Method::Hybrid:
      if (stage == PromptStage::StageOne) {
        return "You are intelligent agent who is expert in predicting a well-formed retrieval "
               "action to search useful information to answer the user question. You will be "
               "given a natural language question concerning a PDF file, a database schema "
               "which stores the parsed PDF content, and a vectorstore schema which defines all "
               "usable collections and fields in them. The vectorized contents in the "
               "vectorstore all come from cell values in the database. And your task is to "
               "predict a parametrized retrieval action to find useful information. Please "
               "refer to the concrete schema to produce a valid retrieval action.";
      }
      break;
  }
  // Shared stage-two answering prompt of the two-stage methods.
  return "You are intelligent agent who is expert in answering user question given the "
         "retrieved context. You will be given a natural language question concerning a PDF "
         "file and the retrieved context. Your task is to predict the final answer based on "
         "given question and context. Please refer to the answer format to produce the valid "
         "answer.";
}

std::string interaction_framework_prompt() {
  return "## Interaction Framework\n"
         "The main interaction procedure proceeds like this:\n\n----\n\n"
         "[Thought]: reasoning process, why to take this action\n"
         "[Action]: which action to take, please strictly conform to the action specification\n"
         "[Observation]: execution results or error message after taking the action\n\n"
         "... more interleaved triplets of ([Thought], [Action], [Observation]) ...\n\n"
         "[Thought]: reasoning process to produce the final answer\n"
         "[Action]: the terminal action `GenerateAnswer`, there is no further observation\n\n"
         "----\n\n"
         "In general, the main interaction loop consists of an interleaved of triplets "
         "([Thought], [Action], [Observation]), except the last `GenerateAnswer` action which "
         "does not have \"[Observation]:\". You need to predict the \"[Thought]: ...\" followed "
         "by the \"[Action]: ...\" for each turn, and we will execute your action in the "
         "environment and provide the \"[Observation]: ...\" for the previous action.";
}

std::string hint_prompt(Method method) {
  if (!method_is_iterative(method)) return "";
  bool vs_strategies = method == Method::IterativeNeu || method == Method::NeuSym;
  bool combine = method == Method::NeuSym;
  bool sql = method_uses_db(method);
  bool vs = method_uses_vs(method);

  std::string out = "## Suggestions or Hints for Agent Interaction\n";
  int n = 0;
  if (vs_strategies) {
    out += "\n" + std::to_string(++n) + ". Explore multiple retrieval strategies. For example:\n";
    out += "- Experiment with different (table, column) pairs to extract diverse types of "
           "information.\n";
    out += "- Query various embedding models (collections) to find the most relevant context.\n";
  }
  if (combine) {
    out += "\n" + std::to_string(++n) + ". Combine both structured and unstructured data. "
           "Concretely:\n";
    out += "- Use SQL queries to retrieve precise facts and structured data. Pay special "
           "attention to morphological variations in cell values.\n";
    out += "- Perform similarity searches in the vectorstore to capture semantic relationships "
           "and hidden insights.\n";
  }
  out += "\n" + std::to_string(++n) + ". Iterate and refine:\n";
  if (sql) {
    out += "- If SQL execution result is not satisfactory, try alternative SQL queries to "
           "explore the database content carefully.\n";
  }
  if (vs) {
    out += "- If the vector-based neural retrieval is insufficient, try alternative approaches "
           "or parameter settings.\n";
  }
  out += "- Use your findings to validate or enrich the final response.\n";
  out += "\n" + std::to_string(++n) + ". Ensure confidence. That is, only make a final decision "
         "when you are confident that the retrieved information fully addresses the user's "
         "query.";
  return out;
}

std::string forced_answer_instruction() {
  return "You have reached the maximum number of interaction turns. Based on the interaction "
         "history above, you must now provide the final answer. Reply with only the final "
         "answer, strictly following the required answer format, without any extra explanation "
         "or further actions.";
}

std::vector<ChatMessage> assemble_prompt(const TaskExample& task, const MethodConfig& cfg,
                                         const PromptSchemas& schemas, const std::string& context,
                                         PromptStage stage) {
  Method method = cfg.method;
  bool iterative = method_is_iterative(method);
  bool answering_stage = method == Method::Classic || stage == PromptStage::StageTwo;
  bool with_db = !answering_stage && method_uses_db(method);
  bool with_vs =
      !answering_stage && method != Method::Classic && method_uses_vs(method);

  std::vector<ChatMessage> messages;
  messages.push_back(ChatMessage::system(system_prompt_for(method, stage)));

  std::string user;
  if (!answering_stage && !allowed_actions(method).empty()) {
    std::set<ActionType> allowed = allowed_actions(method);
    if (method_is_two_stage(method) && stage == PromptStage::StageOne) {
      allowed.erase(ActionType::GenerateAnswer);
    }
    user += action_space_prompt(allowed, cfg.action_format) + "\n";
  }
  if (iterative) {
    user += interaction_framework_prompt() + "\n\n";
    std::string hints = hint_prompt(method);
    if (!hints.empty()) user += hints + "\n\n";
  }

  if (iterative) {
    user += "Remember that, for each question, you only have " + std::to_string(cfg.max_turns) +
            " interaction turns at most. Now, let's start!\n";
  }
  user += "[Question]: " + task.question + "\n";
  user += "[Answer Format]: " + task.answer_format + "\n";
  if (!context.empty()) {
    user += "[Context]: The retrieved context from the PDF files is as follows:\n" + context +
            "\n";
  }
  if (with_db) {
    user += "[Database Schema]: The database schema for " + schemas.db_name +
            " is as follows:\n" + schemas.db_schema + "\n";
  }
  if (with_vs) {
    user += "[Vectorstore Schema]: " + schemas.vs_schema + "\n";
  }
  messages.push_back(ChatMessage::user(user));
  return messages;
}

}  // namespace nsrag
