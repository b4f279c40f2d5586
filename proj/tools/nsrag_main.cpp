// Command-line driver: ingest bundles, encode the vector index, answer a
// single question, run a benchmark, and re-aggregate reports.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nsrag/bench.hpp"
#include "nsrag/config.hpp"
#include "nsrag/encode.hpp"
#include "nsrag/errors.hpp"
#include "nsrag/ingest.hpp"

namespace {

using namespace nsrag;

constexpr int kExitOk = 0;
constexpr int kExitTaskFailure = 1;
constexpr int kExitConfigError = 2;

PromptSchemas make_schemas(const Database& db, const VectorStore* store) {
  PromptSchemas schemas;
  schemas.db_name = db.catalog().db_name;
  schemas.db_schema = render_schema_prompt(db.catalog());
  if (store) schemas.vs_schema = store->render_schema_prompt(db.catalog());
  return schemas;
}

int cmd_ingest(const RunConfig& cfg, const std::vector<std::string>& bundles, int chunk_size) {
  Database db = Database::open(cfg.db_path());
  auto gateway = make_gateway(cfg);
  ChunkingConfig chunking;
  chunking.chunk_size_tokens = chunk_size;

  for (const auto& path : bundles) {
    DocumentBundle bundle = load_bundle(path);
    SummarySet summaries;
    if (cfg.gateway_mode == "offline") {
      summaries = empty_summaries(bundle);
      std::cerr << "note: no LLM configured, summaries are left empty\n";
    } else {
      summaries = generate_summaries(bundle, *gateway);
      for (const auto& warning : summaries.warnings) {
        std::cerr << "warning: " << path << ": " << warning << "\n";
      }
    }
    std::string paper_id = populate(db, bundle, chunking, summaries, cfg.rasters_dir());
    std::cout << "ingested " << paper_id << " from " << path << "\n";
  }
  return kExitOk;
}

int cmd_encode(const RunConfig& cfg, const std::string& collections_csv) {
  Database db = Database::open(cfg.db_path());
  auto gateway = make_gateway(cfg);

  EncodeConfig encode_cfg;
  encode_cfg.raster_dir = cfg.rasters_dir();
  encode_cfg.standin_embeddings = cfg.embed_model.empty();
  if (!collections_csv.empty()) {
    std::string name;
    for (char c : collections_csv + ",") {
      if (c == ',') {
        if (!name.empty()) encode_cfg.collections.push_back(name);
        name.clear();
      } else {
        name += c;
      }
    }
  }
  VectorStore store = build_vector_store(db, *gateway, encode_cfg);
  store.save(cfg.vectors_path());
  for (const auto& col : store.collections()) {
    std::cout << col.name << ": " << col.entries.size() << " entries\n";
  }
  return kExitOk;
}

int cmd_ask(const RunConfig& cfg, const std::string& question, const std::string& answer_format,
            const std::vector<std::string>& papers, bool show_trajectory) {
  Database db = Database::open_readonly(cfg.db_path());
  VectorStore store = VectorStore::load(cfg.vectors_path());
  auto gateway = make_gateway(cfg);
  attach_text_embedder(store, *gateway, cfg.embed_model.empty());

  TaskExample task;
  task.uuid = "adhoc";
  task.question = question;
  task.answer_format =
      answer_format.empty() ? "Your answer should be concise text." : answer_format;
  task.anchor_pdf = papers;
  task.evaluator.eval_func = "eval_string_exact_match";

  EnvironmentConfig env_cfg;
  env_cfg.observation_format = cfg.method_cfg.observation_format;
  env_cfg.per_turn_token_budget = cfg.method_cfg.per_turn_token_budget;
  env_cfg.sql_row_cap = cfg.sql_row_cap;
  env_cfg.vision_capable = cfg.vision;
  env_cfg.raster_dir = cfg.rasters_dir();
  Environment env(db, &store, env_cfg);

  PromptSchemas schemas = make_schemas(db, &store);
  Trajectory trajectory = run_episode(task, cfg.method_cfg, env, *gateway, schemas);

  if (show_trajectory) {
    for (size_t i = 0; i < trajectory.turns.size(); i++) {
      const Turn& turn = trajectory.turns[i];
      std::cout << "--- turn " << i + 1 << " ---\n";
      if (!turn.thought.empty()) std::cout << "[Thought]: " << turn.thought << "\n";
      std::cout << "[Action]: " << turn.action_text << "\n";
      if (turn.observation) {
        std::cout << "[Observation]:\n" << turn.observation->rendered << "\n";
      }
    }
  }
  if (trajectory.status == Trajectory::Status::Failed) {
    std::cerr << "episode failed: " << trajectory.failure << "\n";
    return kExitTaskFailure;
  }
  std::cout << (trajectory.final_answer ? trajectory.final_answer->to_text() : "") << "\n";
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, const std::string& dataset, int limit, int parallel,
              const std::string& output_dir) {
  std::vector<TaskExample> tasks = load_tasks(dataset);
  Database db = Database::open_readonly(cfg.db_path());
  VectorStore store = VectorStore::load(cfg.vectors_path());
  auto query_gateway = make_gateway(cfg);
  attach_text_embedder(store, *query_gateway, cfg.embed_model.empty());

  BenchConfig bench_cfg;
  bench_cfg.method = cfg.method_cfg;
  bench_cfg.parallel = parallel;
  bench_cfg.limit = limit;
  bench_cfg.output_dir = output_dir;

  BenchDeps deps;
  deps.db_path = cfg.db_path();
  deps.store = &store;
  deps.env_cfg.observation_format = cfg.method_cfg.observation_format;
  deps.env_cfg.per_turn_token_budget = cfg.method_cfg.per_turn_token_budget;
  deps.env_cfg.sql_row_cap = cfg.sql_row_cap;
  deps.env_cfg.vision_capable = cfg.vision;
  deps.env_cfg.raster_dir = cfg.rasters_dir();
  deps.schemas = make_schemas(db, &store);
  deps.gateway_for = make_task_gateway_factory(cfg);
  deps.judge = cfg.gateway_mode == "offline" ? nullptr : query_gateway.get();

  BenchSummary summary = run_bench(tasks, bench_cfg, deps);
  std::cout << render_report_text(summary.report);
  std::cout << "traces written to " << output_dir << "\n";
  if (summary.failures > 0) {
    std::cerr << summary.failures << " task(s) failed\n";
    return kExitTaskFailure;
  }
  return kExitOk;
}

int cmd_report(const std::string& traces_dir) {
  Report report = report_from_traces(traces_dir);
  std::ofstream(traces_dir + "/report.txt") << render_report_text(report);
  std::ofstream(traces_dir + "/report.json") << render_report_json(report);
  std::cout << render_report_text(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agentic hybrid neural-symbolic retrieval QA over parsed papers"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--store", cfg.store_dir, "Store directory (database, vectors, rasters)");
  app.add_option("--config", config_path, "Config file with key = value lines");
  app.add_option("--gateway", cfg.gateway_mode, "Gateway mode: offline | http | replay");
  app.add_option("--base-url", cfg.base_url, "OpenAI-compatible endpoint base URL");
  app.add_option("--model", cfg.model, "Chat model id");
  app.add_option("--embed-model", cfg.embed_model,
                 "Embedding model id (empty: deterministic stand-in)");
  app.add_flag("--vision", cfg.vision, "The chat model accepts images");
  app.add_option("--replay", cfg.replay_path, "Replay script for the scripted gateway");
  std::string method_name, action_format, observation_format;
  app.add_option("--method", method_name, "classic | iterative-classic | two-stage-neu | "
                                          "iterative-neu | two-stage-sym | iterative-sym | "
                                          "hybrid | neusym");
  app.add_option("--action-format", action_format, "markdown | json | xml | yaml");
  app.add_option("--observation-format", observation_format, "markdown | json | string | html");
  app.add_option("--max-turns", cfg.method_cfg.max_turns, "Interaction turn cap");
  app.add_option("--turn-token-budget", cfg.method_cfg.per_turn_token_budget,
                 "Per-turn observation token budget");

  auto* ingest = app.add_subcommand("ingest", "Load pre-parsed bundles into the store");
  std::vector<std::string> bundles;
  int chunk_size = 512;
  ingest->add_option("--bundle", bundles, "Bundle JSON file(s)")->required();
  ingest->add_option("--chunk-size", chunk_size, "Fixed-window chunk size in tokens");

  auto* encode = app.add_subcommand("encode", "Build the vector index from the store");
  std::string collections_csv;
  encode->add_option("--collections", collections_csv,
                     "Comma-separated collection names (default: all four)");

  auto* ask = app.add_subcommand("ask", "Answer one question");
  std::string question, answer_format;
  std::vector<std::string> papers;
  bool show_trajectory = false;
  ask->add_option("--question", question, "The question text")->required();
  ask->add_option("--answer-format", answer_format, "Answer format instruction");
  ask->add_option("--paper", papers, "Anchor paper id(s)");
  ask->add_flag("--show-trajectory", show_trajectory, "Print the interaction trajectory");

  auto* bench = app.add_subcommand("bench", "Run a dataset and write traces + report");
  std::string dataset, output_dir = "traces";
  int limit = -1, parallel = 1;
  bench->add_option("--dataset", dataset, "Dataset JSON/JSONL file")->required();
  bench->add_option("--limit", limit, "Run only the first N tasks");
  bench->add_option("--parallel", parallel, "Concurrent episodes");
  bench->add_option("--output", output_dir, "Trace output directory");

  auto* report = app.add_subcommand("report", "Re-aggregate a report from traces");
  std::string traces_dir;
  report->add_option("--traces", traces_dir, "Trace directory")->required();

  // The config file loads first so that explicit flags win over it.
  for (int i = 1; i + 1 < argc; i++) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (!method_name.empty()) {
      auto m = method_from_string(method_name);
      if (!m) raise(ErrorKind::ConfigError, "unknown method '" + method_name + "'");
      cfg.method_cfg.method = *m;
    }
    if (!action_format.empty()) {
      auto f = action_format_from_string(action_format);
      if (!f) raise(ErrorKind::ConfigError, "unknown action format '" + action_format + "'");
      cfg.method_cfg.action_format = *f;
    }
    if (!observation_format.empty()) {
      auto f = observation_format_from_string(observation_format);
      if (!f) {
        raise(ErrorKind::ConfigError, "unknown observation format '" + observation_format + "'");
      }
      cfg.method_cfg.observation_format = *f;
    }
    if (!cfg.replay_path.empty() && cfg.gateway_mode == "offline") cfg.gateway_mode = "replay";

    if (*ingest) return cmd_ingest(cfg, bundles, chunk_size);
    if (*encode) return cmd_encode(cfg, collections_csv);
    if (*ask) return cmd_ask(cfg, question, answer_format, papers, show_trajectory);
    if (*bench) return cmd_bench(cfg, dataset, limit, parallel, output_dir);
    if (*report) return cmd_report(traces_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool config_class = e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::UsageError;
    return config_class ? kExitConfigError : kExitTaskFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTaskFailure;
  }
  return kExitConfigError;
}
