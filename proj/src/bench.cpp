#include "nsrag/bench.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

using json = nlohmann::ordered_json;

const char* observation_kind_name(Observation::Kind kind) {
  switch (kind) {
    case Observation::Kind::Table: return "table";
    case Observation::Kind::Image: return "image";
    case Observation::Kind::Scalar: return "scalar";
    case Observation::Kind::Error: return "error";
    case Observation::Kind::Terminal: return "terminal";
  }
  return "error";
}

}  // namespace

void write_trace(const std::string& path, const TaskExample& task, const MethodConfig& cfg,
                 const Trajectory& trajectory, const EvalResult& eval, bool eval_errored,
                 const std::string& eval_error) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::StorageUnavailable, "cannot write trace file " + path);

  json meta;
  meta["type"] = "meta";
  meta["uuid"] = task.uuid;
  meta["question"] = task.question;
  meta["method"] = to_string(cfg.method);
  meta["action_format"] = to_string(cfg.action_format);
  meta["observation_format"] = to_string(cfg.observation_format);
  meta["tags"] = task.tags;
  out << meta.dump() << "\n";

  for (size_t i = 0; i < trajectory.turns.size(); i++) {
    const Turn& turn = trajectory.turns[i];
    json jt;
    jt["type"] = "turn";
    jt["index"] = i + 1;
    jt["thought"] = turn.thought;
    jt["action_text"] = turn.action_text;
    jt["action_type"] = turn.action ? json(turn.action->name()) : json(nullptr);
    if (turn.observation) {
      jt["observation_kind"] = observation_kind_name(turn.observation->kind);
      jt["observation"] = turn.observation->rendered;
      jt["observation_tokens"] = turn.observation->token_count;
    } else {
      jt["observation_kind"] = nullptr;
    }
    out << jt.dump() << "\n";
  }

  json fin;
  fin["type"] = "final";
  fin["status"] =
      trajectory.status == Trajectory::Status::Completed ? "completed" : "failed";
  fin["failure"] = trajectory.failure;
  fin["answer"] = trajectory.final_answer ? trajectory.final_answer->to_json()
                                          : nlohmann::ordered_json(nullptr);
  fin["forced"] = trajectory.forced_answer;
  fin["turns"] = trajectory.turns.size();
  fin["prompt_tokens"] = trajectory.prompt_tokens;
  fin["completion_tokens"] = trajectory.completion_tokens;
  fin["llm_calls"] = trajectory.llm_calls;
  out << fin.dump() << "\n";

  json je;
  je["type"] = "eval";
  je["eval_func"] = task.evaluator.eval_func;
  je["score"] = eval_errored ? 0.0 : eval.score;
  je["passed"] = !eval_errored && eval.passed();
  je["detail"] = eval_errored ? eval_error : eval.detail;
  je["eval_errored"] = eval_errored;
  out << je.dump() << "\n";
}

BenchSummary run_bench(const std::vector<TaskExample>& tasks, const BenchConfig& cfg,
                       const BenchDeps& deps) {
  std::filesystem::create_directories(cfg.output_dir);

  size_t count = tasks.size();
  if (cfg.limit >= 0) count = std::min(count, static_cast<size_t>(cfg.limit));

  std::vector<TaskOutcome> outcomes(count);
  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex io_mutex;

  auto worker = [&] {
    while (true) {
      size_t index = next.fetch_add(1);
      if (index >= count) return;
      const TaskExample& task = tasks[index];

      TaskOutcome outcome;
      outcome.uuid = task.uuid;
      outcome.tags = task.tags;

      try {
        Database db = Database::open_readonly(deps.db_path);
        Environment env(db, deps.store, deps.env_cfg);
        std::shared_ptr<Gateway> gateway = deps.gateway_for(task);

        Trajectory trajectory =
            run_episode(task, cfg.method, env, *gateway, deps.schemas);

        EvalResult eval;
        bool eval_errored = false;
        std::string eval_error;
        if (trajectory.status == Trajectory::Status::Failed) {
          outcome.episode_failed = true;
          eval.detail = "episode failed: " + trajectory.failure;
        } else if (trajectory.final_answer) {
          try {
            eval = evaluate(*trajectory.final_answer, task.evaluator, deps.judge,
                            task.question);
            outcome.score = eval.score;
          } catch (const Error& e) {
            eval_errored = true;
            eval_error = e.what();
            outcome.episode_failed = true;
          }
        }
        if (outcome.episode_failed) failures.fetch_add(1);

        std::string trace_path = cfg.output_dir + "/" + task.uuid + ".jsonl";
        write_trace(trace_path, task, cfg.method, trajectory, eval, eval_errored, eval_error);
      } catch (const std::exception& e) {
        outcome.episode_failed = true;
        failures.fetch_add(1);
        std::lock_guard<std::mutex> lock(io_mutex);
        std::ofstream out(cfg.output_dir + "/" + task.uuid + ".jsonl");
        json meta;
        meta["type"] = "meta";
        meta["uuid"] = task.uuid;
        meta["question"] = task.question;
        meta["method"] = to_string(cfg.method.method);
        meta["tags"] = task.tags;
        out << meta.dump() << "\n";
        json je;
        je["type"] = "eval";
        je["score"] = 0.0;
        je["passed"] = false;
        je["detail"] = std::string("bench error: ") + e.what();
        je["eval_errored"] = true;
        out << je.dump() << "\n";
      }
      outcomes[index] = std::move(outcome);
    }
  };

  int workers = std::max(1, cfg.parallel);
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; i++) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BenchSummary summary;
  summary.tasks = static_cast<int>(count);
  summary.failures = failures.load();
  summary.report = aggregate_report(outcomes);

  std::ofstream(cfg.output_dir + "/report.txt") << render_report_text(summary.report);
  std::ofstream(cfg.output_dir + "/report.json") << render_report_json(summary.report);
  return summary;
}

Report report_from_traces(const std::string& traces_dir) {
  std::vector<TaskOutcome> outcomes;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(traces_dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::StorageUnavailable, "cannot read trace " + path.string());
    TaskOutcome outcome;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::ParseError, path.string() + ": " + e.what());
      }
      std::string type = j.value("type", "");
      if (type == "meta") {
        outcome.uuid = j.value("uuid", "");
        for (const auto& tag : j.value("tags", std::vector<std::string>{})) {
          outcome.tags.push_back(tag);
        }
      } else if (type == "final") {
        outcome.episode_failed |= j.value("status", "completed") != "completed";
      } else if (type == "eval") {
        outcome.score = j.value("score", 0.0);
        outcome.episode_failed |= j.value("eval_errored", false);
      }
    }
    if (outcome.uuid.empty()) {
      raise(ErrorKind::ParseError, path.string() + ": trace has no meta line");
    }
    outcomes.push_back(std::move(outcome));
  }
  return aggregate_report(outcomes);
}

}  // namespace nsrag
