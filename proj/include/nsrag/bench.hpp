#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nsrag/agent.hpp"
#include "nsrag/dataset.hpp"
#include "nsrag/report.hpp"

namespace nsrag {

struct BenchConfig {
  MethodConfig method;
  int parallel = 1;
  int limit = -1;  // task count cap, -1 means all
  std::string output_dir;
};

/// Shared read-only backends for a bench run. Episodes open their own SQL
/// session; the gateway factory lets scripted runs hand each task its own
/// replay script.
struct BenchDeps {
  std::string db_path;
  const VectorStore* store = nullptr;
  EnvironmentConfig env_cfg;
  PromptSchemas schemas;
  std::function<std::shared_ptr<Gateway>(const TaskExample&)> gateway_for;
  Gateway* judge = nullptr;
};

struct BenchSummary {
  int tasks = 0;
  int failures = 0;  // aborted episodes or evaluator errors
  Report report;
};

/// Runs every task, writes one JSON-lines trace per task uuid plus
/// report.json and report.txt into output_dir.
BenchSummary run_bench(const std::vector<TaskExample>& tasks, const BenchConfig& cfg,
                       const BenchDeps& deps);

void write_trace(const std::string& path, const TaskExample& task, const MethodConfig& cfg,
                 const Trajectory& trajectory, const EvalResult& eval, bool eval_errored,
                 const std::string& eval_error);

/// Re-aggregates the report from the trace files; reproduces the bench
/// report byte-identically.
Report report_from_traces(const std::string& traces_dir);

}  // namespace nsrag
