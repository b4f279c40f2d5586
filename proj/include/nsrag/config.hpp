#pragma once

#include <functional>
#include <memory>
#include <string>

#include "nsrag/dataset.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/methods.hpp"

namespace nsrag {

/// Everything the CLI wires together. Precedence: flags over config file
/// over defaults; the API key comes from the environment only.
struct RunConfig {
  std::string store_dir = "store";

  std::string gateway_mode = "offline";  // offline | http | replay
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  std::string embed_model;  // empty: deterministic stand-in embeddings
  bool vision = false;
  std::string api_key_env = "NSRAG_API_KEY";
  std::string replay_path;
  double temperature = 0.7;
  double top_p = 0.95;
  int max_output_tokens = 2048;

  MethodConfig method_cfg;
  int sql_row_cap = 50;

  std::string db_path() const { return store_dir + "/ai_research.sqlite"; }
  std::string vectors_path() const { return store_dir + "/vectorstore.json"; }
  std::string rasters_dir() const { return store_dir + "/rasters"; }
};

/// key = value lines, '#' comments. Unknown keys are config errors.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Builds the gateway for the configured mode. Replay-map files return one
/// scripted gateway per task uuid via make_task_gateway_factory instead.
std::shared_ptr<Gateway> make_gateway(const RunConfig& cfg);

std::function<std::shared_ptr<Gateway>(const TaskExample&)> make_task_gateway_factory(
    const RunConfig& cfg);

}  // namespace nsrag
