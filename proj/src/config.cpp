#include "nsrag/config.hpp"

#include <cstdlib>
#include <fstream>

#include "nsrag/dataset.hpp"
#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

GatewayConfig gateway_config(const RunConfig& cfg) {
  GatewayConfig gc;
  gc.model = cfg.model;
  gc.embed_model = cfg.embed_model.empty() ? "standin" : cfg.embed_model;
  gc.vision_capable = cfg.vision;
  gc.params.model = cfg.model;
  gc.params.temperature = cfg.temperature;
  gc.params.top_p = cfg.top_p;
  gc.params.max_output_tokens = cfg.max_output_tokens;
  return gc;
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ConfigError, "cannot read config file " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      raise(ErrorKind::ConfigError,
            path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    auto as_int = [&](const std::string& v) {
      try {
        return std::stoi(v);
      } catch (...) {
        raise(ErrorKind::ConfigError,
              path + ":" + std::to_string(lineno) + ": '" + key + "' needs an integer");
      }
    };
    if (key == "store") cfg.store_dir = value;
    else if (key == "gateway") cfg.gateway_mode = value;
    else if (key == "base_url") cfg.base_url = value;
    else if (key == "model") cfg.model = value;
    else if (key == "embed_model") cfg.embed_model = value;
    else if (key == "vision") cfg.vision = value == "true" || value == "1";
    else if (key == "api_key_env") cfg.api_key_env = value;
    else if (key == "replay") cfg.replay_path = value;
    else if (key == "temperature") cfg.temperature = std::stod(value);
    else if (key == "top_p") cfg.top_p = std::stod(value);
    else if (key == "max_output_tokens") cfg.max_output_tokens = as_int(value);
    else if (key == "method") {
      auto m = method_from_string(value);
      if (!m) raise(ErrorKind::ConfigError, "unknown method '" + value + "'");
      cfg.method_cfg.method = *m;
    } else if (key == "action_format") {
      auto f = action_format_from_string(value);
      if (!f) raise(ErrorKind::ConfigError, "unknown action format '" + value + "'");
      cfg.method_cfg.action_format = *f;
    } else if (key == "observation_format") {
      auto f = observation_format_from_string(value);
      if (!f) raise(ErrorKind::ConfigError, "unknown observation format '" + value + "'");
      cfg.method_cfg.observation_format = *f;
    } else if (key == "max_turns") cfg.method_cfg.max_turns = as_int(value);
    else if (key == "per_turn_token_budget") cfg.method_cfg.per_turn_token_budget = as_int(value);
    else if (key == "classic_top_k") cfg.method_cfg.classic_top_k = as_int(value);
    else if (key == "sql_row_cap") cfg.sql_row_cap = as_int(value);
    else {
      raise(ErrorKind::ConfigError,
            path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
}

std::shared_ptr<Gateway> make_gateway(const RunConfig& cfg) {
  GatewayConfig gc = gateway_config(cfg);
  if (cfg.gateway_mode == "offline") {
    return std::make_shared<Gateway>(make_offline_backend(), gc);
  }
  if (cfg.gateway_mode == "replay") {
    if (cfg.replay_path.empty()) {
      raise(ErrorKind::ConfigError, "gateway mode 'replay' needs a replay file (--replay)");
    }
    std::map<std::string, std::vector<ReplayEntry>> map;
    if (load_replay_map(cfg.replay_path, &map)) {
      raise(ErrorKind::ConfigError,
            "replay file is keyed by task uuid; it can only drive `bench`");
    }
    return std::make_shared<Gateway>(make_scripted_backend(load_replay_file(cfg.replay_path)),
                                     gc);
  }
  if (cfg.gateway_mode == "http") {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    return std::make_shared<Gateway>(make_http_backend(cfg.base_url, key ? key : ""), gc);
  }
  raise(ErrorKind::ConfigError, "unknown gateway mode '" + cfg.gateway_mode + "'");
}

std::function<std::shared_ptr<Gateway>(const TaskExample&)> make_task_gateway_factory(
    const RunConfig& cfg) {
  GatewayConfig gc = gateway_config(cfg);
  if (cfg.gateway_mode == "replay") {
    auto map = std::make_shared<std::map<std::string, std::vector<ReplayEntry>>>();
    if (load_replay_map(cfg.replay_path, map.get())) {
      return [map, gc](const TaskExample& task) {
        auto it = map->find(task.uuid);
        std::vector<ReplayEntry> entries;
        if (it != map->end()) entries = it->second;
        return std::make_shared<Gateway>(make_scripted_backend(std::move(entries)), gc);
      };
    }
  }
  std::shared_ptr<Gateway> shared = make_gateway(cfg);
  return [shared](const TaskExample&) { return shared; };
}

}  // namespace nsrag
