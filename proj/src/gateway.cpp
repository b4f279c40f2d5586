#include "nsrag/gateway.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nsrag/errors.hpp"
#include "nsrag/tokenizer.hpp"

namespace nsrag {

namespace {

using json = nlohmann::json;

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void accumulate_projection(std::uint64_t seed, std::vector<float>& acc) {
  std::uint64_t state = seed;
  for (int i = 0; i < kStandinEmbedDim; i++) {
    std::uint64_t bits = splitmix64(state);
    double unit = static_cast<double>(bits >> 11) / static_cast<double>(1ULL << 53);
    acc[static_cast<size_t>(i)] += static_cast<float>(unit * 2.0 - 1.0);
  }
}

void l2_normalize(std::vector<float>& v) {
  double norm = 0;
  for (float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm == 0) return;
  for (float& x : v) x = static_cast<float>(x / norm);
}

}  // namespace

std::vector<float> standin_embed_text(const std::string& model, const std::string& text) {
  std::vector<float> acc(kStandinEmbedDim, 0.0f);
  for (const auto& token : tokenize(text, /*lowercase=*/true)) {
    accumulate_projection(fnv1a(token, fnv1a(model)), acc);
  }
  l2_normalize(acc);
  return acc;
}

std::vector<float> standin_embed_bytes(const std::string& model, const std::string& bytes) {
  std::vector<float> acc(kStandinEmbedDim, 0.0f);
  accumulate_projection(fnv1a(bytes, fnv1a(model)), acc);
  l2_normalize(acc);
  return acc;
}

// ---------------------------------------------------------------------------
// HTTP backend
// ---------------------------------------------------------------------------

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl parse_base_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    raise(ErrorKind::ConfigError, "base_url must include a scheme: " + base_url);
  }
  auto path_start = base_url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.origin = base_url;
  } else {
    out.origin = base_url.substr(0, path_start);
    out.prefix = base_url.substr(path_start);
  }
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

class HttpBackend : public LlmBackend {
 public:
  HttpBackend(std::string base_url, std::string api_key)
      : url_(parse_base_url(base_url)), api_key_(std::move(api_key)) {}

  std::string chat(const std::vector<ChatMessage>& messages, const GenParams& params) override {
    json body;
    body["model"] = params.model;
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    body["max_tokens"] = params.max_output_tokens;
    body["messages"] = json::array();
    for (const auto& m : messages) {
      json jm;
      jm["role"] = m.role == ChatMessage::Role::System
                       ? "system"
                       : m.role == ChatMessage::Role::User ? "user" : "assistant";
      if (m.image_png_base64.empty()) {
        jm["content"] = m.text;
      } else {
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", m.text}});
        for (const auto& img : m.image_png_base64) {
          parts.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:image/png;base64," + img}}}});
        }
        jm["content"] = parts;
      }
      body["messages"].push_back(std::move(jm));
    }
    json reply = post("/chat/completions", body);
    if (!reply.contains("choices") || reply["choices"].empty()) {
      raise(ErrorKind::GatewayError, "completion response carries no choices");
    }
    const json& msg = reply["choices"][0]["message"];
    return msg.value("content", std::string());
  }

  std::vector<std::vector<float>> embed(const std::string& model,
                                        const std::vector<std::string>& texts) override {
    json body;
    body["model"] = model;
    body["input"] = texts;
    json reply = post("/embeddings", body);
    if (!reply.contains("data")) raise(ErrorKind::GatewayError, "embedding response has no data");
    std::vector<std::vector<float>> out(texts.size());
    for (const auto& item : reply["data"]) {
      size_t index = item.value("index", out.size());
      if (index >= out.size()) raise(ErrorKind::GatewayError, "embedding index out of range");
      out[index] = item["embedding"].get<std::vector<float>>();
    }
    return out;
  }

 private:
  json post(const std::string& endpoint, const json& body) {
    if (api_key_.empty()) {
      raise(ErrorKind::AuthError, "no API key configured for " + url_.origin);
    }
    httplib::Client client(url_.origin);
    client.set_connection_timeout(30);
    client.set_read_timeout(600);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(url_.prefix + endpoint, headers, body.dump(), "application/json");
    if (!res) {
      raise(ErrorKind::NetworkError, "request to " + url_.origin + endpoint + " failed: " +
                                         httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
      raise(ErrorKind::AuthError, "endpoint rejected credentials (" +
                                      std::to_string(res->status) + "): " + res->body);
    }
    if (res->status == 429) {
      raise(ErrorKind::RateLimited, "endpoint rate limited the request: " + res->body);
    }
    if (res->status == 400 && (res->body.find("context_length") != std::string::npos ||
                               res->body.find("maximum context") != std::string::npos)) {
      raise(ErrorKind::ContextOverflow, res->body);
    }
    if (res->status >= 500) {
      raise(ErrorKind::NetworkError,
            "endpoint error " + std::to_string(res->status) + ": " + res->body);
    }
    if (res->status != 200) {
      raise(ErrorKind::GatewayError,
            "endpoint error " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      raise(ErrorKind::GatewayError, std::string("invalid JSON from endpoint: ") + e.what());
    }
  }

  ParsedUrl url_;
  std::string api_key_;
};

// ---------------------------------------------------------------------------
// Scripted + offline backends
// ---------------------------------------------------------------------------

class ScriptedBackend : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<ReplayEntry> entries) : entries_(std::move(entries)) {}

  std::string chat(const std::vector<ChatMessage>& messages, const GenParams&) override {
    std::lock_guard<std::mutex> lock(mutex_);
    if (next_ >= entries_.size()) {
      raise(ErrorKind::ScriptedMismatch, "replay script exhausted after " +
                                             std::to_string(next_) + " chat calls");
    }
    ReplayEntry& entry = entries_[next_];
    if (entry.repeat > 0 && --entry.repeat == 0) {
      next_++;
    }
    if (!entry.expect.empty()) {
      std::string prompt;
      for (const auto& m : messages) {
        prompt += m.text;
        prompt += '\n';
      }
      if (prompt.find(entry.expect) == std::string::npos) {
        raise(ErrorKind::ScriptedMismatch,
              "prompt does not contain the expected substring \"" + entry.expect + "\"");
      }
    }
    if (!entry.error.empty()) {
      ErrorKind kind = ErrorKind::GatewayError;
      if (entry.error == "rate-limited") kind = ErrorKind::RateLimited;
      else if (entry.error == "network-error") kind = ErrorKind::NetworkError;
      else if (entry.error == "auth-error") kind = ErrorKind::AuthError;
      else if (entry.error == "context-overflow") kind = ErrorKind::ContextOverflow;
      raise(kind, "scripted failure");
    }
    return entry.reply;
  }

  std::vector<std::vector<float>> embed(const std::string& model,
                                        const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(standin_embed_text(model, t));
    return out;
  }

 private:
  std::mutex mutex_;
  std::vector<ReplayEntry> entries_;
  size_t next_ = 0;
};

class OfflineBackend : public LlmBackend {
 public:
  std::string chat(const std::vector<ChatMessage>&, const GenParams&) override {
    raise(ErrorKind::GatewayError, "no LLM endpoint configured");
  }
  std::vector<std::vector<float>> embed(const std::string& model,
                                        const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(standin_embed_text(model, t));
    return out;
  }
};

std::vector<ReplayEntry> parse_replay_entries(const json& j, const std::string& where) {
  if (!j.is_array()) raise(ErrorKind::ParseError, where + ": replay script must be a JSON array");
  std::vector<ReplayEntry> entries;
  for (const auto& item : j) {
    ReplayEntry entry;
    entry.expect = item.value("expect", std::string());
    entry.reply = item.value("reply", std::string());
    entry.error = item.value("error", std::string());
    entry.repeat = item.value("repeat", 1);
    entries.push_back(std::move(entry));
  }
  return entries;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot read replay file " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, path + ": " + e.what());
  }
}

}  // namespace

std::unique_ptr<LlmBackend> make_http_backend(const std::string& base_url,
                                              const std::string& api_key) {
  return std::make_unique<HttpBackend>(base_url, api_key);
}

std::unique_ptr<LlmBackend> make_scripted_backend(std::vector<ReplayEntry> entries) {
  return std::make_unique<ScriptedBackend>(std::move(entries));
}

std::unique_ptr<LlmBackend> make_offline_backend() { return std::make_unique<OfflineBackend>(); }

std::vector<ReplayEntry> load_replay_file(const std::string& path) {
  return parse_replay_entries(read_json_file(path), path);
}

bool load_replay_map(const std::string& path,
                     std::map<std::string, std::vector<ReplayEntry>>* out) {
  json j = read_json_file(path);
  if (!j.is_object()) return false;
  for (auto it = j.begin(); it != j.end(); ++it) {
    (*out)[it.key()] = parse_replay_entries(it.value(), path + "#" + it.key());
  }
  return true;
}

// ---------------------------------------------------------------------------
// Gateway facade
// ---------------------------------------------------------------------------

Gateway::Gateway(std::unique_ptr<LlmBackend> backend, GatewayConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {}

void Gateway::set_trace_sink(TraceSink sink) {
  std::lock_guard<std::mutex> lock(trace_mutex_);
  trace_ = std::move(sink);
}

std::string Gateway::chat(const std::vector<ChatMessage>& messages) {
  return chat(messages, config_.params);
}

std::string Gateway::chat(const std::vector<ChatMessage>& messages, const GenParams& params) {
  for (const auto& m : messages) {
    if (!m.image_png_base64.empty() && !config_.vision_capable) {
      raise(ErrorKind::GatewayError,
            "image content sent to a model that is not vision-capable");
    }
  }
  GenParams effective = params;
  if (effective.model.empty()) effective.model = config_.model;

  int retries = 0;
  while (true) {
    try {
      std::string completion = backend_->chat(messages, effective);
      TraceEvent event;
      event.kind = TraceEvent::Kind::Chat;
      event.model = effective.model;
      for (const auto& m : messages) {
        event.prompt_tokens += static_cast<std::int64_t>(count_tokens(m.text));
      }
      event.completion_tokens = static_cast<std::int64_t>(count_tokens(completion));
      event.retries = retries;
      {
        std::lock_guard<std::mutex> lock(trace_mutex_);
        if (trace_) trace_(event);
      }
      return completion;
    } catch (const Error& e) {
      bool transient =
          e.kind() == ErrorKind::RateLimited || e.kind() == ErrorKind::NetworkError;
      if (!transient || retries >= config_.max_retries) throw;
      if (config_.retry_backoff_ms > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config_.retry_backoff_ms << retries));
      }
      retries++;
    }
  }
}

std::vector<std::vector<float>> Gateway::embed(const std::vector<std::string>& texts) {
  return embed(config_.embed_model, texts);
}

std::vector<std::vector<float>> Gateway::embed(const std::string& model,
                                               const std::vector<std::string>& texts) {
  int retries = 0;
  while (true) {
    try {
      auto vectors = backend_->embed(model, texts);
      TraceEvent event;
      event.kind = TraceEvent::Kind::Embed;
      event.model = model;
      for (const auto& t : texts) {
        event.prompt_tokens += static_cast<std::int64_t>(count_tokens(t));
      }
      event.retries = retries;
      {
        std::lock_guard<std::mutex> lock(trace_mutex_);
        if (trace_) trace_(event);
      }
      return vectors;
    } catch (const Error& e) {
      bool transient =
          e.kind() == ErrorKind::RateLimited || e.kind() == ErrorKind::NetworkError;
      if (!transient || retries >= config_.max_retries) throw;
      if (config_.retry_backoff_ms > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config_.retry_backoff_ms << retries));
      }
      retries++;
    }
  }
}

}  // namespace nsrag
