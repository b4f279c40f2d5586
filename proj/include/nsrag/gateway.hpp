#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace nsrag {

struct GenParams {
  std::string model;
  double temperature = 0.7;
  double top_p = 0.95;
  int max_output_tokens = 2048;
};

/// One chat message; content is text plus optional base64 PNG attachments
/// (only sent when the configured model is vision-capable).
struct ChatMessage {
  enum class Role { System, User, Assistant };
  Role role = Role::User;
  std::string text;
  std::vector<std::string> image_png_base64;

  static ChatMessage system(std::string text) { return {Role::System, std::move(text), {}}; }
  static ChatMessage user(std::string text) { return {Role::User, std::move(text), {}}; }
  static ChatMessage assistant(std::string text) { return {Role::Assistant, std::move(text), {}}; }
};

struct TraceEvent {
  enum class Kind { Chat, Embed };
  Kind kind = Kind::Chat;
  std::string model;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  int retries = 0;
};

/// Wire-level access to chat-completion and embedding endpoints. Backends
/// throw Error with gateway kinds; the Gateway facade adds retries and
/// tracing on top.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string chat(const std::vector<ChatMessage>& messages, const GenParams& params) = 0;
  virtual std::vector<std::vector<float>> embed(const std::string& model,
                                                const std::vector<std::string>& texts) = 0;
};

/// OpenAI-compatible HTTP backend. base_url carries scheme, host, port and
/// an optional path prefix, e.g. "http://localhost:8000/v1".
std::unique_ptr<LlmBackend> make_http_backend(const std::string& base_url,
                                              const std::string& api_key);

/// One scripted exchange: the reply is returned when the concatenated
/// prompt text contains `expect` (empty matches anything); `error` instead
/// simulates a failure of that kind; repeat < 0 never exhausts the entry.
struct ReplayEntry {
  std::string expect;
  std::string reply;
  std::string error;  // "", or an ErrorKind name like "rate-limited"
  int repeat = 1;
};

/// Deterministic backend driven by a replay script; embeddings fall back
/// to the stand-in hash projection.
std::unique_ptr<LlmBackend> make_scripted_backend(std::vector<ReplayEntry> entries);

std::vector<ReplayEntry> load_replay_file(const std::string& path);
/// Replay files may also be an object keyed by task uuid; returns the
/// per-key scripts (used by bench --parallel).
bool load_replay_map(const std::string& path,
                     std::map<std::string, std::vector<ReplayEntry>>* out);

/// Backend for runs without any LLM: chat fails with gateway-error,
/// embeddings use the stand-in projection.
std::unique_ptr<LlmBackend> make_offline_backend();

/// Deterministic hash-projection embedding: dimension 64, L2-normalized,
/// salted by the model id so distinct collections get distinct spaces.
std::vector<float> standin_embed_text(const std::string& model, const std::string& text);
std::vector<float> standin_embed_bytes(const std::string& model, const std::string& bytes);
inline constexpr int kStandinEmbedDim = 64;

struct GatewayConfig {
  std::string model = "scripted";
  std::string embed_model = "standin";
  bool vision_capable = false;
  GenParams params;
  int max_retries = 3;
  int retry_backoff_ms = 250;  // doubled per retry; 0 in tests
};

/// Thread-safe client facade: retries transient failures (rate limits,
/// network errors) with exponential backoff and reports every call to the
/// trace sink exactly once.
class Gateway {
 public:
  using TraceSink = std::function<void(const TraceEvent&)>;

  Gateway(std::unique_ptr<LlmBackend> backend, GatewayConfig config);

  std::string chat(const std::vector<ChatMessage>& messages);
  std::string chat(const std::vector<ChatMessage>& messages, const GenParams& params);
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts);
  std::vector<std::vector<float>> embed(const std::string& model,
                                        const std::vector<std::string>& texts);

  const GatewayConfig& config() const { return config_; }
  void set_trace_sink(TraceSink sink);

 private:
  std::unique_ptr<LlmBackend> backend_;
  GatewayConfig config_;
  std::mutex trace_mutex_;
  TraceSink trace_;
};

}  // namespace nsrag
