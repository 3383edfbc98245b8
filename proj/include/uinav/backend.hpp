// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uinav/errors.hpp"

namespace uinav {

struct ImagePart {
  std::string media_type;  // e.g. "image/png"
  std::vector<unsigned char> bytes;
};

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string text;
  std::vector<ImagePart> images;
};

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<long long> seed;
  std::vector<ChatMessage> messages;
};

// Stable serialization used for cache keys and transcripts; image bytes are
// replaced by their digests so transcripts stay small and redaction-safe.
std::string canonical_request_json(const ChatRequest& request);
std::string request_digest(const ChatRequest& request);

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns the model's text reply; throws BackendError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Pops a fixed queue of responses; for tests and oracle replays.
class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(std::vector<std::string> responses);
  std::string complete(const ChatRequest& request) override;
  size_t remaining() const { return queue_.size(); }

 private:
  std::deque<std::string> queue_;
};

// Replays responses recorded under request digests. With a delegate it
// records on miss; without one a miss is an error, keeping re-runs offline.
class CachedBackend final : public Backend {
 public:
  CachedBackend(std::filesystem::path store_dir,
                std::shared_ptr<Backend> delegate = nullptr);
  std::string complete(const ChatRequest& request) override;

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  std::filesystem::path store_;
  std::shared_ptr<Backend> delegate_;
  std::mutex mutex_;
  int hits_ = 0;
  int misses_ = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  int backoff_ms = 200;
};

struct RateLimit {
  int max_concurrent = 4;
  int min_interval_ms = 0;
};

// Chat-completion style HTTP client. The auth token is read from the
// environment variable named in the config and never serialized.
class HttpChatBackend final : public Backend {
 public:
  HttpChatBackend(std::string endpoint, std::string auth_env,
                  RetryPolicy retry = {}, RateLimit rate_limit = {});
  std::string complete(const ChatRequest& request) override;

  int attempts_made() const { return attempts_.load(); }

 private:
  void acquire_slot();
  void release_slot();

  std::string endpoint_;
  std::string auth_env_;
  RetryPolicy retry_;
  RateLimit limit_;

  std::mutex limiter_mutex_;
  std::condition_variable limiter_cv_;
  int in_flight_ = 0;
  std::chrono::steady_clock::time_point last_start_{};
  std::atomic<int> attempts_{0};
};

struct BackendConfig {
  std::string kind;  // http_chat | scripted | cached
  std::string model = "scripted";
  double temperature = 0.0;
  int max_tokens = 1024;
  // http_chat
  std::string endpoint;
  std::string auth_env;
  RetryPolicy retry;
  RateLimit rate_limit;
  // scripted
  std::vector<std::string> responses;
  std::map<std::string, std::vector<std::string>> responses_by_task;
  // cached: store path (relative paths resolve against the config file),
  // plus an optional delegate description for record-on-miss.
  std::string store_dir;
  std::shared_ptr<BackendConfig> delegate;
};

BackendConfig load_backend_config(const std::filesystem::path& path);

// Builds a backend for one consumer. For scripted configs, `task_id`
// selects the per-task queue when one is configured. The http_chat backend
// is shared across callers (it owns the global rate limit).
class BackendFactory {
 public:
  explicit BackendFactory(BackendConfig config);

  std::shared_ptr<Backend> for_task(const std::string& task_id);
  std::shared_ptr<Backend> shared();  // probes and other flat consumers

  const BackendConfig& config() const { return config_; }

 private:
  std::shared_ptr<Backend> make_shared_backend();

  BackendConfig config_;
  std::shared_ptr<Backend> shared_;
  std::mutex mutex_;
};

std::string base64_encode(std::span<const unsigned char> bytes);

}  // namespace uinav
