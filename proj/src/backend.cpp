// SPDX-License-Identifier: Apache-2.0
#include "uinav/backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "uinav/digest.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

std::string canonical_request_json(const ChatRequest& request) {
  json doc;
  doc["model"] = request.model;
  doc["temperature"] = request.temperature;
  doc["max_tokens"] = request.max_tokens;
  if (request.seed) doc["seed"] = *request.seed;
  json messages = json::array();
  for (const ChatMessage& message : request.messages) {
    json m;
    m["role"] = message.role;
    m["text"] = message.text;
    if (!message.images.empty()) {
      json images = json::array();
      for (const ImagePart& image : message.images) {
        json part;
        part["media_type"] = image.media_type;
        part["sha256"] = sha256_hex(image.bytes);
        images.push_back(std::move(part));
      }
      m["images"] = std::move(images);
    }
    messages.push_back(std::move(m));
  }
  doc["messages"] = std::move(messages);
  return doc.dump();
}

std::string request_digest(const ChatRequest& request) {
  return sha256_hex(canonical_request_json(request));
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses)
    : queue_(responses.begin(), responses.end()) {}

std::string ScriptedBackend::complete(const ChatRequest&) {
  if (queue_.empty())
    throw BackendError(BackendError::Kind::empty_choice,
                       "scripted backend exhausted its response queue");
  std::string response = std::move(queue_.front());
  queue_.pop_front();
  return response;
}

CachedBackend::CachedBackend(std::filesystem::path store_dir,
                             std::shared_ptr<Backend> delegate)
    : store_(std::move(store_dir)), delegate_(std::move(delegate)) {}

std::string CachedBackend::complete(const ChatRequest& request) {
  std::string digest = request_digest(request);
  std::filesystem::path entry = store_ / (digest + ".json");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (std::filesystem::exists(entry)) {
      json doc = parse_json(read_text_file(entry), entry.filename().string());
      ++hits_;
      return require_string(doc, "response", entry.filename().string(), "");
    }
  }
  if (!delegate_)
    throw BackendError(BackendError::Kind::cache_miss,
                       "no cached response for request digest " + digest);
  std::string response = delegate_->complete(request);
  json doc;
  doc["format_version"] = 1;
  doc["digest"] = digest;
  doc["request"] = json::parse(canonical_request_json(request));
  doc["response"] = response;
  std::lock_guard<std::mutex> lock(mutex_);
  ++misses_;
  write_text_file(entry, doc.dump(2) + "\n");
  return response;
}

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string auth_env,
                                 RetryPolicy retry, RateLimit rate_limit)
    : endpoint_(std::move(endpoint)),
      auth_env_(std::move(auth_env)),
      retry_(retry),
      limit_(rate_limit) {}

void HttpChatBackend::acquire_slot() {
  std::unique_lock<std::mutex> lock(limiter_mutex_);
  limiter_cv_.wait(lock, [&] { return in_flight_ < limit_.max_concurrent; });
  ++in_flight_;
  if (limit_.min_interval_ms > 0) {
    auto now = std::chrono::steady_clock::now();
    auto earliest =
        last_start_ + std::chrono::milliseconds(limit_.min_interval_ms);
    if (now < earliest) {
      lock.unlock();
      std::this_thread::sleep_for(earliest - now);
      lock.lock();
    }
  }
  last_start_ = std::chrono::steady_clock::now();
}

void HttpChatBackend::release_slot() {
  {
    std::lock_guard<std::mutex> lock(limiter_mutex_);
    --in_flight_;
  }
  limiter_cv_.notify_one();
}

namespace {

struct ParsedEndpoint {
  std::string host_port;  // scheme://host:port
  std::string path;
};

ParsedEndpoint split_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  size_t path_start = endpoint.find(
      '/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

json wire_payload(const ChatRequest& request) {
  json doc;
  doc["model"] = request.model;
  doc["temperature"] = request.temperature;
  doc["max_tokens"] = request.max_tokens;
  if (request.seed) doc["seed"] = *request.seed;
  json messages = json::array();
  for (const ChatMessage& message : request.messages) {
    json m;
    m["role"] = message.role;
    if (message.images.empty()) {
      m["content"] = message.text;
    } else {
      json parts = json::array();
      if (!message.text.empty())
        parts.push_back({{"type", "text"}, {"text", message.text}});
      for (const ImagePart& image : message.images) {
        parts.push_back(
            {{"type", "image"},
             {"media_type", image.media_type},
             {"data", base64_encode(image.bytes)}});
      }
      m["content"] = std::move(parts);
    }
    messages.push_back(std::move(m));
  }
  doc["messages"] = std::move(messages);
  return doc;
}

std::string extract_choice_text(const json& doc) {
  if (!doc.contains("choices") || !doc["choices"].is_array() ||
      doc["choices"].empty())
    throw BackendError(BackendError::Kind::empty_choice,
                       "response has no choices");
  const json& choice = doc["choices"][0];
  if (choice.contains("message") && choice["message"].contains("content") &&
      choice["message"]["content"].is_string())
    return choice["message"]["content"].get<std::string>();
  if (choice.contains("text") && choice["text"].is_string())
    return choice["text"].get<std::string>();
  throw BackendError(BackendError::Kind::empty_choice,
                     "response choice has no text content");
}

bool retryable_status(int status) {
  return status == 429 || status >= 500;
}

}  // namespace

std::string HttpChatBackend::complete(const ChatRequest& request) {
  ParsedEndpoint endpoint = split_endpoint(endpoint_);
  std::string body = wire_payload(request).dump();

  std::optional<BackendError> last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (attempt > 1)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(retry_.backoff_ms * (attempt - 1)));
    attempts_.fetch_add(1);
    acquire_slot();
    httplib::Client client(endpoint.host_port);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!auth_env_.empty()) {
      const char* token = std::getenv(auth_env_.c_str());
      if (token != nullptr && token[0] != '\0')
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    auto result =
        client.Post(endpoint.path, headers, body, "application/json");
    release_slot();

    if (!result) {
      last_error = BackendError(BackendError::Kind::network,
                                "network error: " +
                                    httplib::to_string(result.error()));
      continue;
    }
    if (result->status != 200) {
      last_error = BackendError(
          BackendError::Kind::http_status,
          "http status " + std::to_string(result->status), result->status);
      if (retryable_status(result->status)) continue;
      throw *last_error;
    }
    json doc = json::parse(result->body, nullptr, false);
    if (doc.is_discarded())
      throw BackendError(BackendError::Kind::empty_choice,
                         "response body is not JSON");
    return extract_choice_text(doc);
  }
  throw last_error.value_or(BackendError(BackendError::Kind::network,
                                         "request failed"));
}

BackendConfig load_backend_config(const std::filesystem::path& path) {
  std::string origin = path.filename().string();
  json doc = parse_json(read_text_file(path), origin);
  check_format_version(doc, origin);

  std::function<BackendConfig(const json&, const std::string&)> parse =
      [&](const json& v, const std::string& where) -> BackendConfig {
    BackendConfig config;
    config.kind = require_string(v, "kind", origin, where);
    config.model = optional_string(v, "model", origin, where, "scripted");
    if (v.contains("temperature")) config.temperature = v["temperature"];
    if (v.contains("max_tokens")) config.max_tokens = v["max_tokens"];
    if (config.kind == "http_chat") {
      config.endpoint = require_string(v, "endpoint", origin, where);
      config.auth_env = optional_string(v, "auth_env", origin, where);
      if (v.contains("retry")) {
        const json& r = v["retry"];
        if (r.contains("max_attempts"))
          config.retry.max_attempts = r["max_attempts"];
        if (r.contains("backoff_ms")) config.retry.backoff_ms = r["backoff_ms"];
      }
      if (v.contains("rate_limit")) {
        const json& r = v["rate_limit"];
        if (r.contains("max_concurrent"))
          config.rate_limit.max_concurrent = r["max_concurrent"];
        if (r.contains("min_interval_ms"))
          config.rate_limit.min_interval_ms = r["min_interval_ms"];
      }
    } else if (config.kind == "scripted") {
      if (v.contains("responses")) {
        for (const auto& entry : v["responses"])
          config.responses.push_back(entry.get<std::string>());
      }
      if (v.contains("responses_by_task")) {
        const json& by_task = v["responses_by_task"];
        if (!by_task.is_object())
          schema_fail(origin, where + ".responses_by_task",
                      "expected an object");
        for (auto it = by_task.begin(); it != by_task.end(); ++it) {
          std::vector<std::string> queue;
          for (const auto& entry : it.value())
            queue.push_back(entry.get<std::string>());
          config.responses_by_task[it.key()] = std::move(queue);
        }
      }
    } else if (config.kind == "cached") {
      std::string store = require_string(v, "store", origin, where);
      std::filesystem::path store_path(store);
      if (store_path.is_relative())
        store_path = path.parent_path() / store_path;
      config.store_dir = store_path.string();
      if (v.contains("delegate"))
        config.delegate = std::make_shared<BackendConfig>(
            parse(v["delegate"], where + ".delegate"));
    } else {
      schema_fail(origin, where + ".kind",
                  "must be http_chat, scripted or cached");
    }
    return config;
  };
  return parse(doc, "backend");
}

BackendFactory::BackendFactory(BackendConfig config)
    : config_(std::move(config)) {}

std::shared_ptr<Backend> BackendFactory::make_shared_backend() {
  if (config_.kind == "http_chat")
    return std::make_shared<HttpChatBackend>(config_.endpoint,
                                             config_.auth_env, config_.retry,
                                             config_.rate_limit);
  if (config_.kind == "cached") {
    std::shared_ptr<Backend> delegate;
    if (config_.delegate)
      delegate = BackendFactory(*config_.delegate).shared();
    return std::make_shared<CachedBackend>(config_.store_dir, delegate);
  }
  // Flat scripted queue shared by all consumers.
  return std::make_shared<ScriptedBackend>(config_.responses);
}

std::shared_ptr<Backend> BackendFactory::shared() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!shared_) shared_ = make_shared_backend();
  return shared_;
}

std::shared_ptr<Backend> BackendFactory::for_task(const std::string& task_id) {
  if (config_.kind == "scripted") {
    auto it = config_.responses_by_task.find(task_id);
    if (it != config_.responses_by_task.end())
      return std::make_shared<ScriptedBackend>(it->second);
    return std::make_shared<ScriptedBackend>(config_.responses);
  }
  return shared();
}

std::string base64_encode(std::span<const unsigned char> bytes) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.push_back(alphabet[(v >> 6) & 63]);
    out.push_back(alphabet[v & 63]);
    i += 3;
  }
  if (i + 1 == bytes.size()) {
    unsigned v = bytes[i] << 16;
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == bytes.size()) {
    unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.push_back(alphabet[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

}  // namespace uinav
