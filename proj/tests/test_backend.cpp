// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "test_support.hpp"
#include "uinav/backend.hpp"
#include "uinav/json_util.hpp"

using namespace uinav;
using namespace uinav::test;

namespace {

ChatRequest simple_request(const std::string& text) {
  ChatRequest request;
  request.model = "m1";
  ChatMessage user;
  user.role = "user";
  user.text = text;
  request.messages.push_back(std::move(user));
  return request;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("uinav_backend_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static std::atomic<int>& counter() {
    static std::atomic<int> value{0};
    return value;
  }
};

}  // namespace

TEST_CASE("scripted backend pops its queue") {
  ScriptedBackend backend({"click [0]", "press [stop]"});
  CHECK(backend.complete(simple_request("a")) == "click [0]");
  CHECK(backend.complete(simple_request("b")) == "press [stop]");
  CHECK_THROWS_AS(backend.complete(simple_request("c")), BackendError);
}

TEST_CASE("request digests are stable and image bytes are hashed") {
  ChatRequest a = simple_request("hello");
  ChatRequest b = simple_request("hello");
  CHECK(request_digest(a) == request_digest(b));

  b.messages[0].text = "other";
  CHECK(request_digest(a) != request_digest(b));

  ChatRequest with_image = simple_request("look");
  with_image.messages[0].images.push_back(
      ImagePart{"image/png", {1, 2, 3, 4}});
  std::string canon = canonical_request_json(with_image);
  CHECK(canon.find("sha256") != std::string::npos);
  CHECK(canon.find("Authorization") == std::string::npos);

  ChatRequest other_image = simple_request("look");
  other_image.messages[0].images.push_back(
      ImagePart{"image/png", {9, 9, 9, 9}});
  CHECK(request_digest(with_image) != request_digest(other_image));
}

TEST_CASE("cached backend records on miss and replays without the delegate") {
  TempDir store;
  ChatRequest request = simple_request("question");

  {
    auto scripted = std::make_shared<ScriptedBackend>(
        std::vector<std::string>{"answer"});
    CachedBackend recording(store.path, scripted);
    CHECK(recording.complete(request) == "answer");
    CHECK(recording.misses() == 1);
    // Second identical request: served from cache, no delegate pop.
    CHECK(recording.complete(request) == "answer");
    CHECK(recording.hits() == 1);
    CHECK(scripted->remaining() == 0);
  }

  CachedBackend replay(store.path);  // no delegate: offline
  CHECK(replay.complete(request) == "answer");

  ChatRequest unknown = simple_request("never seen");
  try {
    replay.complete(unknown);
    FAIL("expected cache_miss");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::cache_miss);
  }
}

TEST_CASE("http backend retries transient failures and honors auth env") {
  httplib::Server server;
  std::atomic<int> calls{0};
  std::string seen_auth;
  server.Post("/v1/chat", [&](const httplib::Request& req,
                              httplib::Response& res) {
    int call = ++calls;
    if (req.has_header("Authorization"))
      seen_auth = req.get_header_value("Authorization");
    if (call == 1) {
      res.status = 503;
      res.set_content("busy", "text/plain");
      return;
    }
    json body = json::parse(req.body);
    std::string model = body["model"];
    json reply = {
        {"choices",
         {{{"message", {{"content", "ok from " + model}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("UINAV_TEST_TOKEN", "sekret", 1);
  HttpChatBackend backend(
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat",
      "UINAV_TEST_TOKEN", RetryPolicy{3, 10}, RateLimit{2, 0});
  std::string reply = backend.complete(simple_request("ping"));
  CHECK(reply == "ok from m1");
  CHECK(backend.attempts_made() == 2);  // one failure, one success
  CHECK(seen_auth == "Bearer sekret");

  SUBCASE("non-retryable status surfaces as http_status") {
    server.Post("/bad", [&](const httplib::Request&, httplib::Response& res) {
      res.status = 404;
    });
    HttpChatBackend bad("http://127.0.0.1:" + std::to_string(port) + "/bad",
                        "", RetryPolicy{2, 5}, RateLimit{1, 0});
    try {
      bad.complete(simple_request("x"));
      FAIL("expected http_status error");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendError::Kind::http_status);
      CHECK(e.http_status() == 404);
    }
  }

  server.stop();
  server_thread.join();
}

TEST_CASE("network errors exhaust retries") {
  // Nothing listens on this port.
  HttpChatBackend backend("http://127.0.0.1:59999/v1/chat", "",
                          RetryPolicy{2, 1}, RateLimit{1, 0});
  try {
    backend.complete(simple_request("x"));
    FAIL("expected network error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::network);
  }
  CHECK(backend.attempts_made() == 2);
}

TEST_CASE("backend config files parse") {
  TempDir dir;
  write_text_file(dir.path / "b.json", R"({
    "format_version": 1,
    "kind": "cached",
    "model": "fixture-oracle",
    "store": "store",
    "delegate": {"kind": "scripted", "responses": ["hi"]}
  })");
  BackendConfig config = load_backend_config(dir.path / "b.json");
  CHECK(config.kind == "cached");
  CHECK(config.model == "fixture-oracle");
  CHECK(std::filesystem::path(config.store_dir).is_absolute());
  REQUIRE(config.delegate != nullptr);
  CHECK(config.delegate->kind == "scripted");

  BackendFactory factory(config);
  auto backend = factory.shared();
  CHECK(backend->complete(simple_request("q")) == "hi");

  SUBCASE("unknown kind is rejected") {
    write_text_file(dir.path / "bad.json",
                    R"({"format_version":1,"kind":"quantum"})");
    CHECK_THROWS_AS(load_backend_config(dir.path / "bad.json"), SchemaError);
  }

  SUBCASE("per-task scripted queues") {
    write_text_file(dir.path / "scripted.json", R"({
      "format_version": 1,
      "kind": "scripted",
      "responses_by_task": {"t1": ["a"], "t2": ["b"]}
    })");
    BackendFactory scripted(load_backend_config(dir.path / "scripted.json"));
    CHECK(scripted.for_task("t1")->complete(simple_request("")) == "a");
    CHECK(scripted.for_task("t2")->complete(simple_request("")) == "b");
  }
}
