// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "test_support.hpp"
#include "uinav/agent.hpp"
#include "uinav/json_util.hpp"
#include "uinav/report.hpp"

using namespace uinav;
using namespace uinav::test;

namespace {

Task stub_task() {
  Task task;
  task.id = "t";
  task.app_id = "app";
  task.instruction = "Do the thing.";
  return task;
}

// One-screen environment: nothing ever transitions.
class StaticEnv final : public DeviceAdapter {
 public:
  explicit StaticEnv(UIScreen screen) : screen_(std::make_shared<const UIScreen>(std::move(screen))) {}

  std::shared_ptr<const UIScreen> reset() override { return screen_; }
  StepResult step(const Action&) override {
    return StepResult{screen_, "screens/static.json", false};
  }
  std::vector<unsigned char> screenshot() override { return {}; }
  std::string current_screen_ref() const override {
    return "screens/static.json";
  }

 private:
  std::shared_ptr<const UIScreen> screen_;
};

}  // namespace

TEST_CASE("assemble_prompt is deterministic with the documented shape") {
  Task task = stub_task();
  EpisodeConfig config;
  config.model = "m";
  Observation obs = build_observation(ObservationMode::a11y_full,
                                      buttons_screen(2));

  ChatRequest request = assemble_prompt(task, obs, {}, config);
  REQUIRE(request.messages.size() == 2);
  CHECK(request.messages[0].role == "system");
  CHECK(request.messages[0].text.find("press [stop]") != std::string::npos);
  CHECK(request.messages[0].text.find("Do not repeat erroneous actions") !=
        std::string::npos);
  CHECK(request.messages[1].text.find("Previous actions: (none)") !=
        std::string::npos);
  CHECK(request.messages[1].images.empty());

  ChatRequest again = assemble_prompt(task, obs, {}, config);
  CHECK(canonical_request_json(request) == canonical_request_json(again));

  SUBCASE("history is numbered and markers preserved") {
    std::vector<HistoryEntry> history = {{"click [0]"},
                                         {"(malformed output)"}};
    ChatRequest with_history = assemble_prompt(task, obs, history, config);
    CHECK(with_history.messages[1].text.find("1. click [0]") !=
          std::string::npos);
    CHECK(with_history.messages[1].text.find("2. (malformed output)") !=
          std::string::npos);
  }

  SUBCASE("annotated mode carries exactly one image part") {
    UIScreen screen = buttons_screen(1);
    Image canvas(screen.width, screen.height, 0xffffffffu);
    Observation annotated = build_observation(
        ObservationMode::annotated_image, screen, encode_png(canvas));
    ChatRequest request_with_image =
        assemble_prompt(task, annotated, {}, config);
    CHECK(request_with_image.messages[1].images.size() == 1);
  }
}

TEST_CASE("prompt template hash is stable within a build") {
  CHECK(prompt_template_hash() == prompt_template_hash());
  CHECK(prompt_template_hash().size() == 16);
}

TEST_CASE("episode loop counts outputs, actions, repeats and format errors") {
  EpisodeConfig config;
  config.max_steps = 6;

  SUBCASE("same action forever hits the step limit with max repeats") {
    StaticEnv env(buttons_screen(2));
    ScriptedBackend backend(std::vector<std::string>(
        6, "Thought: again.\nclick [0]"));
    EpisodeResult result = run_episode(stub_task(), env, backend, config);
    CHECK(result.trajectory.stop_reason == StopReason::step_limit);
    CHECK(result.stats.total_outputs == 6);
    CHECK(result.stats.total_actions == 6);
    CHECK(result.stats.repeated_actions == 5);
    CHECK(result.stats.repetition_rate() == doctest::Approx(5.0 / 6.0));
    CHECK(result.trajectory.steps.size() == 6);

    // Monitor reconstruction from the stored trajectory agrees.
    MonitorStats rebuilt = monitors_from_trajectory(result.trajectory);
    CHECK(rebuilt.repeated_actions == result.stats.repeated_actions);
    CHECK(rebuilt.total_actions == result.stats.total_actions);
    CHECK(rebuilt.format_errors == result.stats.format_errors);
  }

  SUBCASE("valid, malformed, valid, stop") {
    StaticEnv env(buttons_screen(2));
    ScriptedBackend backend({"click [0]", "no action here", "click [1]",
                             "done\npress [stop]"});
    EpisodeResult result = run_episode(stub_task(), env, backend, config);
    CHECK(result.trajectory.stop_reason == StopReason::agent_stop);
    CHECK(result.stats.total_outputs == 4);
    CHECK(result.stats.format_errors == 1);
    CHECK(result.stats.format_error_rate() == doctest::Approx(0.25));
    CHECK(result.stats.total_actions == 3);
    CHECK(result.trajectory.steps.size() == 4);
    CHECK(result.trajectory.steps[1].format_failure.has_value());
    CHECK(!result.trajectory.steps[1].action.has_value());
  }

  SUBCASE("invalid actions are recorded without transition") {
    StaticEnv env(buttons_screen(1));
    ScriptedBackend backend({"click [7]", "press [stop]"});
    EpisodeResult result = run_episode(stub_task(), env, backend, config);
    CHECK(result.trajectory.steps.size() == 2);
    REQUIRE(result.trajectory.steps[0].validation_failure.has_value());
    CHECK(result.trajectory.steps[0].validation_failure->reason ==
          ValidationErrorKind::index_out_of_range);
  }

  SUBCASE("backend failure saves a partial trajectory") {
    StaticEnv env(buttons_screen(1));
    ScriptedBackend backend({"click [0]"});  // queue exhausts on step 2
    EpisodeResult result = run_episode(stub_task(), env, backend, config);
    CHECK(result.trajectory.stop_reason == StopReason::environment_error);
    CHECK(result.trajectory.steps.size() == 1);
    CHECK(!result.error.empty());
  }

  SUBCASE("episode length never exceeds the budget") {
    StaticEnv env(buttons_screen(1));
    ScriptedBackend backend(std::vector<std::string>(40, "click [0]"));
    EpisodeConfig short_config;
    short_config.max_steps = 3;
    EpisodeResult result =
        run_episode(stub_task(), env, backend, short_config);
    CHECK(result.trajectory.steps.size() == 3);
    CHECK(result.trajectory.stop_reason == StopReason::step_limit);
  }
}

TEST_CASE("trajectories persist and reload losslessly") {
  StaticEnv env(buttons_screen(2));
  ScriptedBackend backend({"click [0]", "oops", "press [stop]"});
  EpisodeConfig config;
  EpisodeResult result = run_episode(stub_task(), env, backend, config);

  std::string jsonl = trajectory_to_jsonl(result.trajectory);
  CHECK(jsonl.find("\"format_failure\"") != std::string::npos);

  // Round-trip through a real screen store.
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "uinav_agent_traj_test";
  std::filesystem::create_directories(dir / "screens");
  write_text_file(dir / "screens/static.json",
                  save_screen(buttons_screen(2)));
  ScreenStore store(dir);
  Trajectory reloaded = parse_trajectory(jsonl, "t.jsonl", store);
  CHECK(reloaded.steps.size() == result.trajectory.steps.size());
  CHECK(reloaded.stop_reason == StopReason::agent_stop);
  CHECK(trajectory_to_jsonl(reloaded) == jsonl);
  std::filesystem::remove_all(dir);
}

TEST_CASE("transcripts carry canonical requests and never the auth header") {
  StaticEnv env(buttons_screen(1));
  ScriptedBackend backend({"press [stop]"});
  EpisodeConfig config;
  EpisodeResult result = run_episode(stub_task(), env, backend, config);
  REQUIRE(result.transcript.size() == 1);
  CHECK(result.transcript[0].response_text == "press [stop]");
  CHECK(result.transcript[0].request_json.find("Authorization") ==
        std::string::npos);
  CHECK(result.transcript[0].request_json.find("Bearer") ==
        std::string::npos);

  std::string jsonl = transcript_to_jsonl("t", result.transcript);
  CHECK(jsonl.find("\"kind\":\"transcript\"") != std::string::npos);
}
