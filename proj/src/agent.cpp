// SPDX-License-Identifier: Apache-2.0
#include "uinav/agent.hpp"

#include <sstream>

#include "uinav/digest.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

const char kPromptTemplateVersion[] = "react-v1";

namespace {

const char kSystemPreamble[] =
    "You are an agent operating a mobile app through its user interface.\n"
    "Each turn you receive the task goal, an observation of the current "
    "screen, and the actions you have already performed. Interactable "
    "elements in text observations are tagged with indexes like [3]; "
    "annotated screenshots mark the same indexes at element centers.\n";

const char kSystemRules[] =
    "Navigation rules:\n"
    "- Think step by step about the current screen, then act.\n"
    "- Do not repeat erroneous actions.\n"
    "- Issue press [stop] once the goal is accomplished.\n"
    "- The last line of your reply must be exactly one action in the "
    "format above, with no surrounding quotes or commentary.\n";

std::string action_space_text() {
  std::string out = "Available actions, one per line:\n";
  for (const ActionSpaceRow& row : action_space_rows()) {
    out += row.usage;
    out += " : ";
    out += row.description;
    out += '\n';
  }
  return out;
}

std::string system_text() {
  return std::string(kSystemPreamble) + "\n" + action_space_text() + "\n" +
         kSystemRules;
}

std::string history_text(const std::vector<HistoryEntry>& history) {
  if (history.empty()) return "Previous actions: (none)\n";
  std::string out = "Previous actions:\n";
  for (size_t i = 0; i < history.size(); ++i)
    out += std::to_string(i + 1) + ". " + history[i].line + "\n";
  return out;
}

}  // namespace

ChatRequest assemble_prompt(const Task& task, const Observation& observation,
                            const std::vector<HistoryEntry>& history,
                            const EpisodeConfig& config) {
  ChatRequest request;
  request.model = config.model;
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.seed = config.seed;

  ChatMessage system;
  system.role = "system";
  system.text = system_text();
  request.messages.push_back(std::move(system));

  ChatMessage user;
  user.role = "user";
  std::string body = "Task: " + task.instruction + "\n\n";
  switch (observation.mode) {
    case ObservationMode::a11y_full:
    case ObservationMode::a11y_simplified:
      body += "Current screen:\n" + observation.text + "\n\n";
      break;
    case ObservationMode::image:
      body += "Current screen: see the attached screenshot.\n\n";
      break;
    case ObservationMode::annotated_image:
      body +=
          "Current screen: see the attached screenshot; numbered marks "
          "identify interactable elements.\n\n";
      break;
  }
  body += history_text(history);
  user.text = std::move(body);
  if (!observation.image_png.empty())
    user.images.push_back(ImagePart{"image/png", observation.image_png});
  request.messages.push_back(std::move(user));
  return request;
}

std::string prompt_template_hash() {
  std::string material = std::string(kPromptTemplateVersion) + "\n" +
                         system_text() + "\nTask: \nPrevious actions: (none)";
  return sha256_hex(material).substr(0, 16);
}

EpisodeResult run_episode(const Task& task, DeviceAdapter& env,
                          Backend& backend, const EpisodeConfig& config) {
  EpisodeResult result;
  Trajectory& trajectory = result.trajectory;
  trajectory.task_id = task.id;
  trajectory.app_id = task.app_id;
  trajectory.stop_reason = StopReason::step_limit;

  auto screen = env.reset();
  std::string screen_ref = env.current_screen_ref();
  std::vector<HistoryEntry> history;

  std::string previous_key;
  std::string previous_fingerprint;
  bool have_previous = false;

  for (int step_index = 0; step_index < config.max_steps; ++step_index) {
    Observation observation;
    try {
      std::vector<unsigned char> shot;
      if (config.mode == ObservationMode::image ||
          config.mode == ObservationMode::annotated_image)
        shot = env.screenshot();
      observation = build_observation(config.mode, *screen, shot);
    } catch (const HarnessError& e) {
      result.error = e.what();
      trajectory.stop_reason = StopReason::environment_error;
      break;
    }

    ChatRequest request =
        assemble_prompt(task, observation, history, config);
    std::string response;
    try {
      response = backend.complete(request);
    } catch (const BackendError& e) {
      result.error = e.what();
      trajectory.stop_reason = StopReason::environment_error;
      break;
    }
    result.transcript.push_back(
        TranscriptEntry{canonical_request_json(request), response});
    ++result.stats.total_outputs;

    Step step;
    step.screen = *screen;
    step.screen_ref = screen_ref;
    step.raw_model_output = response;

    auto extracted = extract_action(response);
    std::optional<Action> action;
    if (const auto* failure = std::get_if<FormatFailure>(&extracted)) {
      step.format_failure = *failure;
    } else {
      ParseResult parsed =
          parse_action(std::get<ExtractedAction>(extracted).action_line);
      if (const auto* failure = std::get_if<FormatFailure>(&parsed))
        step.format_failure = *failure;
      else
        action = std::get<Action>(parsed);
    }

    if (!action) {
      ++result.stats.format_errors;
      history.push_back(HistoryEntry{"(malformed output)"});
      have_previous = false;
      trajectory.steps.push_back(std::move(step));
      continue;
    }

    step.action = action;
    step.normalized_key = action_key(*action, *screen);
    ++result.stats.total_actions;

    std::string current_fingerprint = fingerprint(*screen);
    if (have_previous && step.normalized_key == previous_key &&
        current_fingerprint == previous_fingerprint)
      ++result.stats.repeated_actions;
    previous_key = step.normalized_key;
    previous_fingerprint = current_fingerprint;
    have_previous = true;

    if (is_stop(*action)) {
      history.push_back(HistoryEntry{render_action(*action)});
      trajectory.steps.push_back(std::move(step));
      trajectory.stop_reason = StopReason::agent_stop;
      break;
    }

    if (auto invalid = validate(*action, *screen)) {
      step.validation_failure = *invalid;
      history.push_back(HistoryEntry{render_action(*action) + " (invalid: " +
                                     to_string(invalid->reason) + ")"});
      trajectory.steps.push_back(std::move(step));
      continue;
    }

    history.push_back(HistoryEntry{render_action(*action)});
    trajectory.steps.push_back(std::move(step));
    try {
      auto outcome = env.step(*action);
      screen = outcome.screen;
      screen_ref = outcome.screen_ref;
    } catch (const HarnessError& e) {
      result.error = e.what();
      trajectory.stop_reason = StopReason::environment_error;
      break;
    }
  }

  trajectory.final_screen = *screen;
  trajectory.final_screen_ref = screen_ref;
  return result;
}

std::string transcript_to_jsonl(const std::string& task_id,
                                const std::vector<TranscriptEntry>& entries) {
  std::ostringstream out;
  json header;
  header["format_version"] = 1;
  header["kind"] = "transcript";
  header["task_id"] = task_id;
  out << header.dump() << "\n";
  for (const TranscriptEntry& entry : entries) {
    json record;
    record["request"] = json::parse(entry.request_json);
    record["response"] = entry.response_text;
    out << record.dump() << "\n";
  }
  return out.str();
}

}  // namespace uinav
