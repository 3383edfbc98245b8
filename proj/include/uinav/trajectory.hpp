// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uinav/action.hpp"
#include "uinav/action_grammar.hpp"
#include "uinav/screen_store.hpp"
#include "uinav/ui_screen.hpp"

namespace uinav {

// One episode step: the screen the agent saw and what it did from there.
// Exactly one of `action` / `format_failure` is set.
struct Step {
  UIScreen screen;
  std::string screen_ref;  // suite-relative; empty for in-memory trajectories
  std::string raw_model_output;
  std::optional<Action> action;
  std::optional<FormatFailure> format_failure;
  std::optional<ValidationFailure> validation_failure;  // only with action
  std::string normalized_key;  // see action_key(); filled by episode/replay code
};

enum class StopReason { agent_stop, step_limit, environment_error };

const char* to_string(StopReason r);
std::optional<StopReason> stop_reason_from_string(std::string_view s);

struct Trajectory {
  std::string task_id;
  std::string app_id;
  std::vector<Step> steps;
  UIScreen final_screen;
  std::string final_screen_ref;
  StopReason stop_reason = StopReason::step_limit;

  // Trajectory positions: position i (0-based) denotes the pair
  // (screen_i, action taken from it); the final screen is position n.
  int end_position() const { return static_cast<int>(steps.size()); }
  const UIScreen& screen_at(int position) const {
    return position < end_position()
               ? steps[static_cast<size_t>(position)].screen
               : final_screen;
  }
};

// JSONL: header record, one step record per line, one final record.
std::string trajectory_to_jsonl(const Trajectory& t);
void save_trajectory(const Trajectory& t, const std::filesystem::path& path);

// Screen refs are resolved through `screens`; normalized keys are recomputed.
Trajectory parse_trajectory(const std::string& jsonl, const std::string& origin,
                            const ScreenStore& screens);
Trajectory load_trajectory(const std::filesystem::path& path,
                           const ScreenStore& screens);

}  // namespace uinav
