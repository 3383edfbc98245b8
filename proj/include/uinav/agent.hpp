// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uinav/backend.hpp"
#include "uinav/environment.hpp"
#include "uinav/observation.hpp"
#include "uinav/suite.hpp"
#include "uinav/trajectory.hpp"

namespace uinav {

struct EpisodeConfig {
  ObservationMode mode = ObservationMode::a11y_full;
  int max_steps = 30;
  NoTransitionPolicy policy = NoTransitionPolicy::stay;
  bool monitors = true;
  std::string model = "scripted";
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<long long> seed;
};

struct MonitorStats {
  int total_outputs = 0;
  int format_errors = 0;
  int repeated_actions = 0;
  int total_actions = 0;

  double repetition_rate() const {
    return total_actions == 0
               ? 0.0
               : static_cast<double>(repeated_actions) / total_actions;
  }
  double format_error_rate() const {
    return total_outputs == 0
               ? 0.0
               : static_cast<double>(format_errors) / total_outputs;
  }
};

struct HistoryEntry {
  std::string line;  // canonical action, or a marker for failures
};

// Deterministic prompt for one step: system text carries the environment
// overview, the rendered action space and the navigation rules; the user
// text carries the instruction, the observation and the numbered history.
ChatRequest assemble_prompt(const Task& task, const Observation& observation,
                            const std::vector<HistoryEntry>& history,
                            const EpisodeConfig& config);

// Identifies the prompt wording so reports can cite it.
extern const char kPromptTemplateVersion[];
std::string prompt_template_hash();

struct TranscriptEntry {
  std::string request_json;  // canonical serialization, auth never included
  std::string response_text;
};

struct EpisodeResult {
  Trajectory trajectory;
  MonitorStats stats;
  std::vector<TranscriptEntry> transcript;
  std::string error;  // backend/environment failure note, empty when clean
};

// ReAct-style loop: observe -> assemble -> complete -> extract -> parse ->
// monitors -> validate -> env.step, ending on press [stop] or the step
// budget. Malformed or invalid actions record a step without transitioning.
EpisodeResult run_episode(const Task& task, DeviceAdapter& env,
                          Backend& backend, const EpisodeConfig& config);

std::string transcript_to_jsonl(const std::string& task_id,
                                const std::vector<TranscriptEntry>& entries);

}  // namespace uinav
