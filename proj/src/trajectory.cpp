// SPDX-License-Identifier: Apache-2.0
#include "uinav/trajectory.hpp"

#include <sstream>

#include "uinav/environment.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::agent_stop: return "agent_stop";
    case StopReason::step_limit: return "step_limit";
    case StopReason::environment_error: return "environment_error";
  }
  return "step_limit";
}

std::optional<StopReason> stop_reason_from_string(std::string_view s) {
  if (s == "agent_stop") return StopReason::agent_stop;
  if (s == "step_limit") return StopReason::step_limit;
  if (s == "environment_error") return StopReason::environment_error;
  return std::nullopt;
}

std::string trajectory_to_jsonl(const Trajectory& t) {
  std::ostringstream out;
  json header;
  header["format_version"] = 1;
  header["kind"] = "trajectory";
  header["task_id"] = t.task_id;
  header["app_id"] = t.app_id;
  out << header.dump() << "\n";
  for (const Step& step : t.steps) {
    json record;
    record["screen"] = step.screen_ref;
    record["raw"] = step.raw_model_output;
    if (step.action) record["action"] = render_action(*step.action);
    if (step.format_failure)
      record["format_failure"] = to_string(step.format_failure->reason);
    if (step.validation_failure)
      record["validation_failure"] = to_string(step.validation_failure->reason);
    out << record.dump() << "\n";
  }
  json final_record;
  final_record["final_screen"] = t.final_screen_ref;
  final_record["stop_reason"] = to_string(t.stop_reason);
  out << final_record.dump() << "\n";
  return out.str();
}

void save_trajectory(const Trajectory& t, const std::filesystem::path& path) {
  write_text_file(path, trajectory_to_jsonl(t));
}

Trajectory parse_trajectory(const std::string& jsonl,
                            const std::string& origin,
                            const ScreenStore& screens) {
  std::vector<json> records = parse_jsonl(jsonl, origin, "trajectory");
  if (records.empty())
    throw SchemaError(origin + ": missing final record");

  Trajectory t;
  // Header fields live on the first line; parse_jsonl already consumed it,
  // so re-read them from the raw text's first line.
  {
    std::istringstream in(jsonl);
    std::string first;
    std::getline(in, first);
    json header = parse_json(first, origin);
    t.task_id = optional_string(header, "task_id", origin, "header");
    t.app_id = optional_string(header, "app_id", origin, "header");
  }

  json final_record = records.back();
  records.pop_back();
  if (!final_record.contains("final_screen"))
    schema_fail(origin, "final record", "missing final_screen");
  t.final_screen_ref = require_string(final_record, "final_screen", origin,
                                      "final record");
  auto reason = stop_reason_from_string(
      require_string(final_record, "stop_reason", origin, "final record"));
  if (!reason) schema_fail(origin, "final record.stop_reason", "unknown value");
  t.stop_reason = *reason;
  t.final_screen = *screens.load(t.final_screen_ref);

  size_t index = 0;
  for (const json& record : records) {
    std::string path = "step[" + std::to_string(index++) + "]";
    if (record.contains("final_screen"))
      schema_fail(origin, path, "final record before last line");
    Step step;
    step.screen_ref = require_string(record, "screen", origin, path);
    step.screen = *screens.load(step.screen_ref);
    step.raw_model_output = optional_string(record, "raw", origin, path);
    bool has_action = record.contains("action");
    bool has_failure = record.contains("format_failure");
    if (has_action == has_failure)
      schema_fail(origin, path,
                  "exactly one of action / format_failure required");
    if (has_action) {
      std::string rendered = require_string(record, "action", origin, path);
      ParseResult parsed = parse_action(rendered);
      if (const auto* failure = std::get_if<FormatFailure>(&parsed))
        schema_fail(origin, path + ".action",
                    std::string("not a valid action line (") +
                        to_string(failure->reason) + ")");
      step.action = std::get<Action>(parsed);
      step.normalized_key = action_key(*step.action, step.screen);
      if (record.contains("validation_failure")) {
        std::string v =
            require_string(record, "validation_failure", origin, path);
        if (v == "index_out_of_range")
          step.validation_failure =
              ValidationFailure{ValidationErrorKind::index_out_of_range};
        else if (v == "not_editable")
          step.validation_failure =
              ValidationFailure{ValidationErrorKind::not_editable};
        else if (v == "coord_out_of_bounds")
          step.validation_failure =
              ValidationFailure{ValidationErrorKind::coord_out_of_bounds};
        else
          schema_fail(origin, path + ".validation_failure", "unknown value");
      }
    } else {
      std::string reason_text =
          require_string(record, "format_failure", origin, path);
      auto kind = format_error_kind_from_string(reason_text);
      if (!kind)
        schema_fail(origin, path + ".format_failure", "unknown value");
      step.format_failure =
          FormatFailure{step.raw_model_output, *kind};
    }
    t.steps.push_back(std::move(step));
  }

  if (t.stop_reason == StopReason::agent_stop) {
    const Action* last = nullptr;
    for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it)
      if (it->action) {
        last = &*it->action;
        break;
      }
    if (last == nullptr || !is_stop(*last))
      schema_fail(origin, "stop_reason",
                  "agent_stop requires the last parsed action to be "
                  "press [stop]");
  }
  return t;
}

Trajectory load_trajectory(const std::filesystem::path& path,
                           const ScreenStore& screens) {
  return parse_trajectory(read_text_file(path), path.filename().string(),
                          screens);
}

}  // namespace uinav
