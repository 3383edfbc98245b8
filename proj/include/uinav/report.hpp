// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uinav/agent.hpp"
#include "uinav/probes.hpp"
#include "uinav/suite.hpp"
#include "uinav/trajectory.hpp"

namespace uinav {

// Derives monitor counters from a stored trajectory, so re-scoring needs no
// episode state: outputs = steps, format errors = unparsed steps, repeats =
// same normalized key as the previous step on an unchanged screen.
MonitorStats monitors_from_trajectory(const Trajectory& t);

struct TaskScore {
  std::string id;
  TaskCategory category = TaskCategory::user;
  bool pass = false;
  int satisfied = 0;
  int evaluator_count = 0;
  double acp_fraction = 0.0;
  int steps = 0;
  StopReason stop_reason = StopReason::step_limit;
  MonitorStats monitors;
  std::string note;  // "missing trajectory", load errors, ...
};

struct Aggregate {
  int tasks = 0;
  int passed = 0;
  double sr = 0.0;
  double acp = 0.0;
  long long repeated_actions = 0;
  long long total_actions = 0;
  long long format_errors = 0;
  long long total_outputs = 0;
  double repetition_rate = 0.0;   // pooled across episodes
  double format_error_rate = 0.0;
};

struct DimensionScores {
  std::optional<KnowledgeOutcome> knowledge;
  std::optional<CompletionOutcome> completion;
  std::optional<GroundingOutcome> grounding;
  std::optional<FocusedOutcome> focused;

  // Radar scalars; nullopt when the probe section is absent.
  std::optional<double> goal_understanding;
  std::optional<double> app_knowledge;
  std::optional<double> planning;
  std::optional<double> grounding_score;
  std::optional<double> instruction_following;  // needs focused + episodes
};

struct RunReport {
  std::string suite_name;
  std::string suite_version;
  std::string model;
  std::vector<TaskScore> tasks;
  Aggregate overall;
  Aggregate user_tasks;
  Aggregate testing_tasks;
  DimensionScores dims;
  std::string config_digest;
  std::string template_hash;
};

// Episode scoring over in-memory trajectories; tasks without an entry count
// as failed with ACP 0 and a note.
RunReport score_run(const Suite& suite,
                    const std::map<std::string, Trajectory>& trajectories);

// Loads runs/<id>/trajectories/<task>.jsonl for each suite task; unreadable
// files mark the task failed with the error noted.
RunReport score_run_dir(const Suite& suite,
                        const std::filesystem::path& run_dir);

// Re-scores stored probe transcripts under runs/<id>/probes/, filling the
// dimension scores (pure over stored artifacts).
void attach_probe_scores(RunReport& report, const Suite& suite,
                         const std::filesystem::path& run_dir);

// Round half to even at three decimals; export-level number formatting.
double round3(double value);
std::string format3(double value);

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);        // per-task rows
std::string report_to_radar_csv(const RunReport& report);  // one row

void export_report(const RunReport& report,
                   const std::filesystem::path& out_dir);

std::string config_digest(const std::string& suite_name,
                          const std::string& suite_version,
                          const std::string& backend_kind,
                          const std::string& model, double temperature,
                          int max_tokens, const EpisodeConfig& episode);

}  // namespace uinav
