// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uinav/environment.hpp"
#include "uinav/evaluator.hpp"
#include "uinav/screen_store.hpp"
#include "uinav/trajectory.hpp"

namespace uinav {

enum class TaskCategory { user, testing };

const char* to_string(TaskCategory c);
std::optional<TaskCategory> task_category_from_string(std::string_view s);

struct Task {
  std::string id;
  std::string app_id;
  std::string instruction;
  TaskCategory category = TaskCategory::user;
  std::string reference_trajectory_ref;
  std::vector<std::string> evaluator_refs;  // >= 1

  // Loaded and cross-validated at suite load time.
  std::vector<std::shared_ptr<const Evaluator>> evaluators;
  std::shared_ptr<const Trajectory> reference;
};

struct SuiteManifest {
  std::string name;
  std::string version;
  std::vector<std::string> apps;
  std::vector<std::string> task_refs;
  std::map<std::string, std::string> utg_refs;    // app id -> utg file
  std::map<std::string, std::string> probe_refs;  // dimension -> jsonl file
};

struct Suite {
  std::filesystem::path root;
  SuiteManifest manifest;
  std::vector<Task> tasks;
  std::map<std::string, std::shared_ptr<const Utg>> utgs;  // by app id
  std::shared_ptr<ScreenStore> screens;

  const Task* find_task(const std::string& id) const;
  std::shared_ptr<const Utg> utg_for(const std::string& app_id) const;
  std::optional<std::filesystem::path> probe_file(
      const std::string& dimension) const;
};

// Loads the whole suite: manifest, tasks, evaluators, reference
// trajectories, UTGs. Every referenced file must exist (DanglingRef) and
// parse (SchemaError); task ids must be unique; evaluator matchers are
// validated during parsing. `require_utgs` is relaxed by tooling that
// rebuilds the UTG files from the reference trajectories.
Suite load_suite(const std::filesystem::path& root, bool require_utgs = true);

// Suite lints beyond schema validation: currently reference soundness
// (every reference trajectory passes all its task's evaluators) and replay
// coverage (reference actions replay over the app's UTG from reset).
// Returns human-readable problem lines; empty means clean.
std::vector<std::string> lint_suite(const Suite& suite);

}  // namespace uinav
