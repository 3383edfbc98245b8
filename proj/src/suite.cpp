// SPDX-License-Identifier: Apache-2.0
#include "uinav/suite.hpp"

#include <set>

#include "uinav/json_util.hpp"

namespace uinav {

const char* to_string(TaskCategory c) {
  return c == TaskCategory::user ? "user" : "testing";
}

std::optional<TaskCategory> task_category_from_string(std::string_view s) {
  if (s == "user") return TaskCategory::user;
  if (s == "testing") return TaskCategory::testing;
  return std::nullopt;
}

const Task* Suite::find_task(const std::string& id) const {
  for (const Task& task : tasks)
    if (task.id == id) return &task;
  return nullptr;
}

std::shared_ptr<const Utg> Suite::utg_for(const std::string& app_id) const {
  auto it = utgs.find(app_id);
  return it == utgs.end() ? nullptr : it->second;
}

std::optional<std::filesystem::path> Suite::probe_file(
    const std::string& dimension) const {
  auto it = manifest.probe_refs.find(dimension);
  if (it == manifest.probe_refs.end()) return std::nullopt;
  return root / it->second;
}

namespace {

std::filesystem::path resolve_ref(const Suite& suite, const std::string& ref,
                                  const std::string& owner) {
  std::filesystem::path path = suite.root / ref;
  if (!std::filesystem::exists(path))
    throw DanglingRef(owner + " references missing file: " + ref);
  return path;
}

Task load_task(const Suite& suite, const std::string& ref) {
  std::filesystem::path path = resolve_ref(suite, ref, "manifest");
  std::string origin = ref;
  json doc = parse_json(read_text_file(path), origin);
  check_format_version(doc, origin);

  Task task;
  task.id = require_string(doc, "id", origin, "");
  task.app_id = require_string(doc, "app_id", origin, "");
  task.instruction = require_string(doc, "instruction", origin, "");
  auto category = task_category_from_string(
      require_string(doc, "category", origin, ""));
  if (!category) schema_fail(origin, "category", "must be user or testing");
  task.category = *category;
  task.reference_trajectory_ref =
      require_string(doc, "reference_trajectory", origin, "");

  const json& evaluators = require_field(doc, "evaluators", origin, "");
  if (!evaluators.is_array() || evaluators.empty())
    schema_fail(origin, "evaluators", "at least one evaluator is required");
  for (const auto& entry : evaluators) {
    if (!entry.is_string())
      schema_fail(origin, "evaluators", "expected file refs");
    task.evaluator_refs.push_back(entry.get<std::string>());
  }

  for (const std::string& evaluator_ref : task.evaluator_refs) {
    std::filesystem::path evaluator_path =
        resolve_ref(suite, evaluator_ref, "task " + task.id);
    task.evaluators.push_back(std::make_shared<const Evaluator>(
        load_evaluator_file(evaluator_path)));
  }

  std::filesystem::path trajectory_path =
      resolve_ref(suite, task.reference_trajectory_ref, "task " + task.id);
  task.reference = std::make_shared<const Trajectory>(
      load_trajectory(trajectory_path, *suite.screens));
  return task;
}

}  // namespace

Suite load_suite(const std::filesystem::path& root, bool require_utgs) {
  Suite suite;
  suite.root = root;
  suite.screens = std::make_shared<ScreenStore>(root);

  std::filesystem::path manifest_path = root / "manifest.json";
  if (!std::filesystem::exists(manifest_path))
    throw SchemaError("manifest.json: missing (is " + root.string() +
                      " a suite directory?)");
  std::string origin = "manifest.json";
  json doc = parse_json(read_text_file(manifest_path), origin);
  check_format_version(doc, origin);

  suite.manifest.name = require_string(doc, "name", origin, "");
  suite.manifest.version = require_string(doc, "version", origin, "");
  if (suite.manifest.version.empty())
    schema_fail(origin, "version", "must be nonempty");

  const json& apps = require_field(doc, "apps", origin, "");
  if (!apps.is_array()) schema_fail(origin, "apps", "expected an array");
  for (const auto& app : apps) {
    if (!app.is_string()) schema_fail(origin, "apps", "expected app ids");
    suite.manifest.apps.push_back(app.get<std::string>());
  }

  const json& tasks = require_field(doc, "tasks", origin, "");
  if (!tasks.is_array() || tasks.empty())
    schema_fail(origin, "tasks", "expected a nonempty array");
  for (const auto& ref : tasks) {
    if (!ref.is_string()) schema_fail(origin, "tasks", "expected file refs");
    suite.manifest.task_refs.push_back(ref.get<std::string>());
  }

  if (doc.contains("utg")) {
    const json& utg = doc["utg"];
    if (!utg.is_object()) schema_fail(origin, "utg", "expected an object");
    for (auto it = utg.begin(); it != utg.end(); ++it) {
      if (!it.value().is_string())
        schema_fail(origin, "utg." + it.key(), "expected a file ref");
      suite.manifest.utg_refs[it.key()] = it.value().get<std::string>();
    }
  }
  if (doc.contains("probes")) {
    const json& probes = doc["probes"];
    if (!probes.is_object())
      schema_fail(origin, "probes", "expected an object");
    for (auto it = probes.begin(); it != probes.end(); ++it) {
      if (!it.value().is_string())
        schema_fail(origin, "probes." + it.key(), "expected a file ref");
      suite.manifest.probe_refs[it.key()] = it.value().get<std::string>();
      resolve_ref(suite, it.value().get<std::string>(), "manifest probes");
    }
  }

  for (const auto& [app_id, ref] : suite.manifest.utg_refs) {
    std::filesystem::path path = resolve_ref(suite, ref, "manifest utg");
    auto utg = std::make_shared<const Utg>(load_utg(path));
    if (utg->app_id != app_id)
      schema_fail(ref, "app_id", "utg app_id does not match manifest key");
    // Every UTG state must resolve to a loadable screen whose fingerprint
    // matches its key.
    for (const auto& [fp, screen_ref] : utg->states) {
      auto screen = suite.screens->load(screen_ref);
      if (fingerprint(*screen) != fp)
        schema_fail(ref, "states." + fp,
                    "screen file fingerprint does not match state key");
      if (!screen->screenshot_ref.empty())
        resolve_ref(suite, screen->screenshot_ref, "screen " + screen_ref);
    }
    suite.utgs[app_id] = std::move(utg);
  }

  std::set<std::string> seen_ids;
  for (const std::string& ref : suite.manifest.task_refs) {
    Task task = load_task(suite, ref);
    if (!seen_ids.insert(task.id).second)
      throw SchemaError(ref + ": duplicate task id " + task.id);
    if (require_utgs && !suite.utgs.count(task.app_id))
      throw DanglingRef("task " + task.id + " references app " + task.app_id +
                        " without a utg entry");
    suite.tasks.push_back(std::move(task));
  }
  return suite;
}

std::vector<std::string> lint_suite(const Suite& suite) {
  std::vector<std::string> problems;
  for (const Task& task : suite.tasks) {
    Satisfaction sat = task_satisfaction(task.evaluators, *task.reference);
    if (!sat.pass)
      problems.push_back("task " + task.id + ": reference trajectory passes " +
                         std::to_string(sat.satisfied) + "/" +
                         std::to_string(sat.total) + " evaluators");

    auto utg = suite.utg_for(task.app_id);
    if (!utg) continue;
    ReplayEnv env(*utg, *suite.screens, NoTransitionPolicy::stay);
    auto screen = env.reset();
    bool replay_ok = true;
    for (size_t i = 0; i < task.reference->steps.size() && replay_ok; ++i) {
      const Step& step = task.reference->steps[i];
      if (!step.action) {
        problems.push_back("task " + task.id + ": reference step " +
                           std::to_string(i) + " has no parsed action");
        replay_ok = false;
        break;
      }
      if (fingerprint(*screen) != fingerprint(step.screen)) {
        problems.push_back("task " + task.id + ": replay diverges at step " +
                           std::to_string(i));
        replay_ok = false;
        break;
      }
      auto result = env.step(*step.action);
      screen = result.screen;
    }
    if (replay_ok &&
        fingerprint(*screen) != fingerprint(task.reference->final_screen))
      problems.push_back("task " + task.id +
                         ": replay does not reach the recorded final state");
  }
  return problems;
}

}  // namespace uinav
