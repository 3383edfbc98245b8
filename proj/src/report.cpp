// SPDX-License-Identifier: Apache-2.0
#include "uinav/report.hpp"

#include <cfenv>
#include <cmath>
#include <cstdio>

#include "uinav/digest.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

MonitorStats monitors_from_trajectory(const Trajectory& t) {
  MonitorStats stats;
  std::string previous_key;
  std::string previous_fp;
  bool have_previous = false;
  for (const Step& step : t.steps) {
    ++stats.total_outputs;
    if (!step.action) {
      ++stats.format_errors;
      have_previous = false;
      continue;
    }
    ++stats.total_actions;
    std::string fp = fingerprint(step.screen);
    std::string key = step.normalized_key.empty()
                          ? action_key(*step.action, step.screen)
                          : step.normalized_key;
    if (have_previous && key == previous_key && fp == previous_fp)
      ++stats.repeated_actions;
    previous_key = key;
    previous_fp = fp;
    have_previous = true;
  }
  return stats;
}

namespace {

void accumulate(Aggregate& aggregate, const TaskScore& score) {
  ++aggregate.tasks;
  if (score.pass) ++aggregate.passed;
  aggregate.acp += score.acp_fraction;
  aggregate.repeated_actions += score.monitors.repeated_actions;
  aggregate.total_actions += score.monitors.total_actions;
  aggregate.format_errors += score.monitors.format_errors;
  aggregate.total_outputs += score.monitors.total_outputs;
}

void finalize(Aggregate& aggregate) {
  if (aggregate.tasks > 0) {
    aggregate.sr = static_cast<double>(aggregate.passed) / aggregate.tasks;
    aggregate.acp /= aggregate.tasks;
  }
  if (aggregate.total_actions > 0)
    aggregate.repetition_rate =
        static_cast<double>(aggregate.repeated_actions) /
        aggregate.total_actions;
  if (aggregate.total_outputs > 0)
    aggregate.format_error_rate =
        static_cast<double>(aggregate.format_errors) / aggregate.total_outputs;
}

TaskScore score_task(const Task& task, const Trajectory* trajectory,
                     const std::string& note) {
  TaskScore score;
  score.id = task.id;
  score.category = task.category;
  score.evaluator_count = static_cast<int>(task.evaluators.size());
  score.note = note;
  if (trajectory == nullptr) return score;  // failed, ACP 0

  Satisfaction sat = task_satisfaction(task.evaluators, *trajectory);
  score.pass = sat.pass;
  score.satisfied = sat.satisfied;
  score.acp_fraction = sat.fraction();
  score.steps = static_cast<int>(trajectory->steps.size());
  score.stop_reason = trajectory->stop_reason;
  score.monitors = monitors_from_trajectory(*trajectory);
  return score;
}

}  // namespace

RunReport score_run(const Suite& suite,
                    const std::map<std::string, Trajectory>& trajectories) {
  RunReport report;
  report.suite_name = suite.manifest.name;
  report.suite_version = suite.manifest.version;
  report.template_hash = prompt_template_hash();
  for (const Task& task : suite.tasks) {
    auto it = trajectories.find(task.id);
    TaskScore score =
        it == trajectories.end()
            ? score_task(task, nullptr, "missing trajectory")
            : score_task(task, &it->second, "");
    accumulate(report.overall, score);
    accumulate(task.category == TaskCategory::user ? report.user_tasks
                                                   : report.testing_tasks,
               score);
    report.tasks.push_back(std::move(score));
  }
  finalize(report.overall);
  finalize(report.user_tasks);
  finalize(report.testing_tasks);
  return report;
}

RunReport score_run_dir(const Suite& suite,
                        const std::filesystem::path& run_dir) {
  std::map<std::string, Trajectory> trajectories;
  std::map<std::string, std::string> notes;
  for (const Task& task : suite.tasks) {
    std::filesystem::path path =
        run_dir / "trajectories" / (task.id + ".jsonl");
    if (!std::filesystem::exists(path)) continue;
    try {
      trajectories.emplace(task.id, load_trajectory(path, *suite.screens));
    } catch (const HarnessError& e) {
      notes[task.id] = e.what();
    }
  }
  RunReport report = score_run(suite, trajectories);
  for (TaskScore& score : report.tasks) {
    auto it = notes.find(score.id);
    if (it != notes.end()) score.note = "unreadable trajectory: " + it->second;
  }
  return report;
}

void attach_probe_scores(RunReport& report, const Suite& suite,
                         const std::filesystem::path& run_dir) {
  std::filesystem::path probes_dir = run_dir / "probes";
  auto records_path = [&](const char* kind) {
    return probes_dir / (std::string(kind) + ".jsonl");
  };

  if (auto items_path = suite.probe_file("knowledge");
      items_path && std::filesystem::exists(records_path("knowledge"))) {
    auto items = load_knowledge_items(*items_path);
    auto records =
        parse_probe_records(read_text_file(records_path("knowledge")),
                            "knowledge.jsonl", "knowledge");
    if (records.size() == items.size()) {
      report.dims.knowledge = score_knowledge(items, records);
      report.dims.goal_understanding = report.dims.knowledge->goal_repaired;
      report.dims.app_knowledge = report.dims.knowledge->app_repaired;
    }
  }
  if (auto items_path = suite.probe_file("completion");
      items_path && std::filesystem::exists(records_path("completion"))) {
    auto items = load_completion_items(*items_path);
    auto records =
        parse_probe_records(read_text_file(records_path("completion")),
                            "completion.jsonl", "completion");
    if (records.size() == items.size()) {
      report.dims.completion = score_completion(items, records);
      report.dims.planning = report.dims.completion->overall;
    }
  }
  if (auto items_path = suite.probe_file("grounding");
      items_path && std::filesystem::exists(records_path("grounding"))) {
    auto items = load_grounding_items(*items_path, *suite.screens);
    auto records =
        parse_probe_records(read_text_file(records_path("grounding")),
                            "grounding.jsonl", "grounding");
    if (records.size() == items.size()) {
      report.dims.grounding = score_grounding(items, records, *suite.screens,
                                              ObservationMode::a11y_simplified);
      report.dims.grounding_score = report.dims.grounding->accuracy_repaired;
    }
  }
  if (auto items_path = suite.probe_file("focused");
      items_path && std::filesystem::exists(records_path("focused"))) {
    auto items = load_focused_items(*items_path);
    auto records = parse_probe_records(read_text_file(records_path("focused")),
                                       "focused.jsonl", "focused");
    if (records.size() == items.size()) {
      report.dims.focused = score_focused(items, records);
      report.dims.instruction_following =
          1.0 - (report.dims.focused->violation_rate +
                 report.overall.format_error_rate) /
                    2.0;
    }
  }
}

double round3(double value) {
  // nearbyint honours the default round-to-nearest-even mode.
  return std::nearbyint(value * 1000.0) / 1000.0;
}

std::string format3(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", round3(value));
  return buffer;
}

namespace {

json aggregate_to_json(const Aggregate& aggregate) {
  json v;
  v["tasks"] = aggregate.tasks;
  v["passed"] = aggregate.passed;
  v["sr"] = round3(aggregate.sr);
  v["acp"] = round3(aggregate.acp);
  v["repeated_actions"] = aggregate.repeated_actions;
  v["total_actions"] = aggregate.total_actions;
  v["format_errors"] = aggregate.format_errors;
  v["total_outputs"] = aggregate.total_outputs;
  v["repetition_rate"] = round3(aggregate.repetition_rate);
  v["format_error_rate"] = round3(aggregate.format_error_rate);
  return v;
}

std::string csv_quote(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["format_version"] = 1;
  doc["suite"] = {{"name", report.suite_name},
                  {"version", report.suite_version}};
  doc["model"] = report.model;
  doc["config_digest"] = report.config_digest;
  doc["template_hash"] = report.template_hash;

  json tasks = json::array();
  for (const TaskScore& score : report.tasks) {
    json v;
    v["id"] = score.id;
    v["category"] = to_string(score.category);
    v["pass"] = score.pass;
    v["satisfied"] = score.satisfied;
    v["evaluators"] = score.evaluator_count;
    v["acp_fraction"] = round3(score.acp_fraction);
    v["steps"] = score.steps;
    v["stop_reason"] = to_string(score.stop_reason);
    v["repeated_actions"] = score.monitors.repeated_actions;
    v["total_actions"] = score.monitors.total_actions;
    v["format_errors"] = score.monitors.format_errors;
    v["total_outputs"] = score.monitors.total_outputs;
    if (!score.note.empty()) v["note"] = score.note;
    tasks.push_back(std::move(v));
  }
  doc["tasks"] = std::move(tasks);
  doc["overall"] = aggregate_to_json(report.overall);
  doc["user_tasks"] = aggregate_to_json(report.user_tasks);
  doc["testing_tasks"] = aggregate_to_json(report.testing_tasks);

  json dims = json::object();
  if (report.dims.knowledge) {
    const KnowledgeOutcome& k = *report.dims.knowledge;
    dims["knowledge"] = {
        {"accuracy_original", round3(k.accuracy_original)},
        {"accuracy_repaired", round3(k.accuracy_repaired)},
        {"goal_original", round3(k.goal_original)},
        {"goal_repaired", round3(k.goal_repaired)},
        {"app_original", round3(k.app_original)},
        {"app_repaired", round3(k.app_repaired)},
        {"goal_count", k.goal_count},
        {"app_count", k.app_count}};
  }
  if (report.dims.completion) {
    const CompletionOutcome& c = *report.dims.completion;
    dims["completion"] = {
        {"acc_continue", round3(c.acc_continue)},
        {"acc_stop", round3(c.acc_stop)},
        {"overall", round3(c.overall)},
        {"perfect_task_rate", round3(c.perfect_task_rate)},
        {"task_count", c.task_count},
        {"confusion",
         {{"continue", {c.confusion[0][0], c.confusion[0][1], c.confusion[0][2]}},
          {"stop", {c.confusion[1][0], c.confusion[1][1], c.confusion[1][2]}}}}};
  }
  if (report.dims.grounding) {
    const GroundingOutcome& g = *report.dims.grounding;
    dims["grounding"] = {
        {"accuracy_original", round3(g.accuracy_original)},
        {"accuracy_repaired", round3(g.accuracy_repaired)},
        {"format_errors", g.format_errors}};
  }
  if (report.dims.focused) {
    dims["focused"] = {
        {"violation_rate", round3(report.dims.focused->violation_rate)}};
  }
  json radar = json::object();
  auto put_optional = [&](const char* key, const std::optional<double>& v) {
    if (v) radar[key] = round3(*v);
    else radar[key] = nullptr;
  };
  put_optional("goal_understanding", report.dims.goal_understanding);
  put_optional("app_knowledge", report.dims.app_knowledge);
  put_optional("planning", report.dims.planning);
  put_optional("grounding", report.dims.grounding_score);
  put_optional("instruction_following", report.dims.instruction_following);
  radar["success_rate"] = round3(report.overall.sr);
  dims["radar"] = std::move(radar);
  doc["dimensions"] = std::move(dims);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const RunReport& report) {
  std::string out =
      "task_id,category,pass,satisfied,evaluators,acp_fraction,steps,"
      "stop_reason,repeated_actions,total_actions,format_errors,"
      "total_outputs,note\r\n";
  for (const TaskScore& score : report.tasks) {
    out += csv_quote(score.id) + "," + to_string(score.category) + "," +
           (score.pass ? "true" : "false") + "," +
           std::to_string(score.satisfied) + "," +
           std::to_string(score.evaluator_count) + "," +
           format3(score.acp_fraction) + "," + std::to_string(score.steps) +
           "," + to_string(score.stop_reason) + "," +
           std::to_string(score.monitors.repeated_actions) + "," +
           std::to_string(score.monitors.total_actions) + "," +
           std::to_string(score.monitors.format_errors) + "," +
           std::to_string(score.monitors.total_outputs) + "," +
           csv_quote(score.note) + "\r\n";
  }
  return out;
}

std::string report_to_radar_csv(const RunReport& report) {
  std::string out =
      "model,goal_understanding,app_knowledge,planning,grounding,"
      "instruction_following,success_rate\r\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format3(*v) : std::string();
  };
  out += csv_quote(report.model) + "," +
         cell(report.dims.goal_understanding) + "," +
         cell(report.dims.app_knowledge) + "," + cell(report.dims.planning) +
         "," + cell(report.dims.grounding_score) + "," +
         cell(report.dims.instruction_following) + "," +
         format3(report.overall.sr) + "\r\n";
  return out;
}

void export_report(const RunReport& report,
                   const std::filesystem::path& out_dir) {
  write_text_file(out_dir / "report.json", report_to_json(report));
  write_text_file(out_dir / "report.csv", report_to_csv(report));
  write_text_file(out_dir / "radar.csv", report_to_radar_csv(report));
}

std::string config_digest(const std::string& suite_name,
                          const std::string& suite_version,
                          const std::string& backend_kind,
                          const std::string& model, double temperature,
                          int max_tokens, const EpisodeConfig& episode) {
  json doc;
  doc["suite"] = suite_name;
  doc["suite_version"] = suite_version;
  doc["backend_kind"] = backend_kind;
  doc["model"] = model;
  doc["temperature"] = temperature;
  doc["max_tokens"] = max_tokens;
  doc["mode"] = to_string(episode.mode);
  doc["max_steps"] = episode.max_steps;
  doc["policy"] = to_string(episode.policy);
  doc["seed"] = episode.seed ? json(*episode.seed) : json(nullptr);
  return sha256_hex(doc.dump()).substr(0, 16);
}

}  // namespace uinav
