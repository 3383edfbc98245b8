// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: episode runs, probe runs, offline re-scoring,
// suite validation and observation serialization.

#include <atomic>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "uinav/agent.hpp"
#include "uinav/json_util.hpp"
#include "uinav/report.hpp"

namespace {

using namespace uinav;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string suite;
  std::string run;
  std::string runs_dir = "runs";
  std::string backend;
  std::string repair_backend;
  std::string mode = "a11y_full";
  int max_steps = 30;
  std::string policy = "stay";
  int workers = 1;
  long long seed = -1;
};

std::filesystem::path run_dir(const CommonFlags& flags) {
  return std::filesystem::path(flags.runs_dir) / flags.run;
}

EpisodeConfig episode_config(const CommonFlags& flags,
                             const BackendConfig& backend) {
  EpisodeConfig config;
  auto mode = observation_mode_from_string(flags.mode);
  if (!mode) throw HarnessError("unknown observation mode: " + flags.mode);
  config.mode = *mode;
  if (flags.max_steps < 1) throw HarnessError("--max-steps must be >= 1");
  config.max_steps = flags.max_steps;
  auto policy = policy_from_string(flags.policy);
  if (!policy) throw HarnessError("unknown policy: " + flags.policy);
  config.policy = *policy;
  config.model = backend.model;
  config.temperature = backend.temperature;
  config.max_tokens = backend.max_tokens;
  if (flags.seed >= 0) config.seed = flags.seed;
  return config;
}

int cmd_run_e2e(const CommonFlags& flags) {
  Suite suite = load_suite(flags.suite);
  BackendConfig backend_config = load_backend_config(flags.backend);
  BackendFactory factory(backend_config);
  EpisodeConfig config = episode_config(flags, backend_config);

  std::filesystem::path out = run_dir(flags);
  std::filesystem::create_directories(out / "trajectories");
  std::filesystem::create_directories(out / "transcripts");

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex log_mutex;
  int workers = std::max(1, flags.workers);

  auto worker = [&] {
    for (;;) {
      size_t index = next.fetch_add(1);
      if (index >= suite.tasks.size() || failed.load()) return;
      const Task& task = suite.tasks[index];
      try {
        auto utg = suite.utg_for(task.app_id);
        ReplayEnv env(*utg, *suite.screens, config.policy);
        auto backend = factory.for_task(task.id);
        EpisodeResult result = run_episode(task, env, *backend, config);
        save_trajectory(result.trajectory,
                        out / "trajectories" / (task.id + ".jsonl"));
        write_text_file(out / "transcripts" / (task.id + ".jsonl"),
                        transcript_to_jsonl(task.id, result.transcript));
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << task.id << ": " << result.trajectory.steps.size()
                  << " steps, " << to_string(result.trajectory.stop_reason);
        if (!result.error.empty()) std::cout << " (" << result.error << ")";
        std::cout << "\n";
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << task.id << ": " << e.what() << "\n";
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) return kExitValidation;

  RunReport report = score_run_dir(suite, out);
  report.model = backend_config.model;
  report.config_digest = config_digest(
      suite.manifest.name, suite.manifest.version, backend_config.kind,
      backend_config.model, backend_config.temperature,
      backend_config.max_tokens, config);
  attach_probe_scores(report, suite, out);
  export_report(report, out);
  std::cout << "SR " << format3(report.overall.sr) << "\n"
            << "ACP " << format3(report.overall.acp) << "\n";
  return kExitOk;
}

int cmd_run_probe(const std::string& dimension, const CommonFlags& flags) {
  Suite suite = load_suite(flags.suite);
  BackendConfig backend_config = load_backend_config(flags.backend);
  BackendFactory factory(backend_config);
  auto backend = factory.shared();

  std::shared_ptr<Backend> repair;
  if (!flags.repair_backend.empty()) {
    BackendConfig repair_config = load_backend_config(flags.repair_backend);
    repair = BackendFactory(repair_config).shared();
  }

  auto mode = observation_mode_from_string(flags.mode);
  if (!mode) throw HarnessError("unknown observation mode: " + flags.mode);

  auto items_path = suite.probe_file(dimension);
  if (!items_path)
    throw DanglingRef("suite has no probe file for dimension " + dimension);

  std::filesystem::path out = run_dir(flags) / "probes";

  if (dimension == "knowledge") {
    auto items = load_knowledge_items(*items_path);
    KnowledgeOutcome outcome =
        run_knowledge(*backend, repair.get(), items);
    write_text_file(out / "knowledge.jsonl",
                    probe_records_to_jsonl("knowledge", outcome.records));
    std::cout << "accuracy_original " << format3(outcome.accuracy_original)
              << "\naccuracy_repaired " << format3(outcome.accuracy_repaired)
              << "\n";
  } else if (dimension == "completion") {
    auto items = load_completion_items(*items_path);
    std::map<std::string, std::string> instructions;
    for (const Task& task : suite.tasks)
      instructions[task.id] = task.instruction;
    CompletionOutcome outcome =
        run_completion(*backend, items, *suite.screens, *mode, instructions);
    write_text_file(out / "completion.jsonl",
                    probe_records_to_jsonl("completion", outcome.records));
    std::cout << "acc_continue " << format3(outcome.acc_continue)
              << "\nacc_stop " << format3(outcome.acc_stop) << "\noverall "
              << format3(outcome.overall) << "\nperfect_task_rate "
              << format3(outcome.perfect_task_rate) << "\n";
  } else if (dimension == "grounding") {
    auto items = load_grounding_items(*items_path, *suite.screens);
    GroundingOutcome outcome =
        run_grounding(*backend, repair.get(), items, *suite.screens, *mode);
    write_text_file(out / "grounding.jsonl",
                    probe_records_to_jsonl("grounding", outcome.records));
    std::cout << "accuracy_original " << format3(outcome.accuracy_original)
              << "\naccuracy_repaired " << format3(outcome.accuracy_repaired)
              << "\n";
  } else if (dimension == "focused") {
    auto items = load_focused_items(*items_path);
    FocusedOutcome outcome = run_focused(*backend, items);
    write_text_file(out / "focused.jsonl",
                    probe_records_to_jsonl("focused", outcome.records));
    std::cout << "violation_rate " << format3(outcome.violation_rate) << "\n";
  } else {
    throw HarnessError("unknown probe dimension: " + dimension);
  }
  return kExitOk;
}

int cmd_score(const CommonFlags& flags) {
  Suite suite = load_suite(flags.suite);
  std::filesystem::path out = run_dir(flags);
  RunReport report = score_run_dir(suite, out);
  attach_probe_scores(report, suite, out);
  std::cout << "SR " << format3(report.overall.sr) << "\n"
            << "ACP " << format3(report.overall.acp) << "\n"
            << "repetition_rate " << format3(report.overall.repetition_rate)
            << "\nformat_error_rate "
            << format3(report.overall.format_error_rate) << "\n";
  return kExitOk;
}

int cmd_report(const CommonFlags& flags, const std::string& out_flag) {
  Suite suite = load_suite(flags.suite);
  std::filesystem::path run = run_dir(flags);
  RunReport report = score_run_dir(suite, run);
  attach_probe_scores(report, suite, run);
  std::filesystem::path out = out_flag.empty()
                                  ? run
                                  : std::filesystem::path(out_flag);
  export_report(report, out);
  std::cout << "wrote " << (out / "report.json").string() << ", report.csv, "
            << "radar.csv\n";
  return kExitOk;
}

int cmd_serialize_obs(const std::string& mode_name, const std::string& screen,
                      const std::string& out_file) {
  auto mode = observation_mode_from_string(mode_name);
  if (!mode) throw HarnessError("unknown observation mode: " + mode_name);
  UIScreen ui = load_screen_file(screen);
  if (*mode == ObservationMode::a11y_full ||
      *mode == ObservationMode::a11y_simplified) {
    Observation obs = build_observation(*mode, ui);
    std::cout << obs.text << "\n";
    return kExitOk;
  }
  if (out_file.empty())
    throw HarnessError("image modes need --out <file.png>");
  std::filesystem::path screen_path(screen);
  std::vector<unsigned char> shot;
  if (!ui.screenshot_ref.empty())
    shot = read_binary_file(screen_path.parent_path() / ui.screenshot_ref);
  Observation obs = build_observation(*mode, ui, shot);
  write_binary_file(out_file, obs.image_png);
  std::cout << "wrote " << out_file << "\n";
  return kExitOk;
}

int cmd_build_utg(const CommonFlags& flags, const std::string& app_filter) {
  Suite suite = load_suite(flags.suite, /*require_utgs=*/false);
  std::map<std::string, std::vector<std::pair<std::string, const Trajectory*>>>
      recordings;
  for (const Task& task : suite.tasks) {
    if (!app_filter.empty() && task.app_id != app_filter) continue;
    recordings[task.app_id].push_back(
        {task.reference_trajectory_ref, task.reference.get()});
  }
  if (recordings.empty())
    throw HarnessError("no reference trajectories selected");
  for (const auto& [app_id, list] : recordings) {
    Utg utg = build_utg(app_id, list);
    std::filesystem::path out = suite.root / "utg" / (app_id + ".json");
    save_utg(utg, out);
    std::cout << app_id << ": " << utg.states.size() << " states, "
              << utg.edges.size() << " edges -> " << out.string() << "\n";
  }
  return kExitOk;
}

int cmd_validate_suite(const CommonFlags& flags) {
  Suite suite = load_suite(flags.suite);
  std::vector<std::string> problems = lint_suite(suite);
  // Probe files, when present, must parse and cross-validate.
  try {
    if (auto p = suite.probe_file("knowledge")) load_knowledge_items(*p);
    if (auto p = suite.probe_file("grounding"))
      load_grounding_items(*p, *suite.screens);
    if (auto p = suite.probe_file("focused")) load_focused_items(*p);
    if (auto p = suite.probe_file("completion")) {
      auto items = load_completion_items(*p);
      for (const CompletionItem& item : items) {
        const Task* task = suite.find_task(item.task_id);
        if (task == nullptr) {
          problems.push_back("completion item " + item.id +
                             ": unknown task " + item.task_id);
          continue;
        }
        // stop label only on the final step of the task's reference.
        size_t actions = 0;
        for (const Step& step : task->reference->steps)
          if (step.action && !is_stop(*step.action)) ++actions;
        bool is_final = item.action_history.size() == actions;
        if (item.label_stop != is_final)
          problems.push_back("completion item " + item.id +
                             ": label does not match the reference step");
      }
    }
  } catch (const HarnessError& e) {
    problems.push_back(e.what());
  }

  if (problems.empty()) {
    std::cout << "suite ok: " << suite.tasks.size() << " tasks, "
              << suite.utgs.size() << " apps\n";
    return kExitOk;
  }
  for (const std::string& problem : problems)
    std::cout << problem << "\n";
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation harness for goal-based mobile UI navigation agents"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string dimension, screen_file, out_file, app_filter;

  auto add_suite = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--suite", flags.suite, "suite directory");
    if (required) opt->required();
  };
  auto add_run = [&](CLI::App* cmd) {
    cmd->add_option("--run", flags.run, "run id")->required();
    cmd->add_option("--runs-dir", flags.runs_dir, "runs base directory");
  };

  CLI::App* run_e2e = app.add_subcommand("run-e2e", "run episodes over a suite");
  add_suite(run_e2e);
  add_run(run_e2e);
  run_e2e->add_option("--backend", flags.backend, "backend config file")
      ->required();
  run_e2e->add_option("--mode", flags.mode, "observation mode");
  run_e2e->add_option("--max-steps", flags.max_steps, "episode step budget");
  run_e2e->add_option("--policy", flags.policy, "no-transition policy");
  run_e2e->add_option("--workers", flags.workers, "parallel episodes");
  run_e2e->add_option("--seed", flags.seed, "sampling seed");

  CLI::App* run_probe =
      app.add_subcommand("run-probe", "run one capability probe suite");
  run_probe->add_option("dimension", dimension,
                        "knowledge|completion|grounding|focused")
      ->required();
  add_suite(run_probe);
  add_run(run_probe);
  run_probe->add_option("--backend", flags.backend, "backend config file")
      ->required();
  run_probe->add_option("--repair-backend", flags.repair_backend,
                        "repair backend config file");
  run_probe->add_option("--mode", flags.mode, "observation mode");

  CLI::App* score = app.add_subcommand(
      "score", "re-score stored trajectories without any backend");
  add_suite(score);
  add_run(score);

  CLI::App* report =
      app.add_subcommand("report", "export report files for a stored run");
  add_suite(report);
  add_run(report);
  report->add_option("--out", out_file, "output directory");

  CLI::App* serialize =
      app.add_subcommand("serialize-obs", "serialize one screen document");
  serialize->add_option("--mode", flags.mode, "observation mode")->required();
  serialize->add_option("--screen", screen_file, "screen JSON file")
      ->required();
  serialize->add_option("--out", out_file, "PNG output for image modes");

  CLI::App* build =
      app.add_subcommand("build-utg", "rebuild utg files from references");
  add_suite(build);
  build->add_option("--app", app_filter, "only this app id");

  CLI::App* validate =
      app.add_subcommand("validate-suite", "run suite lints");
  add_suite(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_e2e->parsed()) return cmd_run_e2e(flags);
    if (run_probe->parsed()) return cmd_run_probe(dimension, flags);
    if (score->parsed()) return cmd_score(flags);
    if (report->parsed()) return cmd_report(flags, out_file);
    if (serialize->parsed())
      return cmd_serialize_obs(flags.mode, screen_file, out_file);
    if (build->parsed()) return cmd_build_utg(flags, app_filter);
    if (validate->parsed()) return cmd_validate_suite(flags);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const DanglingRef& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const HarnessError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
