// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <unistd.h>

#include "test_support.hpp"
#include "uinav/json_util.hpp"
#include "uinav/suite.hpp"

using namespace uinav;
using namespace uinav::test;

TEST_CASE("the bundled suite loads, cross-validates, and lints clean") {
  Suite suite = load_suite(suite_dir());
  CHECK(suite.manifest.name == "synthetic-nav-suite");
  CHECK(suite.tasks.size() >= 10);
  CHECK(suite.utgs.size() >= 3);

  bool has_user = false, has_testing = false;
  double total_actions = 0;
  for (const Task& task : suite.tasks) {
    has_user |= task.category == TaskCategory::user;
    has_testing |= task.category == TaskCategory::testing;
    CHECK(!task.evaluators.empty());
    REQUIRE(task.reference != nullptr);
    total_actions +=
        static_cast<double>(task.reference->steps.size()) - 1;  // minus stop
  }
  CHECK(has_user);
  CHECK(has_testing);
  CHECK(total_actions / static_cast<double>(suite.tasks.size()) >= 5.0);

  CHECK(lint_suite(suite).empty());
}

namespace {

struct SuiteCopy {
  std::filesystem::path dir;

  SuiteCopy() {
    dir = std::filesystem::temp_directory_path() /
          ("uinav_suite_copy_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::copy(suite_dir(), dir,
                          std::filesystem::copy_options::recursive);
  }
  ~SuiteCopy() { std::filesystem::remove_all(dir); }
};

}  // namespace

TEST_CASE("dangling references are typed errors") {
  SuiteCopy copy;
  // Point one task at a missing evaluator file.
  std::filesystem::path task_file = copy.dir / "tasks/shop_buy_blue_mug.json";
  json doc = parse_json(read_text_file(task_file), "task");
  doc["evaluators"][0] = "evaluators/absent.json";
  write_text_file(task_file, doc.dump(2));
  CHECK_THROWS_AS(load_suite(copy.dir), DanglingRef);
}

TEST_CASE("an empty directory is a SchemaError about the manifest") {
  std::filesystem::path empty =
      std::filesystem::temp_directory_path() / "uinav_empty_suite";
  std::filesystem::create_directories(empty);
  CHECK_THROWS_WITH_AS(load_suite(empty), doctest::Contains("manifest"),
                       SchemaError);
  std::filesystem::remove_all(empty);
}

TEST_CASE("a reference that fails its evaluator is caught by the lint") {
  SuiteCopy copy;
  // Replace one evaluator with an unsatisfiable assertion.
  std::filesystem::path evaluator_file =
      copy.dir / "evaluators/shop_buy_blue_mug_e0.json";
  json doc = json{{"format_version", 1},
                  {"order", "presence"},
                  {"list",
                   {{{"assert", "stop_page"},
                     {"element",
                      {{{"field", "text"},
                        {"mode", "exact"},
                        {"value", "Nonexistent banner"}}}}}}}};
  write_text_file(evaluator_file, doc.dump(2));
  Suite suite = load_suite(copy.dir);
  auto problems = lint_suite(suite);
  REQUIRE(!problems.empty());
  CHECK(problems[0].find("shop_buy_blue_mug") != std::string::npos);
}

TEST_CASE("duplicate task ids are rejected") {
  SuiteCopy copy;
  json manifest =
      parse_json(read_text_file(copy.dir / "manifest.json"), "manifest");
  json tasks = manifest["tasks"];
  tasks.push_back(tasks[0]);
  manifest["tasks"] = tasks;
  write_text_file(copy.dir / "manifest.json", manifest.dump(2));
  CHECK_THROWS_WITH_AS(load_suite(copy.dir),
                       doctest::Contains("duplicate task id"), SchemaError);
}

TEST_CASE("utg states must match their screen fingerprints") {
  SuiteCopy copy;
  // Corrupt a screen file: change a text attribute so the fingerprint moves.
  std::filesystem::path screen_file =
      copy.dir / "screens/shoplite_home.json";
  json doc = parse_json(read_text_file(screen_file), "screen");
  doc["root"]["children"][0]["children"][0]["text"] = "Tampered";
  write_text_file(screen_file, doc.dump(2));
  CHECK_THROWS_WITH_AS(load_suite(copy.dir),
                       doctest::Contains("fingerprint"), SchemaError);
}
