// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "generators.hpp"
#include "test_support.hpp"
#include "uinav/errors.hpp"
#include "uinav/json_util.hpp"
#include "uinav/ui_screen.hpp"

using namespace uinav;
using namespace uinav::test;

TEST_CASE("load_screen accepts the smallest valid document") {
  std::string doc = R"({
    "format_version": 1,
    "screen_size": [1080, 1920],
    "root": {"class": "android.widget.FrameLayout",
             "bounds": [0, 0, 1080, 1920]}
  })";
  UIScreen screen = load_screen(doc);
  CHECK(node_count(screen) == 1);
  CHECK(screen.width == 1080);
  CHECK(screen.root.visible == false);  // missing optionals default to false
  CHECK(screen.root.text.empty());
}

TEST_CASE("load_screen rejects inverted bounds naming the path") {
  std::string doc = R"({
    "format_version": 1,
    "screen_size": [1080, 1920],
    "root": {"class": "x", "bounds": [10, 10, 5, 20]}
  })";
  CHECK_THROWS_WITH_AS(load_screen(doc),
                       doctest::Contains("root.bounds"), SchemaError);
}

TEST_CASE("load_screen reports nested paths and required fields") {
  std::string doc = R"({
    "format_version": 1,
    "screen_size": [1080, 1920],
    "root": {"class": "x", "bounds": [0,0,10,10],
             "children": [{"class": "y", "bounds": [0,0,5,5]},
                          {"bounds": [0,0,5,5]}]}
  })";
  CHECK_THROWS_WITH_AS(load_screen(doc),
                       doctest::Contains("root.children[1].class"),
                       SchemaError);
  CHECK_THROWS_AS(load_screen("{\"format_version\": 2}"), SchemaError);
  CHECK_THROWS_AS(load_screen("not json"), SchemaError);
}

TEST_CASE("unknown fields are ignored") {
  std::string doc = R"({
    "format_version": 1,
    "screen_size": [100, 100],
    "future_field": {"x": 1},
    "root": {"class": "x", "bounds": [0,0,10,10], "mystery": true}
  })";
  CHECK(node_count(load_screen(doc)) == 1);
}

TEST_CASE("login fixture parses with the hand-counted shape") {
  UIScreen screen =
      load_screen_file(fixtures_dir() / "screens" / "login.json");
  CHECK(node_count(screen) == 3);
  auto elems = interactables(screen);
  REQUIRE(elems.size() == 2);
  CHECK(elems[0]->resource_id == "com.fake.shoplite:id/username");
  CHECK(elems[1]->resource_id == "com.fake.shoplite:id/login");
}

TEST_CASE("interactables walks pre-order and skips disabled nodes") {
  // root (plain) -> childA clickable -> grandchild editable, childB scrollable
  UINode root = make_node("android.view.View", {0, 0, 100, 100});
  UINode child_a = make_node("android.widget.Button", {0, 0, 50, 50}, true);
  UINode grandchild = make_node("android.widget.EditText", {0, 0, 20, 20});
  grandchild.editable = true;
  grandchild.visible = grandchild.enabled = true;
  child_a.children.push_back(grandchild);
  UINode child_b = make_node("android.view.View", {50, 0, 100, 50});
  child_b.scrollable = true;
  root.children = {child_a, child_b};
  UIScreen screen = make_screen(root, 100, 100);

  auto elems = interactables(screen);
  REQUIRE(elems.size() == 3);
  CHECK(elems[0]->class_name == "android.widget.Button");
  CHECK(elems[1]->editable);
  CHECK(elems[2]->scrollable);

  SUBCASE("invisible or disabled nodes are not interactable") {
    root.children[0].visible = false;
    UIScreen hidden = make_screen(root, 100, 100);
    // child_a hidden; grandchild visibility is independent of the parent.
    CHECK(interactables(hidden).size() == 2);
  }
}

TEST_CASE("zero interactables yields an empty list") {
  UIScreen screen =
      make_screen(make_node("android.view.View", {0, 0, 10, 10}), 10, 10);
  CHECK(interactables(screen).empty());
}

TEST_CASE("fingerprint ignores bounds but sees text") {
  UIScreen a = buttons_screen(2);
  UIScreen b = a;
  b.root.children[0].bounds = {0, 0, 3, 3};
  CHECK(fingerprint(a) == fingerprint(b));

  UIScreen c = a;
  c.root.children[0].text = "changed";
  CHECK(fingerprint(a) != fingerprint(c));

  CHECK(fingerprint(a).size() == 64);
}

TEST_CASE("login fixture fingerprint is stable across runs") {
  UIScreen screen =
      load_screen_file(fixtures_dir() / "screens" / "login.json");
  std::string expected = read_text_file(fixtures_dir() / "goldens" /
                                        "login.fingerprint.txt");
  while (!expected.empty() && (expected.back() == '\n' || expected.back() == '\r'))
    expected.pop_back();
  CHECK(fingerprint(screen) == expected);
}

TEST_CASE("save/load round-trips random screens") {
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    UIScreen screen = random_screen(rng, 30);
    UIScreen reloaded = load_screen(save_screen(screen));
    CHECK(reloaded == screen);
    CHECK(fingerprint(reloaded) == fingerprint(screen));
  }
}

TEST_CASE("interactable index sequence is contiguous") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    UIScreen screen = random_screen(rng, 40);
    auto elems = interactables(screen);
    for (size_t k = 0; k < elems.size(); ++k)
      CHECK(interactable_at(screen, static_cast<int>(k)) == elems[k]);
    CHECK(interactable_at(screen, static_cast<int>(elems.size())) == nullptr);
    CHECK(interactable_at(screen, -1) == nullptr);
  }
}
