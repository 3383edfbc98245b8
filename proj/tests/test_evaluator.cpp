// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "eval_oracle.hpp"
#include "generators.hpp"
#include "test_support.hpp"
#include "uinav/evaluator.hpp"
#include "uinav/json_util.hpp"

using namespace uinav;
using namespace uinav::test;

namespace {

ElementMatcher text_is(const std::string& value,
                       MatchMode mode = MatchMode::exact) {
  ElementMatcher m;
  MatchClause c;
  c.field = MatchField::text;
  c.mode = mode;
  c.value = value;
  if (mode == MatchMode::regex)
    c.compiled = std::make_shared<const std::regex>(value);
  m.clauses.push_back(std::move(c));
  return m;
}

ActionPattern click_text(const std::string& value) {
  ActionPattern p;
  p.verb = PatternVerb::click;
  p.target = text_is(value);
  return p;
}

Assertion find_action_a(ActionPattern p) {
  Assertion a;
  a.kind = Assertion::Kind::find_action;
  a.action = std::move(p);
  return a;
}

Assertion stop_page_a(ElementMatcher m) {
  Assertion a;
  a.kind = Assertion::Kind::stop_page;
  a.element = std::move(m);
  return a;
}

Assertion last_action_a(ActionPattern p) {
  Assertion a;
  a.kind = Assertion::Kind::last_action;
  a.action = std::move(p);
  return a;
}

EvalNode node_of(Assertion a) {
  EvalNode n;
  n.assertion = std::move(a);
  return n;
}

EvalNode node_of(Evaluator e) {
  EvalNode n;
  n.sub = std::make_shared<Evaluator>(std::move(e));
  return n;
}

Evaluator eval_of(Evaluator::Order order, std::vector<EvalNode> nodes) {
  Evaluator e;
  e.order = order;
  e.list = std::move(nodes);
  return e;
}

// A 5-step trajectory clicking through named buttons; screen i shows
// buttons named by `labels[i]`.
Trajectory button_walk(const std::vector<std::vector<std::string>>& labels,
                       const std::vector<int>& clicks) {
  Trajectory t;
  for (size_t i = 0; i < clicks.size(); ++i) {
    UINode root = make_node("android.widget.FrameLayout", {0, 0, 1080, 1920});
    for (size_t k = 0; k < labels[i].size(); ++k) {
      UINode b = make_node("android.widget.Button",
                           {0, int(200 * k), 400, int(200 * k + 100)}, true);
      b.text = labels[i][k];
      root.children.push_back(std::move(b));
    }
    t.steps.push_back(
        make_step(make_screen(root), ClickElem{clicks[i]}));
  }
  UINode final_root =
      make_node("android.widget.FrameLayout", {0, 0, 1080, 1920});
  for (size_t k = 0; k < labels.back().size(); ++k) {
    UINode b = make_node("android.widget.Button",
                         {0, int(200 * k), 400, int(200 * k + 100)}, true);
    b.text = labels.back()[k];
    final_root.children.push_back(std::move(b));
  }
  t.final_screen = make_screen(final_root);
  t.stop_reason = StopReason::step_limit;
  return t;
}

}  // namespace

TEST_CASE("assertion positions follow the step pairing") {
  // Steps: click Politics at position 2; final screen has Receipt? no.
  Trajectory t = button_walk(
      {{"Home"}, {"News"}, {"Politics"}, {"Sports"}, {"Done"}},
      {0, 0, 0, 0});
  auto positions =
      assertion_positions(find_action_a(click_text("Politics")), t);
  CHECK(positions == std::set<int>{2});

  auto missing = assertion_positions(stop_page_a(text_is("Receipt")), t);
  CHECK(missing.empty());

  auto last = assertion_positions(stop_page_a(text_is("Done")), t);
  CHECK(last == std::set<int>{4});
}

TEST_CASE("last_action skips the trailing stop") {
  Trajectory t;
  UIScreen screen = buttons_screen(2);
  t.steps.push_back(make_step(screen, ClickElem{0}));
  t.steps.push_back(make_step(screen, Press{PressKey::enter}));
  t.steps.push_back(make_step(screen, Press{PressKey::stop}));
  t.final_screen = screen;
  t.stop_reason = StopReason::agent_stop;

  ActionPattern enter;
  enter.verb = PatternVerb::press;
  enter.key = PressKey::enter;
  auto positions = assertion_positions(last_action_a(enter), t);
  CHECK(positions == std::set<int>{t.end_position()});

  ActionPattern stop;
  stop.verb = PatternVerb::press;
  stop.key = PressKey::stop;
  CHECK(assertion_positions(last_action_a(stop), t).empty());
}

TEST_CASE("ordering semantics: presence, sequential, consecutive") {
  // A matches only at 1 via click Alpha; B matches only at 3 via click Beta.
  Trajectory t = button_walk(
      {{"X"}, {"Alpha"}, {"Y"}, {"Beta"}, {"Z"}}, {0, 0, 0, 0, 0});
  Assertion a = find_action_a(click_text("Alpha"));
  Assertion b = find_action_a(click_text("Beta"));

  CHECK(evaluate(eval_of(Evaluator::Order::presence,
                         {node_of(a), node_of(b)}),
                 t));
  CHECK(evaluate(eval_of(Evaluator::Order::sequential,
                         {node_of(a), node_of(b)}),
                 t));
  CHECK_FALSE(evaluate(eval_of(Evaluator::Order::sequential,
                               {node_of(b), node_of(a)}),
                       t));
  // 1 and 3 are not adjacent.
  CHECK_FALSE(evaluate(eval_of(Evaluator::Order::consecutive,
                               {node_of(a), node_of(b)}),
                       t));

  // Adjacent pair succeeds consecutively.
  Assertion x = find_action_a(click_text("X"));
  CHECK(evaluate(eval_of(Evaluator::Order::consecutive,
                         {node_of(x), node_of(a)}),
                 t));
}

TEST_CASE("a single position cannot satisfy two adjacent list nodes") {
  Trajectory t = button_walk({{"Alpha"}, {"Z"}}, {0});
  Assertion a1 = find_action_a(click_text("Alpha"));
  ActionPattern any_click;
  any_click.verb = PatternVerb::click;
  Assertion a2 = find_action_a(any_click);
  // Both match only position 0; sequential needs two distinct positions.
  CHECK_FALSE(evaluate(eval_of(Evaluator::Order::sequential,
                               {node_of(a1), node_of(a2)}),
                       t));
  CHECK(evaluate(eval_of(Evaluator::Order::presence,
                         {node_of(a1), node_of(a2)}),
                 t));
}

TEST_CASE("sub-evaluators occupy tight spans") {
  Trajectory t = button_walk(
      {{"A"}, {"B"}, {"C"}, {"D"}}, {0, 0, 0, 0});
  // consecutive( consecutive(A,B), consecutive(C,D) ) over positions 0..3.
  Evaluator ab = eval_of(Evaluator::Order::consecutive,
                         {node_of(find_action_a(click_text("A"))),
                          node_of(find_action_a(click_text("B")))});
  Evaluator cd = eval_of(Evaluator::Order::consecutive,
                         {node_of(find_action_a(click_text("C"))),
                          node_of(find_action_a(click_text("D")))});
  CHECK(evaluate(eval_of(Evaluator::Order::consecutive,
                         {node_of(ab), node_of(cd)}),
                 t));
  // cd then ab is impossible.
  CHECK_FALSE(evaluate(eval_of(Evaluator::Order::consecutive,
                               {node_of(cd), node_of(ab)}),
                       t));
}

TEST_CASE("task satisfaction counts top-level evaluators only") {
  Trajectory t = button_walk({{"Alpha"}, {"Z"}}, {0});
  auto good = std::make_shared<const Evaluator>(
      eval_of(Evaluator::Order::presence,
              {node_of(find_action_a(click_text("Alpha")))}));
  auto bad = std::make_shared<const Evaluator>(
      eval_of(Evaluator::Order::presence,
              {node_of(find_action_a(click_text("Missing")))}));

  Satisfaction one = task_satisfaction({good}, t);
  CHECK(one.pass);
  CHECK(one.satisfied == 1);

  Satisfaction mixed = task_satisfaction({good, bad, good, good}, t);
  CHECK(mixed.satisfied == 3);
  CHECK(mixed.total == 4);
  CHECK(!mixed.pass);
  CHECK(mixed.fraction() == doctest::Approx(0.75));

  Satisfaction none = task_satisfaction({bad, bad}, t);
  CHECK(none.satisfied == 0);
  CHECK(!none.pass);
  CHECK(none.fraction() == doctest::Approx(0.0));
}

TEST_CASE("engine agrees with the brute-force oracle") {
  Rng rng(4242);
  int checked = 0;
  for (int round = 0; round < 400; ++round) {
    Trajectory t = random_trajectory(rng, 6);
    Evaluator e = random_evaluator(rng, 3);
    bool expected = EvalOracle(t).evaluate(e);
    bool actual = evaluate(e, t);
    CHECK_MESSAGE(actual == expected, "divergence at round " << round);
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("presence evaluators of find assertions are monotone under step insertion") {
  Rng rng(555);
  for (int round = 0; round < 60; ++round) {
    Trajectory t = random_trajectory(rng, 5);
    // Presence tree over find_* assertions only.
    Evaluator e;
    e.order = Evaluator::Order::presence;
    int nodes = rng.pick(1, 3);
    for (int i = 0; i < nodes; ++i) {
      Assertion a;
      if (rng.chance(0.5)) {
        a.kind = Assertion::Kind::find_action;
        a.action = random_pattern(rng);
      } else {
        a.kind = Assertion::Kind::find_element;
        a.element = random_matcher(rng);
      }
      EvalNode n;
      n.assertion = std::move(a);
      e.list.push_back(std::move(n));
    }
    if (!evaluate(e, t)) continue;

    Trajectory extended = t;
    size_t at = static_cast<size_t>(rng.pick(0, int(t.steps.size())));
    Step inserted = make_step(random_screen(rng, 6), random_action(rng));
    extended.steps.insert(extended.steps.begin() + at, inserted);
    CHECK(evaluate(e, extended));
  }
}

TEST_CASE("evaluator files parse with validation") {
  json doc = json::parse(R"({
    "format_version": 1,
    "order": "sequential",
    "list": [
      {"assert": "find_action",
       "action": {"verb": "text",
                  "payload": {"mode": "contains", "value": "mug"}}},
      {"order": "presence",
       "list": [{"assert": "find_element",
                 "element": [{"field": "text", "mode": "regex",
                              "value": "^Bl"}]}]},
      {"assert": "stop_page",
       "element": [{"field": "resource_id", "mode": "contains",
                    "value": "receipt"}]}
    ]
  })");
  Evaluator e = parse_evaluator(doc, "inline");
  CHECK(e.order == Evaluator::Order::sequential);
  CHECK(e.list.size() == 3);
  CHECK(e.list[0].is_assertion());
  CHECK(e.list[1].sub != nullptr);

  SUBCASE("empty matcher is rejected") {
    json bad = doc;
    bad["list"][2]["element"] = json::array();
    CHECK_THROWS_AS(parse_evaluator(bad, "inline"), SchemaError);
  }
  SUBCASE("broken regex is rejected") {
    json bad = doc;
    bad["list"][1]["list"][0]["element"][0]["value"] = "([";
    CHECK_THROWS_AS(parse_evaluator(bad, "inline"), SchemaError);
  }
  SUBCASE("key constraint requires press") {
    json bad = doc;
    bad["list"][0]["action"] = {{"verb", "click"}, {"key", "back"}};
    CHECK_THROWS_AS(parse_evaluator(bad, "inline"), SchemaError);
  }
  SUBCASE("payload matcher requires text verb") {
    json bad = doc;
    bad["list"][0]["action"] =
        {{"verb", "click"},
         {"payload", {{"mode", "exact"}, {"value", "x"}}}};
    CHECK_THROWS_AS(parse_evaluator(bad, "inline"), SchemaError);
  }
  SUBCASE("empty list is rejected") {
    json bad = doc;
    bad["list"] = json::array();
    CHECK_THROWS_AS(parse_evaluator(bad, "inline"), SchemaError);
  }
}
