// SPDX-License-Identifier: Apache-2.0
//
// Seeded random generators for property tests: actions, screens,
// trajectories and evaluator trees.
#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "uinav/evaluator.hpp"
#include "uinav/trajectory.hpp"

namespace uinav::test {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  int pick(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(engine_) < p;
  }
  template <typename T>
  const T& one_of(const std::vector<T>& pool) {
    return pool[static_cast<size_t>(pick(0, static_cast<int>(pool.size()) - 1))];
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> pool = {
      "OK",   "Send",  "Cart", "Login", "mug",   "Save", "Back",
      "Next", "Search", "Stop", "Menu", "Share", "Tab",  "News"};
  return pool;
}

// Single-line payloads, including brackets and spaces.
inline std::string random_payload(Rng& rng) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      " []().,:;!?-_/\"'\\";
  int len = rng.pick(0, 24);
  std::string out;
  for (int i = 0; i < len; ++i)
    out.push_back(alphabet[static_cast<size_t>(
        rng.pick(0, static_cast<int>(alphabet.size()) - 1))]);
  return out;
}

inline Action random_action(Rng& rng) {
  static const std::vector<Direction> dirs = {Direction::up, Direction::down,
                                              Direction::left,
                                              Direction::right};
  static const std::vector<PressKey> keys = {
      PressKey::back, PressKey::home,  PressKey::restart,
      PressKey::wait, PressKey::enter, PressKey::stop};
  switch (rng.pick(0, 8)) {
    case 0: return ClickElem{rng.pick(0, 40)};
    case 1: return LongClickElem{rng.pick(0, 40)};
    case 2: return TextElem{rng.pick(0, 40), random_payload(rng)};
    case 3: return SwipeElem{rng.pick(0, 40), rng.one_of(dirs)};
    case 4: return ClickXY{rng.pick(0, 2000), rng.pick(0, 2000)};
    case 5: return LongClickXY{rng.pick(0, 2000), rng.pick(0, 2000)};
    case 6: return TextXY{rng.pick(0, 2000), rng.pick(0, 2000),
                          random_payload(rng)};
    case 7:
      return SwipeXYXY{rng.pick(0, 2000), rng.pick(0, 2000), rng.pick(0, 2000),
                       rng.pick(0, 2000)};
    default: return Press{rng.one_of(keys)};
  }
}

// Random accessibility tree with at most `max_nodes` nodes. Interactable
// nodes always get non-degenerate bounds so mark centers land inside.
inline UIScreen random_screen(Rng& rng, int max_nodes, int width = 1080,
                              int height = 1920) {
  static const std::vector<std::string> classes = {
      "android.widget.FrameLayout", "android.widget.LinearLayout",
      "android.widget.TextView",    "android.widget.Button",
      "android.widget.EditText",    "android.view.View"};
  int budget = rng.pick(1, max_nodes);

  std::function<UINode(int)> gen = [&](int depth) {
    UINode n;
    n.class_name = rng.one_of(classes);
    --budget;
    if (rng.chance(0.6)) n.text = rng.one_of(word_pool());
    if (rng.chance(0.3)) n.content_desc = rng.one_of(word_pool());
    if (rng.chance(0.4))
      n.resource_id = "app:id/" + rng.one_of(word_pool());
    if (rng.chance(0.1)) n.text += " \"q\" \\p";  // exercise escaping
    n.visible = rng.chance(0.9);
    n.enabled = rng.chance(0.9);
    n.clickable = rng.chance(0.4);
    n.long_clickable = rng.chance(0.1);
    n.scrollable = rng.chance(0.1);
    n.editable = rng.chance(0.15);
    int left = rng.pick(0, width - 2);
    int top = rng.pick(0, height - 2);
    int right = rng.pick(left, width);
    int bottom = rng.pick(top, height);
    if (n.interactable()) {
      right = std::max(right, left + 1);
      bottom = std::max(bottom, top + 1);
    }
    n.bounds = {left, top, right, bottom};
    while (budget > 0 && depth < 6 && rng.chance(depth == 0 ? 0.9 : 0.55))
      n.children.push_back(gen(depth + 1));
    return n;
  };

  UIScreen screen;
  screen.width = width;
  screen.height = height;
  screen.root = gen(0);
  return screen;
}

// Trajectory over freshly generated screens; most steps carry parsed
// actions, some are format failures.
inline Trajectory random_trajectory(Rng& rng, int max_steps) {
  Trajectory t;
  int steps = rng.pick(0, max_steps);
  for (int i = 0; i < steps; ++i) {
    Step step;
    step.screen = random_screen(rng, 8);
    if (rng.chance(0.85)) {
      Action a = random_action(rng);
      // Element indexes beyond the screen are legal; bias some into range.
      if (is_element_addressed(a) && rng.chance(0.7)) {
        int count = static_cast<int>(interactables(step.screen).size());
        if (count > 0) {
          int idx = rng.pick(0, count - 1);
          if (auto* v = std::get_if<ClickElem>(&a)) v->index = idx;
          if (auto* v = std::get_if<LongClickElem>(&a)) v->index = idx;
          if (auto* v = std::get_if<TextElem>(&a)) v->index = idx;
          if (auto* v = std::get_if<SwipeElem>(&a)) v->index = idx;
        }
      }
      step.raw_model_output = render_action(a);
      step.action = a;
    } else {
      step.raw_model_output = "garbled";
      step.format_failure = FormatFailure{"garbled",
                                          FormatErrorKind::unknown_verb};
    }
    t.steps.push_back(std::move(step));
  }
  t.final_screen = random_screen(rng, 8);
  t.stop_reason = StopReason::step_limit;
  return t;
}

inline ElementMatcher random_matcher(Rng& rng) {
  ElementMatcher m;
  int clauses = rng.pick(1, 2);
  for (int i = 0; i < clauses; ++i) {
    MatchClause c;
    switch (rng.pick(0, 3)) {
      case 0: c.field = MatchField::text; break;
      case 1: c.field = MatchField::content_desc; break;
      case 2: c.field = MatchField::resource_id; break;
      default: c.field = MatchField::class_name; break;
    }
    if (c.field == MatchField::class_name) {
      c.mode = MatchMode::exact;
      c.value = "android.widget.Button";
    } else if (rng.chance(0.2)) {
      c.mode = MatchMode::regex;
      c.value = rng.chance(0.5) ? "^S" : "(mug|Cart)";
      c.compiled = std::make_shared<const std::regex>(c.value);
    } else {
      c.mode = rng.chance(0.5) ? MatchMode::exact : MatchMode::contains;
      c.value = rng.one_of(word_pool());
      if (c.mode == MatchMode::contains && rng.chance(0.5))
        c.value = c.value.substr(0, std::max<size_t>(1, c.value.size() / 2));
    }
    m.clauses.push_back(std::move(c));
  }
  return m;
}

inline ActionPattern random_pattern(Rng& rng) {
  ActionPattern p;
  static const std::vector<PatternVerb> verbs = {
      PatternVerb::click, PatternVerb::longclick, PatternVerb::text,
      PatternVerb::swipe, PatternVerb::press,     PatternVerb::any};
  p.verb = rng.one_of(verbs);
  if (p.verb == PatternVerb::press && rng.chance(0.7)) {
    static const std::vector<PressKey> keys = {
        PressKey::back, PressKey::home,  PressKey::restart,
        PressKey::wait, PressKey::enter, PressKey::stop};
    p.key = rng.one_of(keys);
  }
  if (p.verb == PatternVerb::swipe && rng.chance(0.6)) {
    static const std::vector<Direction> dirs = {
        Direction::up, Direction::down, Direction::left, Direction::right};
    p.direction = rng.one_of(dirs);
  }
  if (p.verb == PatternVerb::text && rng.chance(0.6)) {
    PayloadMatcher payload;
    payload.mode = rng.chance(0.5) ? MatchMode::contains : MatchMode::exact;
    payload.value = rng.one_of(word_pool());
    p.payload = std::move(payload);
  }
  if (rng.chance(0.3)) p.target = random_matcher(rng);
  return p;
}

inline Assertion random_assertion(Rng& rng) {
  Assertion a;
  switch (rng.pick(0, 4)) {
    case 0:
      a.kind = Assertion::Kind::stop_page;
      a.element = random_matcher(rng);
      break;
    case 1:
      a.kind = Assertion::Kind::last_action;
      a.action = random_pattern(rng);
      break;
    case 2:
      a.kind = Assertion::Kind::find_action;
      a.action = random_pattern(rng);
      break;
    case 3:
      a.kind = Assertion::Kind::find_element;
      a.element = random_matcher(rng);
      break;
    default:
      a.kind = Assertion::Kind::find_element_by_action;
      a.element = random_matcher(rng);
      a.action = random_pattern(rng);
      break;
  }
  return a;
}

inline Evaluator random_evaluator(Rng& rng, int depth) {
  Evaluator e;
  switch (rng.pick(0, 2)) {
    case 0: e.order = Evaluator::Order::sequential; break;
    case 1: e.order = Evaluator::Order::consecutive; break;
    default: e.order = Evaluator::Order::presence; break;
  }
  int nodes = rng.pick(1, 4);
  for (int i = 0; i < nodes; ++i) {
    EvalNode node;
    if (depth > 1 && rng.chance(0.3))
      node.sub = std::make_shared<Evaluator>(random_evaluator(rng, depth - 1));
    else
      node.assertion = random_assertion(rng);
    e.list.push_back(std::move(node));
  }
  return e;
}

}  // namespace uinav::test
