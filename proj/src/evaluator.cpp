// SPDX-License-Identifier: Apache-2.0
#include "uinav/evaluator.hpp"

#include <map>

#include "uinav/json_util.hpp"

namespace uinav {

const char* to_string(MatchMode m) {
  switch (m) {
    case MatchMode::exact: return "exact";
    case MatchMode::contains: return "contains";
    case MatchMode::regex: return "regex";
  }
  return "exact";
}

const char* to_string(MatchField f) {
  switch (f) {
    case MatchField::resource_id: return "resource_id";
    case MatchField::text: return "text";
    case MatchField::content_desc: return "content_desc";
    case MatchField::class_name: return "class_name";
  }
  return "text";
}

namespace {

bool value_matches(MatchMode mode, const std::string& expected,
                   const std::shared_ptr<const std::regex>& compiled,
                   const std::string& actual) {
  switch (mode) {
    case MatchMode::exact:
      return actual == expected;
    case MatchMode::contains:
      return actual.find(expected) != std::string::npos;
    case MatchMode::regex:
      return compiled && std::regex_search(actual, *compiled);
  }
  return false;
}

}  // namespace

bool MatchClause::matches(const std::string& actual) const {
  return value_matches(mode, value, compiled, actual);
}

bool ElementMatcher::matches(const UINode& node) const {
  for (const MatchClause& clause : clauses) {
    const std::string* actual = nullptr;
    switch (clause.field) {
      case MatchField::resource_id: actual = &node.resource_id; break;
      case MatchField::text: actual = &node.text; break;
      case MatchField::content_desc: actual = &node.content_desc; break;
      case MatchField::class_name: actual = &node.class_name; break;
    }
    if (!clause.matches(*actual)) return false;
  }
  return true;
}

bool ElementMatcher::matches_any(const UIScreen& screen) const {
  bool found = false;
  visit_preorder(screen.root, [&](const UINode& node, int) {
    if (!found && matches(node)) found = true;
  });
  return found;
}

bool PayloadMatcher::matches(const std::string& actual) const {
  return value_matches(mode, value, compiled, actual);
}

const char* to_string(PatternVerb v) {
  switch (v) {
    case PatternVerb::click: return "click";
    case PatternVerb::longclick: return "longclick";
    case PatternVerb::text: return "text";
    case PatternVerb::swipe: return "swipe";
    case PatternVerb::press: return "press";
    case PatternVerb::any: return "any";
  }
  return "any";
}

std::optional<PatternVerb> pattern_verb_from_string(std::string_view s) {
  if (s == "click") return PatternVerb::click;
  if (s == "longclick") return PatternVerb::longclick;
  if (s == "text") return PatternVerb::text;
  if (s == "swipe") return PatternVerb::swipe;
  if (s == "press") return PatternVerb::press;
  if (s == "any") return PatternVerb::any;
  return std::nullopt;
}

namespace {

PatternVerb verb_of(const Action& a) {
  struct Visitor {
    PatternVerb operator()(const ClickElem&) const { return PatternVerb::click; }
    PatternVerb operator()(const LongClickElem&) const {
      return PatternVerb::longclick;
    }
    PatternVerb operator()(const TextElem&) const { return PatternVerb::text; }
    PatternVerb operator()(const SwipeElem&) const { return PatternVerb::swipe; }
    PatternVerb operator()(const ClickXY&) const { return PatternVerb::click; }
    PatternVerb operator()(const LongClickXY&) const {
      return PatternVerb::longclick;
    }
    PatternVerb operator()(const TextXY&) const { return PatternVerb::text; }
    PatternVerb operator()(const SwipeXYXY&) const { return PatternVerb::swipe; }
    PatternVerb operator()(const Press&) const { return PatternVerb::press; }
  };
  return std::visit(Visitor{}, a);
}

std::optional<Direction> direction_of(const Action& a) {
  if (const auto* v = std::get_if<SwipeElem>(&a)) return v->dir;
  if (const auto* v = std::get_if<SwipeXYXY>(&a))
    return swipe_vector_direction(v->x2 - v->x1, v->y2 - v->y1);
  return std::nullopt;
}

const std::string* payload_of(const Action& a) {
  if (const auto* v = std::get_if<TextElem>(&a)) return &v->text;
  if (const auto* v = std::get_if<TextXY>(&a)) return &v->text;
  return nullptr;
}

}  // namespace

bool ActionPattern::matches(const Action& a, const UIScreen& screen) const {
  if (verb != PatternVerb::any && verb_of(a) != verb) return false;
  if (key) {
    const auto* press = std::get_if<Press>(&a);
    if (press == nullptr || press->key != *key) return false;
  }
  if (direction) {
    auto dir = direction_of(a);
    if (!dir || *dir != *direction) return false;
  }
  if (payload) {
    const std::string* text = payload_of(a);
    if (text == nullptr || !payload->matches(*text)) return false;
  }
  if (target) {
    if (!is_element_addressed(a)) return false;
    const UINode* node = interactable_at(screen, element_index(a));
    if (node == nullptr || !target->matches(*node)) return false;
  }
  return true;
}

const char* to_string(Assertion::Kind k) {
  switch (k) {
    case Assertion::Kind::stop_page: return "stop_page";
    case Assertion::Kind::last_action: return "last_action";
    case Assertion::Kind::find_action: return "find_action";
    case Assertion::Kind::find_element: return "find_element";
    case Assertion::Kind::find_element_by_action:
      return "find_element_by_action";
  }
  return "find_action";
}

const char* to_string(Evaluator::Order o) {
  switch (o) {
    case Evaluator::Order::sequential: return "sequential";
    case Evaluator::Order::consecutive: return "consecutive";
    case Evaluator::Order::presence: return "presence";
  }
  return "presence";
}

std::optional<Evaluator::Order> order_from_string(std::string_view s) {
  if (s == "sequential") return Evaluator::Order::sequential;
  if (s == "consecutive") return Evaluator::Order::consecutive;
  if (s == "presence") return Evaluator::Order::presence;
  return std::nullopt;
}

namespace {

using Span = std::pair<int, int>;

// Per-trajectory evaluation state. Assertion matches are precomputed as
// full-range masks; window queries derive from them. Sub-evaluator
// satisfiability is memoized per (node, window) because nested windows
// revisit the same ranges.
class EvalContext {
 public:
  explicit EvalContext(const Trajectory& t) : t_(t), n_(t.end_position()) {}

  bool satisfiable(const Evaluator& e, int lo, int hi, bool tight) {
    std::vector<std::vector<Span>> child_spans;
    child_spans.reserve(e.list.size());
    for (const EvalNode& node : e.list)
      child_spans.push_back(spans_of(node, lo, hi));

    for (const auto& spans : child_spans)
      if (spans.empty()) return false;

    if (e.order == Evaluator::Order::presence) {
      if (!tight) return true;
      // Tightness needs a chosen span starting at lo and one ending at hi;
      // a single child can serve both roles only via one span [lo, hi].
      int starters = -1, enders = -1;  // child indexes; -2 = several
      for (size_t k = 0; k < child_spans.size(); ++k) {
        for (const Span& s : child_spans[k]) {
          if (s.first == lo && s.second == hi) return true;
          if (s.first == lo) starters = (starters == -1 || starters == int(k))
                                            ? int(k)
                                            : -2;
          if (s.second == hi) enders = (enders == -1 || enders == int(k))
                                           ? int(k)
                                           : -2;
        }
      }
      if (starters == -1 || enders == -1) return false;
      return starters == -2 || enders == -2 || starters != enders;
    }

    bool consecutive = e.order == Evaluator::Order::consecutive;
    // chain(k, pos, exact): children k.. can pick spans in list order with
    // start == pos (exact) or start >= pos, ends strictly before the next
    // start; under tightness the first span starts at lo and the last ends
    // at hi.
    std::map<std::tuple<size_t, int, bool>, bool> memo;
    std::function<bool(size_t, int, bool)> chain = [&](size_t k, int pos,
                                                       bool exact) -> bool {
      if (k == child_spans.size()) return true;
      auto memo_key = std::make_tuple(k, pos, exact);
      auto it = memo.find(memo_key);
      if (it != memo.end()) return it->second;
      bool ok = false;
      bool last = k + 1 == child_spans.size();
      for (const Span& s : child_spans[k]) {
        if (exact ? s.first != pos : s.first < pos) continue;
        if (tight && last && s.second != hi) continue;
        if (chain(k + 1, s.second + 1, consecutive)) {
          ok = true;
          break;
        }
      }
      memo[memo_key] = ok;
      return ok;
    };
    return chain(0, lo, tight);
  }

  // Positions are atomic (screen_i, action_{i+1}) pairs; a window [lo, hi]
  // spans whole positions, so the action at position hi is inside the
  // window. Only the trajectory's final position n_ carries no action.
  std::set<int> positions(const Assertion& a, int lo, int hi) {
    const AssertionMasks& m = masks_for(a);
    std::set<int> out;
    int last_action_pos = std::min(hi, n_ - 1);
    switch (a.kind) {
      case Assertion::Kind::find_action:
      case Assertion::Kind::find_element_by_action:
        for (int i = lo; i <= last_action_pos; ++i)
          if (m.action_match[i]) out.insert(i);
        break;
      case Assertion::Kind::find_element:
        for (int i = lo; i <= hi; ++i)
          if (m.element_match[i]) out.insert(i);
        break;
      case Assertion::Kind::stop_page:
        if (m.element_match[hi]) out.insert(hi);
        break;
      case Assertion::Kind::last_action: {
        // Last parsed action in the window, skipping a trailing press [stop].
        int j = last_action_pos;
        while (j >= lo && !m.has_action[j]) --j;
        if (j >= lo && m.is_stop[j]) {
          --j;
          while (j >= lo && !m.has_action[j]) --j;
        }
        if (j >= lo && m.action_match[j]) out.insert(hi);
        break;
      }
    }
    return out;
  }

 private:
  struct AssertionMasks {
    std::vector<bool> action_match;   // action at position i matches
    std::vector<bool> element_match;  // screen at position i has a match
    std::vector<bool> has_action;
    std::vector<bool> is_stop;
  };

  std::vector<Span> spans_of(const EvalNode& node, int lo, int hi) {
    std::vector<Span> out;
    if (node.is_assertion()) {
      for (int i : positions(*node.assertion, lo, hi)) out.push_back({i, i});
      return out;
    }
    const Evaluator* sub = node.sub.get();
    for (int s = lo; s <= hi; ++s)
      for (int e = s; e <= hi; ++e)
        if (tight_memoized(sub, s, e)) out.push_back({s, e});
    return out;
  }

  bool tight_memoized(const Evaluator* e, int lo, int hi) {
    auto key = std::make_tuple(e, lo, hi);
    auto it = tight_memo_.find(key);
    if (it != tight_memo_.end()) return it->second;
    bool value = satisfiable(*e, lo, hi, /*tight=*/true);
    tight_memo_.emplace(key, value);
    return value;
  }

  const AssertionMasks& masks_for(const Assertion& a) {
    auto it = masks_.find(&a);
    if (it != masks_.end()) return it->second;
    AssertionMasks m;
    m.action_match.assign(n_, false);
    m.has_action.assign(n_, false);
    m.is_stop.assign(n_, false);
    for (int i = 0; i < n_; ++i) {
      const Step& step = t_.steps[static_cast<size_t>(i)];
      if (!step.action) continue;
      m.has_action[i] = true;
      m.is_stop[i] = is_stop(*step.action);
      if (a.action) m.action_match[i] = matches_action(a, step);
    }
    if (a.element &&
        (a.kind == Assertion::Kind::find_element ||
         a.kind == Assertion::Kind::stop_page)) {
      m.element_match.assign(n_ + 1, false);
      for (int i = 0; i <= n_; ++i)
        m.element_match[i] = a.element->matches_any(t_.screen_at(i));
    }
    return masks_.emplace(&a, std::move(m)).first->second;
  }

  bool matches_action(const Assertion& a, const Step& step) const {
    if (!a.action->matches(*step.action, step.screen)) return false;
    if (a.kind == Assertion::Kind::find_element_by_action) {
      if (!is_element_addressed(*step.action)) return false;
      const UINode* node =
          interactable_at(step.screen, element_index(*step.action));
      if (node == nullptr || !a.element->matches(*node)) return false;
    }
    return true;
  }

  const Trajectory& t_;
  int n_;
  std::map<const Assertion*, AssertionMasks> masks_;
  std::map<std::tuple<const Evaluator*, int, int>, bool> tight_memo_;
};

}  // namespace

std::set<int> assertion_positions(const Assertion& a, const Trajectory& t) {
  EvalContext ctx(t);
  return ctx.positions(a, 0, t.end_position());
}

bool evaluate(const Evaluator& e, const Trajectory& t) {
  EvalContext ctx(t);
  return ctx.satisfiable(e, 0, t.end_position(), /*tight=*/false);
}

Satisfaction task_satisfaction(
    const std::vector<std::shared_ptr<const Evaluator>>& evaluators,
    const Trajectory& t) {
  Satisfaction result;
  result.total = static_cast<int>(evaluators.size());
  for (const auto& evaluator : evaluators)
    if (evaluate(*evaluator, t)) ++result.satisfied;
  result.pass = result.total > 0 && result.satisfied == result.total;
  return result;
}

namespace {

std::shared_ptr<const std::regex> compile_regex(const std::string& pattern,
                                                const std::string& origin,
                                                const std::string& path) {
  try {
    return std::make_shared<const std::regex>(pattern);
  } catch (const std::regex_error&) {
    schema_fail(origin, path, "regex does not compile: " + pattern);
  }
}

MatchClause parse_clause(const json& v, const std::string& origin,
                         const std::string& path) {
  MatchClause clause;
  std::string field = require_string(v, "field", origin, path);
  if (field == "resource_id") clause.field = MatchField::resource_id;
  else if (field == "text") clause.field = MatchField::text;
  else if (field == "content_desc") clause.field = MatchField::content_desc;
  else if (field == "class_name") clause.field = MatchField::class_name;
  else schema_fail(origin, path + ".field", "unknown field: " + field);

  std::string mode = require_string(v, "mode", origin, path);
  if (mode == "exact") clause.mode = MatchMode::exact;
  else if (mode == "contains") clause.mode = MatchMode::contains;
  else if (mode == "regex") clause.mode = MatchMode::regex;
  else schema_fail(origin, path + ".mode", "unknown mode: " + mode);

  if (clause.field == MatchField::class_name && clause.mode != MatchMode::exact)
    schema_fail(origin, path, "class_name supports exact mode only");

  clause.value = require_string(v, "value", origin, path);
  if (clause.mode == MatchMode::regex)
    clause.compiled = compile_regex(clause.value, origin, path + ".value");
  return clause;
}

ElementMatcher parse_matcher(const json& v, const std::string& origin,
                             const std::string& path) {
  if (!v.is_array() || v.empty())
    schema_fail(origin, path, "matcher must be a nonempty clause array");
  ElementMatcher matcher;
  for (size_t i = 0; i < v.size(); ++i)
    matcher.clauses.push_back(
        parse_clause(v[i], origin, path + "[" + std::to_string(i) + "]"));
  return matcher;
}

ActionPattern parse_pattern(const json& v, const std::string& origin,
                            const std::string& path) {
  if (!v.is_object()) schema_fail(origin, path, "pattern must be an object");
  ActionPattern pattern;
  std::string verb = optional_string(v, "verb", origin, path, "any");
  auto parsed_verb = pattern_verb_from_string(verb);
  if (!parsed_verb)
    schema_fail(origin, path + ".verb", "unknown verb: " + verb);
  pattern.verb = *parsed_verb;

  if (v.contains("key")) {
    if (pattern.verb != PatternVerb::press)
      schema_fail(origin, path + ".key", "key constraint requires verb=press");
    auto key =
        press_key_from_string(require_string(v, "key", origin, path));
    if (!key) schema_fail(origin, path + ".key", "unknown press key");
    pattern.key = *key;
  }
  if (v.contains("direction")) {
    auto dir = direction_from_string(
        require_string(v, "direction", origin, path));
    if (!dir) schema_fail(origin, path + ".direction", "unknown direction");
    pattern.direction = *dir;
  }
  if (v.contains("payload")) {
    if (pattern.verb != PatternVerb::text)
      schema_fail(origin, path + ".payload",
                  "payload matcher requires verb=text");
    const json& p = v["payload"];
    PayloadMatcher payload;
    std::string mode = require_string(p, "mode", origin, path + ".payload");
    if (mode == "exact") payload.mode = MatchMode::exact;
    else if (mode == "contains") payload.mode = MatchMode::contains;
    else if (mode == "regex") payload.mode = MatchMode::regex;
    else schema_fail(origin, path + ".payload.mode", "unknown mode");
    payload.value = require_string(p, "value", origin, path + ".payload");
    if (payload.mode == MatchMode::regex)
      payload.compiled =
          compile_regex(payload.value, origin, path + ".payload.value");
    pattern.payload = std::move(payload);
  }
  if (v.contains("target"))
    pattern.target = parse_matcher(v["target"], origin, path + ".target");
  return pattern;
}

EvalNode parse_node(const json& v, const std::string& origin,
                    const std::string& path);

Evaluator parse_evaluator_object(const json& v, const std::string& origin,
                                 const std::string& path) {
  Evaluator e;
  auto order =
      order_from_string(require_string(v, "order", origin, path));
  if (!order) schema_fail(origin, path + ".order", "unknown order");
  e.order = *order;
  const json& list = require_field(v, "list", origin, path);
  if (!list.is_array() || list.empty())
    schema_fail(origin, path + ".list", "list must be a nonempty array");
  for (size_t i = 0; i < list.size(); ++i)
    e.list.push_back(parse_node(
        list[i], origin, path + ".list[" + std::to_string(i) + "]"));
  return e;
}

EvalNode parse_node(const json& v, const std::string& origin,
                    const std::string& path) {
  if (!v.is_object()) schema_fail(origin, path, "node must be an object");
  EvalNode node;
  if (v.contains("assert")) {
    Assertion a;
    std::string kind = require_string(v, "assert", origin, path);
    bool wants_element = false, wants_action = false;
    if (kind == "stop_page") {
      a.kind = Assertion::Kind::stop_page;
      wants_element = true;
    } else if (kind == "last_action") {
      a.kind = Assertion::Kind::last_action;
      wants_action = true;
    } else if (kind == "find_action") {
      a.kind = Assertion::Kind::find_action;
      wants_action = true;
    } else if (kind == "find_element") {
      a.kind = Assertion::Kind::find_element;
      wants_element = true;
    } else if (kind == "find_element_by_action") {
      a.kind = Assertion::Kind::find_element_by_action;
      wants_element = true;
      wants_action = true;
    } else {
      schema_fail(origin, path + ".assert", "unknown assertion: " + kind);
    }
    if (wants_element)
      a.element = parse_matcher(require_field(v, "element", origin, path),
                                origin, path + ".element");
    if (wants_action)
      a.action = parse_pattern(require_field(v, "action", origin, path),
                               origin, path + ".action");
    node.assertion = std::move(a);
    return node;
  }
  if (v.contains("order")) {
    node.sub = std::make_shared<Evaluator>(
        parse_evaluator_object(v, origin, path));
    return node;
  }
  schema_fail(origin, path, "node needs either \"assert\" or \"order\"");
}

}  // namespace

Evaluator parse_evaluator(const nlohmann::json& doc,
                          const std::string& origin) {
  check_format_version(doc, origin);
  return parse_evaluator_object(doc, origin, "evaluator");
}

Evaluator load_evaluator_file(const std::filesystem::path& path) {
  std::string origin = path.filename().string();
  json doc = parse_json(read_text_file(path), origin);
  return parse_evaluator(doc, origin);
}

}  // namespace uinav
