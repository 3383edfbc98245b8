// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uinav/action.hpp"
#include "uinav/trajectory.hpp"
#include "uinav/ui_screen.hpp"

namespace uinav {

enum class MatchMode { exact, contains, regex };
enum class MatchField { resource_id, text, content_desc, class_name };

const char* to_string(MatchMode m);
const char* to_string(MatchField f);

struct MatchClause {
  MatchField field;
  MatchMode mode;
  std::string value;
  std::shared_ptr<const std::regex> compiled;  // regex mode only

  bool matches(const std::string& actual) const;
};

// Conjunction of clauses over one UI node; an empty matcher is invalid.
struct ElementMatcher {
  std::vector<MatchClause> clauses;

  bool matches(const UINode& node) const;
  bool matches_any(const UIScreen& screen) const;
};

struct PayloadMatcher {
  MatchMode mode;
  std::string value;
  std::shared_ptr<const std::regex> compiled;

  bool matches(const std::string& actual) const;
};

enum class PatternVerb { click, longclick, text, swipe, press, any };

const char* to_string(PatternVerb v);
std::optional<PatternVerb> pattern_verb_from_string(std::string_view s);

struct ActionPattern {
  PatternVerb verb = PatternVerb::any;
  std::optional<PressKey> key;          // press only
  std::optional<Direction> direction;   // swipe only
  std::optional<PayloadMatcher> payload;  // text only
  std::optional<ElementMatcher> target;   // element-addressed actions only

  // `screen` resolves element targets for element-addressed actions.
  bool matches(const Action& a, const UIScreen& screen) const;
};

struct Assertion {
  enum class Kind {
    stop_page,
    last_action,
    find_action,
    find_element,
    find_element_by_action,
  };
  Kind kind;
  std::optional<ElementMatcher> element;
  std::optional<ActionPattern> action;
};

const char* to_string(Assertion::Kind k);

struct Evaluator;

// A list entry: exactly one of assertion / sub set.
struct EvalNode {
  std::optional<Assertion> assertion;
  std::shared_ptr<Evaluator> sub;

  bool is_assertion() const { return assertion.has_value(); }
};

// Recursive assertion tree: a list of nodes plus the ordering the list
// imposes on their match spans.
struct Evaluator {
  enum class Order { sequential, consecutive, presence };
  Order order = Order::presence;
  std::vector<EvalNode> list;  // nonempty
};

const char* to_string(Evaluator::Order o);
std::optional<Evaluator::Order> order_from_string(std::string_view s);

// Positions where the assertion matches the trajectory. Position i denotes
// the pair (screen_i, action taken from it); the final screen is position n.
std::set<int> assertion_positions(const Assertion& a, const Trajectory& t);

// True iff the trajectory satisfies the evaluator tree: every node yields
// match spans ([i,i] for assertions, tight contiguous windows for
// sub-evaluators); presence needs one span per node anywhere, sequential a
// strictly ordered non-overlapping chain, consecutive an adjacent chain.
bool evaluate(const Evaluator& e, const Trajectory& t);

struct Satisfaction {
  int satisfied = 0;
  int total = 0;
  bool pass = false;

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(satisfied) / total;
  }
};

// Counts top-level evaluators only; sub-evaluators are components.
Satisfaction task_satisfaction(
    const std::vector<std::shared_ptr<const Evaluator>>& evaluators,
    const Trajectory& t);

// JSON document form (see the suite layout): {"order": ..., "list": [...]},
// matchers spelled as {"field": ..., "mode": ..., "value": ...}.
Evaluator parse_evaluator(const nlohmann::json& doc, const std::string& origin);
Evaluator load_evaluator_file(const std::filesystem::path& path);

}  // namespace uinav
