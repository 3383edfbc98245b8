// SPDX-License-Identifier: Apache-2.0
//
// Brute-force span-enumeration oracle for the evaluator engine. Kept
// deliberately independent of the production implementation: assertions are
// matched directly from their definitions and order satisfaction enumerates
// every assignment of spans to list nodes.
#pragma once

#include <map>
#include <vector>

#include "uinav/evaluator.hpp"

namespace uinav::test {

class EvalOracle {
 public:
  explicit EvalOracle(const Trajectory& t) : t_(t), n_(t.end_position()) {}

  bool evaluate(const Evaluator& e) { return satisfiable(e, 0, n_, false); }

 private:
  using Span = std::pair<int, int>;

  // A position is the whole (screen_i, action_{i+1}) pair; a window [lo, hi]
  // keeps the action at hi. Only the trajectory-final position lacks one.
  std::vector<int> positions(const Assertion& a, int lo, int hi) const {
    std::vector<int> out;
    int last_action_pos = std::min(hi, n_ - 1);
    switch (a.kind) {
      case Assertion::Kind::find_action:
      case Assertion::Kind::find_element_by_action:
        for (int i = lo; i <= last_action_pos; ++i)
          if (action_matches(a, i)) out.push_back(i);
        break;
      case Assertion::Kind::find_element:
        for (int i = lo; i <= hi; ++i)
          if (a.element->matches_any(t_.screen_at(i))) out.push_back(i);
        break;
      case Assertion::Kind::stop_page:
        if (a.element->matches_any(t_.screen_at(hi))) out.push_back(hi);
        break;
      case Assertion::Kind::last_action: {
        int j = last_action_pos;
        auto has = [&](int i) {
          return t_.steps[static_cast<size_t>(i)].action.has_value();
        };
        while (j >= lo && !has(j)) --j;
        if (j >= lo && is_stop(*t_.steps[static_cast<size_t>(j)].action)) {
          --j;
          while (j >= lo && !has(j)) --j;
        }
        if (j >= lo && action_matches(a, j)) out.push_back(hi);
        break;
      }
    }
    return out;
  }

  bool action_matches(const Assertion& a, int i) const {
    const Step& step = t_.steps[static_cast<size_t>(i)];
    if (!step.action) return false;
    if (!a.action->matches(*step.action, step.screen)) return false;
    if (a.kind == Assertion::Kind::find_element_by_action) {
      if (!is_element_addressed(*step.action)) return false;
      const UINode* node =
          interactable_at(step.screen, element_index(*step.action));
      if (node == nullptr || !a.element->matches(*node)) return false;
    }
    return true;
  }

  std::vector<Span> spans_of(const EvalNode& node, int lo, int hi) {
    std::vector<Span> out;
    if (node.is_assertion()) {
      for (int i : positions(*node.assertion, lo, hi)) out.push_back({i, i});
      return out;
    }
    for (int s = lo; s <= hi; ++s)
      for (int e = s; e <= hi; ++e)
        if (tight(*node.sub, s, e)) out.push_back({s, e});
    return out;
  }

  bool tight(const Evaluator& e, int lo, int hi) {
    auto key = std::make_tuple(&e, lo, hi);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool value = satisfiable(e, lo, hi, true);
    memo_.emplace(key, value);
    return value;
  }

  // Enumerates every assignment (one span per node) and checks the order
  // predicate literally.
  bool satisfiable(const Evaluator& e, int lo, int hi, bool need_tight) {
    std::vector<std::vector<Span>> all;
    for (const EvalNode& node : e.list) {
      all.push_back(spans_of(node, lo, hi));
      if (all.back().empty()) return false;
    }
    std::vector<size_t> pick(all.size(), 0);
    for (;;) {
      std::vector<Span> chosen;
      for (size_t k = 0; k < all.size(); ++k) chosen.push_back(all[k][pick[k]]);

      bool order_ok = true;
      if (e.order == Evaluator::Order::sequential) {
        for (size_t k = 0; k + 1 < chosen.size() && order_ok; ++k)
          order_ok = chosen[k].second < chosen[k + 1].first;
      } else if (e.order == Evaluator::Order::consecutive) {
        for (size_t k = 0; k + 1 < chosen.size() && order_ok; ++k)
          order_ok = chosen[k + 1].first == chosen[k].second + 1;
      }
      if (order_ok && need_tight) {
        int min_start = hi + 1, max_end = lo - 1;
        for (const Span& s : chosen) {
          min_start = std::min(min_start, s.first);
          max_end = std::max(max_end, s.second);
        }
        order_ok = min_start == lo && max_end == hi;
      }
      if (order_ok) return true;

      size_t k = 0;
      while (k < pick.size() && ++pick[k] == all[k].size()) pick[k++] = 0;
      if (k == pick.size()) return false;
    }
  }

  const Trajectory& t_;
  int n_;
  std::map<std::tuple<const Evaluator*, int, int>, bool> memo_;
};

}  // namespace uinav::test
