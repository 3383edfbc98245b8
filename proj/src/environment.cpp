// SPDX-License-Identifier: Apache-2.0
#include "uinav/environment.hpp"

#include "uinav/digest.hpp"
#include "uinav/errors.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

const UINode* hit_test(const UIScreen& screen, int x, int y) {
  const UINode* best = nullptr;
  int best_depth = -1;
  visit_preorder(screen.root, [&](const UINode& node, int depth) {
    if (!node.interactable() || !node.bounds.contains(x, y)) return;
    // Deepest wins; among equals the later (topmost-drawn) sibling wins.
    if (depth >= best_depth) {
      best = &node;
      best_depth = depth;
    }
  });
  return best;
}

namespace {

std::string escape_key_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '|' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string locator_key(const char* verb, const UINode& node) {
  return std::string(verb) + "|id=" + escape_key_field(node.resource_id) +
         "|text=" + escape_key_field(node.text) +
         "|desc=" + escape_key_field(node.content_desc);
}

std::string payload_suffix(const std::string& text) {
  return "|payload=" + sha256_hex(text).substr(0, 16);
}

const UINode* resolve_element(const UIScreen& screen, int index) {
  return interactable_at(screen, index);
}

}  // namespace

std::string action_key(const Action& a, const UIScreen& screen) {
  struct Keyer {
    const UIScreen& screen;

    std::string elem(const char* verb, int index,
                     const std::string* payload = nullptr,
                     const Direction* dir = nullptr) const {
      const UINode* node = resolve_element(screen, index);
      if (node == nullptr) return kMissKey;
      std::string key = locator_key(verb, *node);
      if (payload != nullptr) key += payload_suffix(*payload);
      if (dir != nullptr) key += std::string("|dir=") + to_string(*dir);
      return key;
    }

    std::string point(const char* verb, int x, int y,
                      const std::string* payload = nullptr,
                      const Direction* dir = nullptr) const {
      const UINode* node = hit_test(screen, x, y);
      if (node == nullptr) return kMissKey;
      std::string key = locator_key(verb, *node);
      if (payload != nullptr) key += payload_suffix(*payload);
      if (dir != nullptr) key += std::string("|dir=") + to_string(*dir);
      return key;
    }

    std::string operator()(const ClickElem& v) const {
      return elem("click", v.index);
    }
    std::string operator()(const LongClickElem& v) const {
      return elem("longclick", v.index);
    }
    std::string operator()(const TextElem& v) const {
      return elem("text", v.index, &v.text);
    }
    std::string operator()(const SwipeElem& v) const {
      return elem("swipe", v.index, nullptr, &v.dir);
    }
    std::string operator()(const ClickXY& v) const {
      return point("click", v.x, v.y);
    }
    std::string operator()(const LongClickXY& v) const {
      return point("longclick", v.x, v.y);
    }
    std::string operator()(const TextXY& v) const {
      return point("text", v.x, v.y, &v.text);
    }
    std::string operator()(const SwipeXYXY& v) const {
      auto dir = swipe_vector_direction(v.x2 - v.x1, v.y2 - v.y1);
      std::string dir_token = dir ? to_string(*dir) : "none";
      const UINode* node = hit_test(screen, v.x1, v.y1);
      if (node == nullptr) return kMissKey;
      return locator_key("swipe", *node) + "|dir=" + dir_token;
    }
    std::string operator()(const Press& v) const {
      return std::string("press|") + to_string(v.key);
    }
  };
  return std::visit(Keyer{screen}, a);
}

Utg parse_utg(const std::string& text, const std::string& origin) {
  json doc = parse_json(text, origin);
  check_format_version(doc, origin);
  Utg utg;
  utg.app_id = require_string(doc, "app_id", origin, "");
  utg.initial = require_string(doc, "initial", origin, "");
  const json& states = require_field(doc, "states", origin, "");
  if (!states.is_object()) schema_fail(origin, "states", "expected an object");
  for (auto it = states.begin(); it != states.end(); ++it) {
    if (!it.value().is_string())
      schema_fail(origin, "states." + it.key(), "expected a screen ref");
    utg.states[it.key()] = it.value().get<std::string>();
  }
  const json& edges = require_field(doc, "edges", origin, "");
  if (!edges.is_array()) schema_fail(origin, "edges", "expected an array");
  for (size_t i = 0; i < edges.size(); ++i) {
    std::string path = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    std::string from = require_string(e, "from", origin, path);
    std::string key = require_string(e, "key", origin, path);
    std::string to = require_string(e, "to", origin, path);
    auto [it, inserted] = utg.edges.emplace(std::make_pair(from, key), to);
    if (!inserted && it->second != to)
      schema_fail(origin, path, "duplicate edge with conflicting successor");
  }
  if (!utg.states.count(utg.initial))
    schema_fail(origin, "initial", "initial fingerprint not among states");
  for (const auto& [edge, to] : utg.edges) {
    if (!utg.states.count(edge.first))
      schema_fail(origin, "edges", "edge source not among states");
    if (!utg.states.count(to))
      schema_fail(origin, "edges", "edge target not among states");
  }
  return utg;
}

Utg load_utg(const std::filesystem::path& path) {
  return parse_utg(read_text_file(path), path.filename().string());
}

std::string utg_to_json(const Utg& utg) {
  json doc;
  doc["format_version"] = 1;
  doc["app_id"] = utg.app_id;
  doc["initial"] = utg.initial;
  json states = json::object();
  for (const auto& [fp, ref] : utg.states) states[fp] = ref;
  doc["states"] = std::move(states);
  json edges = json::array();
  for (const auto& [edge, to] : utg.edges) {
    json e;
    e["from"] = edge.first;
    e["key"] = edge.second;
    e["to"] = to;
    edges.push_back(std::move(e));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

void save_utg(const Utg& utg, const std::filesystem::path& path) {
  write_text_file(path, utg_to_json(utg));
}

Utg build_utg(const std::string& app_id,
              const std::vector<std::pair<std::string, const Trajectory*>>&
                  recordings) {
  Utg utg;
  utg.app_id = app_id;
  std::map<std::pair<std::string, std::string>, std::string> edge_sources;
  bool first = true;
  for (const auto& [source, trajectory] : recordings) {
    if (trajectory->steps.empty()) continue;
    std::string fp = fingerprint(trajectory->steps.front().screen);
    if (first) {
      utg.initial = fp;
      first = false;
    }
    for (size_t i = 0; i < trajectory->steps.size(); ++i) {
      const Step& step = trajectory->steps[i];
      std::string from = fingerprint(step.screen);
      utg.states.emplace(from, step.screen_ref);
      if (!step.action || is_stop(*step.action) || step.validation_failure)
        continue;
      const UIScreen& next_screen = i + 1 < trajectory->steps.size()
                                        ? trajectory->steps[i + 1].screen
                                        : trajectory->final_screen;
      const std::string& next_ref = i + 1 < trajectory->steps.size()
                                        ? trajectory->steps[i + 1].screen_ref
                                        : trajectory->final_screen_ref;
      std::string to = fingerprint(next_screen);
      utg.states.emplace(to, next_ref);
      std::string key = action_key(*step.action, step.screen);
      auto edge = std::make_pair(from, key);
      auto it = utg.edges.find(edge);
      if (it != utg.edges.end()) {
        if (it->second != to)
          throw ConflictError("conflicting successors for state " + from +
                              " under key \"" + key + "\": recordings " +
                              edge_sources[edge] + " and " + source);
      } else {
        utg.edges.emplace(edge, to);
        edge_sources[edge] = source;
      }
    }
    std::string final_fp = fingerprint(trajectory->final_screen);
    utg.states.emplace(final_fp, trajectory->final_screen_ref);
  }
  if (utg.initial.empty())
    throw SchemaError("cannot build a UTG for " + app_id +
                      " from empty recordings");
  return utg;
}

const char* to_string(NoTransitionPolicy p) {
  return p == NoTransitionPolicy::stay ? "stay" : "fail";
}

std::optional<NoTransitionPolicy> policy_from_string(std::string_view s) {
  if (s == "stay") return NoTransitionPolicy::stay;
  if (s == "fail") return NoTransitionPolicy::fail;
  return std::nullopt;
}

ReplayEnv::ReplayEnv(const Utg& utg, const ScreenStore& screens,
                     NoTransitionPolicy policy)
    : utg_(utg), screens_(screens), policy_(policy) {
  reset();
}

std::shared_ptr<const UIScreen> ReplayEnv::reset() {
  current_ = utg_.initial;
  current_screen_ = screens_.load(utg_.states.at(current_));
  return current_screen_;
}

DeviceAdapter::StepResult ReplayEnv::step(const Action& a) {
  if (const auto* press = std::get_if<Press>(&a)) {
    if (press->key == PressKey::restart) {
      std::string before = current_;
      reset();
      return StepResult{current_screen_, utg_.states.at(current_),
                        before != current_};
    }
    if (press->key == PressKey::wait || press->key == PressKey::enter ||
        press->key == PressKey::stop) {
      // Recorded edges still apply (e.g. enter submitting a form).
      auto it = utg_.edges.find({current_, action_key(a, *current_screen_)});
      if (it != utg_.edges.end() && press->key != PressKey::stop) {
        current_ = it->second;
        current_screen_ = screens_.load(utg_.states.at(current_));
        return StepResult{current_screen_, utg_.states.at(current_), true};
      }
      return StepResult{current_screen_, utg_.states.at(current_), false};
    }
    // back / home: follow a recorded edge when present, otherwise stay.
    auto it = utg_.edges.find({current_, action_key(a, *current_screen_)});
    if (it != utg_.edges.end()) {
      current_ = it->second;
      current_screen_ = screens_.load(utg_.states.at(current_));
      return StepResult{current_screen_, utg_.states.at(current_), true};
    }
    return StepResult{current_screen_, utg_.states.at(current_), false};
  }

  std::string key = action_key(a, *current_screen_);
  auto it = utg_.edges.find({current_, key});
  if (it != utg_.edges.end()) {
    current_ = it->second;
    current_screen_ = screens_.load(utg_.states.at(current_));
    return StepResult{current_screen_, utg_.states.at(current_), true};
  }
  if (policy_ == NoTransitionPolicy::fail)
    throw NoTransition("no recorded transition for key \"" + key +
                       "\" in state " + current_);
  return StepResult{current_screen_, utg_.states.at(current_), false};
}

std::vector<unsigned char> ReplayEnv::screenshot() {
  return screens_.screenshot(*current_screen_);
}

std::string ReplayEnv::current_screen_ref() const {
  return utg_.states.at(current_);
}

}  // namespace uinav
