// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uinav/action.hpp"
#include "uinav/screen_store.hpp"
#include "uinav/trajectory.hpp"
#include "uinav/ui_screen.hpp"

namespace uinav {

// Innermost (deepest; later siblings win ties) interactable node containing
// the point, or nullptr.
const UINode* hit_test(const UIScreen& screen, int x, int y);

// Normalized string identity of an action performed on a screen. Element-
// addressed actions key on the target's (resource_id, text, content_desc)
// locator triple; coordinate actions resolve to the innermost interactable
// element under the point and key identically, so element-mode and
// coordinate-mode agents replay against the same recording. Total: actions
// that resolve to no element map to the distinguished "miss" key.
std::string action_key(const Action& a, const UIScreen& screen);

inline constexpr const char* kMissKey = "miss";

// Recorded UI-transition graph: fingerprinted states and action-keyed edges.
struct Utg {
  std::string app_id;
  std::string initial;                         // fingerprint
  std::map<std::string, std::string> states;   // fingerprint -> screen ref
  std::map<std::pair<std::string, std::string>, std::string> edges;
};

Utg parse_utg(const std::string& text, const std::string& origin);
Utg load_utg(const std::filesystem::path& path);
std::string utg_to_json(const Utg& utg);
void save_utg(const Utg& utg, const std::filesystem::path& path);

// Union of states and edges over recordings of one app. A (state, key) pair
// mapping to two different successors raises ConflictError naming both
// recordings.
Utg build_utg(const std::string& app_id,
              const std::vector<std::pair<std::string, const Trajectory*>>&
                  recordings);

enum class NoTransitionPolicy { stay, fail };

const char* to_string(NoTransitionPolicy p);
std::optional<NoTransitionPolicy> policy_from_string(std::string_view s);

// Abstract device surface; a live adapter would implement the same contract
// over adb or a test-automation bridge.
class DeviceAdapter {
 public:
  struct StepResult {
    std::shared_ptr<const UIScreen> screen;
    std::string screen_ref;
    bool transitioned;
  };

  virtual ~DeviceAdapter() = default;
  virtual std::shared_ptr<const UIScreen> reset() = 0;
  virtual StepResult step(const Action& a) = 0;
  // PNG bytes for the current screen; empty when unavailable.
  virtual std::vector<unsigned char> screenshot() = 0;
  virtual std::string current_screen_ref() const = 0;
};

// Deterministic replay over a UTG. Unrecorded actions follow the
// no-transition policy, except press [wait]/[enter] (always stay),
// press [back]/[home] (recorded edge or stay) and press [restart]
// (always reset to the initial state).
class ReplayEnv final : public DeviceAdapter {
 public:
  ReplayEnv(const Utg& utg, const ScreenStore& screens,
            NoTransitionPolicy policy = NoTransitionPolicy::stay);

  std::shared_ptr<const UIScreen> reset() override;
  StepResult step(const Action& a) override;
  std::vector<unsigned char> screenshot() override;
  std::string current_screen_ref() const override;

  const std::string& current_fingerprint() const { return current_; }

 private:
  const Utg& utg_;
  const ScreenStore& screens_;
  NoTransitionPolicy policy_;
  std::string current_;  // fingerprint
  std::shared_ptr<const UIScreen> current_screen_;
};

}  // namespace uinav
