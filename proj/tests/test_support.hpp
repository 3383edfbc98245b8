// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uinav/trajectory.hpp"
#include "uinav/ui_screen.hpp"

namespace uinav::test {

inline std::filesystem::path repo_dir() {
#ifdef UINAV_REPO_DIR
  return std::filesystem::path(UINAV_REPO_DIR);
#else
  return std::filesystem::current_path();
#endif
}

inline std::filesystem::path fixtures_dir() { return repo_dir() / "fixtures"; }
inline std::filesystem::path suite_dir() { return fixtures_dir() / "suite"; }

// Small in-memory screen builders used across tests.
inline UINode make_node(const std::string& cls, Rect bounds,
                        bool clickable = false) {
  UINode n;
  n.class_name = cls;
  n.bounds = bounds;
  n.visible = true;
  n.enabled = true;
  n.clickable = clickable;
  return n;
}

inline UIScreen make_screen(UINode root, int w = 1080, int h = 1920) {
  UIScreen s;
  s.root = std::move(root);
  s.width = w;
  s.height = h;
  return s;
}

// A screen with `k` clickable buttons labeled by index, side by side.
inline UIScreen buttons_screen(int k) {
  UINode root = make_node("android.widget.FrameLayout", {0, 0, 1080, 1920});
  for (int i = 0; i < k; ++i) {
    UINode b = make_node("android.widget.Button",
                         {40, 100 + 200 * i, 1040, 240 + 200 * i},
                         /*clickable=*/true);
    b.text = "Button " + std::to_string(i);
    b.resource_id = "test:id/b" + std::to_string(i);
    root.children.push_back(std::move(b));
  }
  return make_screen(std::move(root));
}

inline Step make_step(UIScreen screen, const Action& action) {
  Step step;
  step.screen = std::move(screen);
  step.raw_model_output = render_action(action);
  step.action = action;
  return step;
}

}  // namespace uinav::test
