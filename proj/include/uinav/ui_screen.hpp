// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "uinav/geometry.hpp"

namespace uinav {

// One node of a parsed accessibility-tree snapshot. Children bounds are not
// required to be contained in the parent (real dumps violate containment).
struct UINode {
  std::string class_name;
  std::string resource_id;
  std::string text;
  std::string content_desc;
  Rect bounds;
  bool clickable = false;
  bool long_clickable = false;
  bool scrollable = false;
  bool editable = false;
  bool enabled = false;
  bool visible = false;
  std::vector<UINode> children;

  bool interactable() const {
    return visible && enabled &&
           (clickable || long_clickable || scrollable || editable);
  }

  // "android.widget.Button" -> "Button".
  std::string simple_class() const;

  bool operator==(const UINode&) const = default;
};

struct UIScreen {
  UINode root;
  int width = 0;
  int height = 0;
  std::string screenshot_ref;  // empty = no screenshot
  std::string activity_tag;

  bool operator==(const UIScreen&) const = default;
};

// Parses the canonical JSON screen document. Unknown fields are ignored;
// missing optional attributes default to empty strings / false.
// Throws SchemaError naming the offending path.
UIScreen load_screen(const std::string& json_text,
                     const std::string& origin = "");
UIScreen load_screen_file(const std::filesystem::path& path);

// Inverse of load_screen on the validated subset: load(save(s)) == s.
std::string save_screen(const UIScreen& screen);

// Pre-order depth-first visit of every node.
void visit_preorder(const UINode& root,
                    const std::function<void(const UINode&, int depth)>& fn);

int node_count(const UIScreen& screen);

// Interactable nodes in pre-order visit order; the vector position is the
// element index the serializers and the action grammar refer to.
std::vector<const UINode*> interactables(const UIScreen& screen);

// nullptr when index is out of range.
const UINode* interactable_at(const UIScreen& screen, int index);

// 64-hex-char digest over the pre-order canonical serialization of
// (class_name, resource_id, text, content_desc, interactability flags).
// Bounds, screen size and screenshots are excluded, so recordings survive
// resolution changes.
std::string fingerprint(const UIScreen& screen);

}  // namespace uinav
