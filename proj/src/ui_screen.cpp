// SPDX-License-Identifier: Apache-2.0
#include "uinav/ui_screen.hpp"

#include <cstdint>

#include "uinav/digest.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

std::string UINode::simple_class() const {
  auto dot = class_name.rfind('.');
  return dot == std::string::npos ? class_name : class_name.substr(dot + 1);
}

namespace {

Rect parse_bounds(const json& v, const std::string& origin,
                  const std::string& path) {
  if (!v.is_array() || v.size() != 4)
    schema_fail(origin, path, "bounds must be [left, top, right, bottom]");
  for (const auto& c : v)
    if (!c.is_number_integer())
      schema_fail(origin, path, "bounds entries must be integers");
  Rect r{v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>()};
  if (!r.well_formed())
    schema_fail(origin, path, "left must be <= right and top <= bottom");
  return r;
}

UINode parse_node(const json& v, const std::string& origin,
                  const std::string& path) {
  if (!v.is_object()) schema_fail(origin, path, "node must be an object");
  UINode node;
  node.class_name = require_string(v, "class", origin, path);
  node.bounds = parse_bounds(require_field(v, "bounds", origin, path), origin,
                             path + ".bounds");
  node.resource_id = optional_string(v, "resource_id", origin, path);
  node.text = optional_string(v, "text", origin, path);
  node.content_desc = optional_string(v, "content_desc", origin, path);
  node.clickable = optional_bool(v, "clickable", origin, path);
  node.long_clickable = optional_bool(v, "long_clickable", origin, path);
  node.scrollable = optional_bool(v, "scrollable", origin, path);
  node.editable = optional_bool(v, "editable", origin, path);
  node.enabled = optional_bool(v, "enabled", origin, path);
  node.visible = optional_bool(v, "visible", origin, path);
  if (v.contains("children")) {
    const json& kids = v["children"];
    if (!kids.is_array())
      schema_fail(origin, path + ".children", "expected an array");
    node.children.reserve(kids.size());
    for (size_t i = 0; i < kids.size(); ++i)
      node.children.push_back(parse_node(
          kids[i], origin, path + ".children[" + std::to_string(i) + "]"));
  }
  return node;
}

json node_to_json(const UINode& node) {
  json v;
  v["class"] = node.class_name;
  v["bounds"] = {node.bounds.left, node.bounds.top, node.bounds.right,
                 node.bounds.bottom};
  if (!node.resource_id.empty()) v["resource_id"] = node.resource_id;
  if (!node.text.empty()) v["text"] = node.text;
  if (!node.content_desc.empty()) v["content_desc"] = node.content_desc;
  if (node.clickable) v["clickable"] = true;
  if (node.long_clickable) v["long_clickable"] = true;
  if (node.scrollable) v["scrollable"] = true;
  if (node.editable) v["editable"] = true;
  if (node.enabled) v["enabled"] = true;
  if (node.visible) v["visible"] = true;
  if (!node.children.empty()) {
    json kids = json::array();
    for (const UINode& child : node.children)
      kids.push_back(node_to_json(child));
    v["children"] = std::move(kids);
  }
  return v;
}

}  // namespace

UIScreen load_screen(const std::string& json_text, const std::string& origin) {
  json doc = parse_json(json_text, origin);
  check_format_version(doc, origin);
  UIScreen screen;
  const json& size = require_field(doc, "screen_size", origin, "");
  if (!size.is_array() || size.size() != 2 || !size[0].is_number_integer() ||
      !size[1].is_number_integer())
    schema_fail(origin, "screen_size", "expected [width, height]");
  screen.width = size[0].get<int>();
  screen.height = size[1].get<int>();
  if (screen.width <= 0 || screen.height <= 0)
    schema_fail(origin, "screen_size", "dimensions must be positive");
  screen.screenshot_ref = optional_string(doc, "screenshot", origin, "");
  screen.activity_tag = optional_string(doc, "activity_tag", origin, "");
  screen.root = parse_node(require_field(doc, "root", origin, ""), origin,
                           "root");
  return screen;
}

UIScreen load_screen_file(const std::filesystem::path& path) {
  return load_screen(read_text_file(path), path.filename().string());
}

std::string save_screen(const UIScreen& screen) {
  json doc;
  doc["format_version"] = 1;
  doc["screen_size"] = {screen.width, screen.height};
  if (!screen.screenshot_ref.empty()) doc["screenshot"] = screen.screenshot_ref;
  if (!screen.activity_tag.empty()) doc["activity_tag"] = screen.activity_tag;
  doc["root"] = node_to_json(screen.root);
  return doc.dump(2) + "\n";
}

void visit_preorder(const UINode& root,
                    const std::function<void(const UINode&, int)>& fn) {
  struct Walker {
    const std::function<void(const UINode&, int)>& fn;
    void walk(const UINode& node, int depth) {
      fn(node, depth);
      for (const UINode& child : node.children) walk(child, depth + 1);
    }
  };
  Walker{fn}.walk(root, 0);
}

int node_count(const UIScreen& screen) {
  int count = 0;
  visit_preorder(screen.root, [&](const UINode&, int) { ++count; });
  return count;
}

std::vector<const UINode*> interactables(const UIScreen& screen) {
  std::vector<const UINode*> out;
  visit_preorder(screen.root, [&](const UINode& node, int) {
    if (node.interactable()) out.push_back(&node);
  });
  return out;
}

const UINode* interactable_at(const UIScreen& screen, int index) {
  if (index < 0) return nullptr;
  auto list = interactables(screen);
  if (static_cast<size_t>(index) >= list.size()) return nullptr;
  return list[static_cast<size_t>(index)];
}

namespace {

void append_u32(std::string& buf, uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_field(std::string& buf, const std::string& s) {
  append_u32(buf, static_cast<uint32_t>(s.size()));
  buf += s;
}

void append_node(std::string& buf, const UINode& node) {
  append_field(buf, node.class_name);
  append_field(buf, node.resource_id);
  append_field(buf, node.text);
  append_field(buf, node.content_desc);
  unsigned char flags = 0;
  if (node.clickable) flags |= 1u << 0;
  if (node.long_clickable) flags |= 1u << 1;
  if (node.scrollable) flags |= 1u << 2;
  if (node.editable) flags |= 1u << 3;
  if (node.enabled) flags |= 1u << 4;
  if (node.visible) flags |= 1u << 5;
  buf.push_back(static_cast<char>(flags));
  append_u32(buf, static_cast<uint32_t>(node.children.size()));
  for (const UINode& child : node.children) append_node(buf, child);
}

}  // namespace

std::string fingerprint(const UIScreen& screen) {
  // Length-prefixed fields and explicit child counts make the encoding
  // injective, so digest equality tracks canonical-serialization equality.
  std::string buf;
  append_node(buf, screen.root);
  return sha256_hex(buf);
}

}  // namespace uinav
