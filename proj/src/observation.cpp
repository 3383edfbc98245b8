// SPDX-License-Identifier: Apache-2.0
#include "uinav/observation.hpp"

#include <functional>

#include "uinav/errors.hpp"
#include "uinav/raster.hpp"

namespace uinav {

const char* to_string(ObservationMode m) {
  switch (m) {
    case ObservationMode::image: return "image";
    case ObservationMode::a11y_full: return "a11y_full";
    case ObservationMode::a11y_simplified: return "a11y_simplified";
    case ObservationMode::annotated_image: return "annotated_image";
  }
  return "a11y_full";
}

std::optional<ObservationMode> observation_mode_from_string(
    std::string_view s) {
  if (s == "image") return ObservationMode::image;
  if (s == "a11y_full") return ObservationMode::a11y_full;
  if (s == "a11y_simplified") return ObservationMode::a11y_simplified;
  if (s == "annotated_image") return ObservationMode::annotated_image;
  return std::nullopt;
}

namespace {

std::string escape_attr(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Shared line grammar: class simple name plus non-empty attributes in the
// fixed order text, desc, id.
std::string node_line(const UINode& node) {
  std::string line = node.simple_class();
  if (!node.text.empty()) line += " text=\"" + escape_attr(node.text) + "\"";
  if (!node.content_desc.empty())
    line += " desc=\"" + escape_attr(node.content_desc) + "\"";
  if (!node.resource_id.empty())
    line += " id=\"" + escape_attr(node.resource_id) + "\"";
  return line;
}

}  // namespace

std::string serialize_full(const UIScreen& screen) {
  std::string out;
  int next_index = 0;
  std::function<void(const UINode&, int)> walk = [&](const UINode& node,
                                                     int depth) {
    if (!out.empty()) out += '\n';
    out.append(static_cast<size_t>(2 * depth), ' ');
    if (node.interactable())
      out += "[" + std::to_string(next_index++) + "] ";
    out += node_line(node);
    for (const UINode& child : node.children) walk(child, depth + 1);
  };
  walk(screen.root, 0);
  return out;
}

std::string serialize_simplified(const UIScreen& screen) {
  std::string out;
  auto elems = interactables(screen);
  for (size_t i = 0; i < elems.size(); ++i) {
    if (!out.empty()) out += '\n';
    out += "[" + std::to_string(i) + "] " + node_line(*elems[i]);
  }
  return out;
}

std::vector<Mark> som_marks(const UIScreen& screen) {
  std::vector<Mark> marks;
  auto elems = interactables(screen);
  marks.reserve(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) {
    Point c = elems[i]->bounds.center();
    marks.push_back(Mark{static_cast<int>(i), c.x, c.y});
  }
  return marks;
}

namespace {
constexpr int kMarkRadius = 14;
constexpr uint32_t kMarkFill = 0xd62828ffu;     // deep red
constexpr uint32_t kMarkNumeral = 0x101828ffu;  // near-black
}  // namespace

std::vector<unsigned char> render_som(
    std::span<const unsigned char> screenshot_png,
    const std::vector<Mark>& marks, int expected_width, int expected_height) {
  Image image = decode_png(screenshot_png);
  if (image.width != expected_width || image.height != expected_height)
    throw SizeMismatch("screenshot is " + std::to_string(image.width) + "x" +
                       std::to_string(image.height) + ", screen declares " +
                       std::to_string(expected_width) + "x" +
                       std::to_string(expected_height));
  for (const Mark& mark : marks) {
    fill_circle(image, mark.cx, mark.cy, kMarkRadius, kMarkFill);
    draw_number(image, mark.cx, mark.cy, mark.index, kMarkNumeral);
  }
  return encode_png(image);
}

Observation build_observation(ObservationMode mode, const UIScreen& screen,
                              std::span<const unsigned char> screenshot_png) {
  Observation obs;
  obs.mode = mode;
  switch (mode) {
    case ObservationMode::a11y_full:
      obs.text = serialize_full(screen);
      break;
    case ObservationMode::a11y_simplified:
      obs.text = serialize_simplified(screen);
      break;
    case ObservationMode::image:
      if (screenshot_png.empty())
        throw MissingScreenshot("image observation requires a screenshot");
      obs.image_png.assign(screenshot_png.begin(), screenshot_png.end());
      break;
    case ObservationMode::annotated_image: {
      if (screenshot_png.empty())
        throw MissingScreenshot(
            "annotated_image observation requires a screenshot");
      obs.marks = som_marks(screen);
      obs.image_png =
          render_som(screenshot_png, obs.marks, screen.width, screen.height);
      break;
    }
  }
  return obs;
}

}  // namespace uinav
