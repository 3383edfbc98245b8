// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uinav/ui_screen.hpp"

namespace uinav {

enum class ObservationMode { image, a11y_full, a11y_simplified, annotated_image };

const char* to_string(ObservationMode m);
std::optional<ObservationMode> observation_mode_from_string(std::string_view);

struct Mark {
  int index;
  int cx;
  int cy;
  bool operator==(const Mark&) const = default;
};

struct Observation {
  ObservationMode mode;
  std::string text;                      // a11y modes only
  std::vector<unsigned char> image_png;  // image modes only
  std::vector<Mark> marks;               // annotated_image only
};

// Indented tree text, one line per node in pre-order. Interactable nodes
// carry their "[i]" index tag; attributes appear as text="…" desc="…" id="…"
// when non-empty, with embedded quotes and backslashes escaped.
std::string serialize_full(const UIScreen& screen);

// Flat list, one line per interactable element in index order, same line
// grammar without indentation.
std::string serialize_simplified(const UIScreen& screen);

// Center marks for interactable elements, in index order.
std::vector<Mark> som_marks(const UIScreen& screen);

// Draws a filled circle (radius 14 px) and the index numeral at each mark
// center on a copy of the screenshot. Throws DecodeError / SizeMismatch.
std::vector<unsigned char> render_som(std::span<const unsigned char> screenshot_png,
                                      const std::vector<Mark>& marks,
                                      int expected_width, int expected_height);

// Dispatches to the serializers; image/annotated modes require a screenshot.
Observation build_observation(ObservationMode mode, const UIScreen& screen,
                              std::span<const unsigned char> screenshot_png = {});

}  // namespace uinav
