// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace uinav {

enum class Direction { up, down, left, right };
enum class PressKey { back, home, restart, wait, enter, stop };

const char* to_string(Direction d);
const char* to_string(PressKey k);
std::optional<Direction> direction_from_string(std::string_view s);
std::optional<PressKey> press_key_from_string(std::string_view s);

struct ClickElem {
  int index;
  bool operator==(const ClickElem&) const = default;
};
struct LongClickElem {
  int index;
  bool operator==(const LongClickElem&) const = default;
};
struct TextElem {
  int index;
  std::string text;
  bool operator==(const TextElem&) const = default;
};
struct SwipeElem {
  int index;
  Direction dir;
  bool operator==(const SwipeElem&) const = default;
};
struct ClickXY {
  int x, y;
  bool operator==(const ClickXY&) const = default;
};
struct LongClickXY {
  int x, y;
  bool operator==(const LongClickXY&) const = default;
};
struct TextXY {
  int x, y;
  std::string text;
  bool operator==(const TextXY&) const = default;
};
struct SwipeXYXY {
  int x1, y1, x2, y2;
  bool operator==(const SwipeXYXY&) const = default;
};
struct Press {
  PressKey key;
  bool operator==(const Press&) const = default;
};

// One constructor per action-space row.
using Action = std::variant<ClickElem, LongClickElem, TextElem, SwipeElem,
                            ClickXY, LongClickXY, TextXY, SwipeXYXY, Press>;

// Canonical lowercase form; parse_action(render_action(a)) == a.
std::string render_action(const Action& a);

bool is_element_addressed(const Action& a);
// Element index for element-addressed actions, -1 otherwise.
int element_index(const Action& a);
bool is_stop(const Action& a);

// Dominant-axis direction of a swipe gesture vector; horizontal wins ties,
// a zero vector yields nullopt.
std::optional<Direction> swipe_vector_direction(int dx, int dy);

}  // namespace uinav
