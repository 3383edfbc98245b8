// SPDX-License-Identifier: Apache-2.0
#include "uinav/action.hpp"

#include <algorithm>
#include <cctype>

namespace uinav {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::left: return "left";
    case Direction::right: return "right";
  }
  return "up";
}

const char* to_string(PressKey k) {
  switch (k) {
    case PressKey::back: return "back";
    case PressKey::home: return "home";
    case PressKey::restart: return "restart";
    case PressKey::wait: return "wait";
    case PressKey::enter: return "enter";
    case PressKey::stop: return "stop";
  }
  return "back";
}

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}
}  // namespace

std::optional<Direction> direction_from_string(std::string_view s) {
  std::string v = lower(s);
  if (v == "up") return Direction::up;
  if (v == "down") return Direction::down;
  if (v == "left") return Direction::left;
  if (v == "right") return Direction::right;
  return std::nullopt;
}

std::optional<PressKey> press_key_from_string(std::string_view s) {
  std::string v = lower(s);
  if (v == "back") return PressKey::back;
  if (v == "home") return PressKey::home;
  if (v == "restart") return PressKey::restart;
  if (v == "wait") return PressKey::wait;
  if (v == "enter") return PressKey::enter;
  if (v == "stop") return PressKey::stop;
  return std::nullopt;
}

std::string render_action(const Action& a) {
  struct Renderer {
    std::string operator()(const ClickElem& v) const {
      return "click [" + std::to_string(v.index) + "]";
    }
    std::string operator()(const LongClickElem& v) const {
      return "longclick [" + std::to_string(v.index) + "]";
    }
    std::string operator()(const TextElem& v) const {
      return "text [" + std::to_string(v.index) + "] [" + v.text + "]";
    }
    std::string operator()(const SwipeElem& v) const {
      return std::string("swipe [") + std::to_string(v.index) + "] [" +
             to_string(v.dir) + "]";
    }
    std::string operator()(const ClickXY& v) const {
      return "click [" + std::to_string(v.x) + "," + std::to_string(v.y) + "]";
    }
    std::string operator()(const LongClickXY& v) const {
      return "longclick [" + std::to_string(v.x) + "," + std::to_string(v.y) +
             "]";
    }
    std::string operator()(const TextXY& v) const {
      return "text [" + std::to_string(v.x) + "," + std::to_string(v.y) +
             "] [" + v.text + "]";
    }
    std::string operator()(const SwipeXYXY& v) const {
      return "swipe [" + std::to_string(v.x1) + "," + std::to_string(v.y1) +
             "] [" + std::to_string(v.x2) + "," + std::to_string(v.y2) + "]";
    }
    std::string operator()(const Press& v) const {
      return std::string("press [") + to_string(v.key) + "]";
    }
  };
  return std::visit(Renderer{}, a);
}

bool is_element_addressed(const Action& a) {
  return std::holds_alternative<ClickElem>(a) ||
         std::holds_alternative<LongClickElem>(a) ||
         std::holds_alternative<TextElem>(a) ||
         std::holds_alternative<SwipeElem>(a);
}

int element_index(const Action& a) {
  if (const auto* v = std::get_if<ClickElem>(&a)) return v->index;
  if (const auto* v = std::get_if<LongClickElem>(&a)) return v->index;
  if (const auto* v = std::get_if<TextElem>(&a)) return v->index;
  if (const auto* v = std::get_if<SwipeElem>(&a)) return v->index;
  return -1;
}

bool is_stop(const Action& a) {
  const auto* p = std::get_if<Press>(&a);
  return p != nullptr && p->key == PressKey::stop;
}

std::optional<Direction> swipe_vector_direction(int dx, int dy) {
  if (dx == 0 && dy == 0) return std::nullopt;
  if (std::abs(dx) >= std::abs(dy))
    return dx < 0 ? Direction::left : Direction::right;
  return dy < 0 ? Direction::up : Direction::down;
}

}  // namespace uinav
