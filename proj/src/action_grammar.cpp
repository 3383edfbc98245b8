// SPDX-License-Identifier: Apache-2.0
#include "uinav/action_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace uinav {

const char* to_string(FormatErrorKind k) {
  switch (k) {
    case FormatErrorKind::unknown_verb: return "unknown_verb";
    case FormatErrorKind::arity: return "arity";
    case FormatErrorKind::bad_index_literal: return "bad_index_literal";
    case FormatErrorKind::bad_coordinate: return "bad_coordinate";
    case FormatErrorKind::bad_direction: return "bad_direction";
    case FormatErrorKind::bad_key: return "bad_key";
    case FormatErrorKind::multiline_text: return "multiline_text";
  }
  return "unknown_verb";
}

std::optional<FormatErrorKind> format_error_kind_from_string(
    std::string_view s) {
  if (s == "unknown_verb") return FormatErrorKind::unknown_verb;
  if (s == "arity") return FormatErrorKind::arity;
  if (s == "bad_index_literal") return FormatErrorKind::bad_index_literal;
  if (s == "bad_coordinate") return FormatErrorKind::bad_coordinate;
  if (s == "bad_direction") return FormatErrorKind::bad_direction;
  if (s == "bad_key") return FormatErrorKind::bad_key;
  if (s == "multiline_text") return FormatErrorKind::multiline_text;
  return std::nullopt;
}

const char* to_string(ValidationErrorKind k) {
  switch (k) {
    case ValidationErrorKind::index_out_of_range: return "index_out_of_range";
    case ValidationErrorKind::not_editable: return "not_editable";
    case ValidationErrorKind::coord_out_of_bounds:
      return "coord_out_of_bounds";
  }
  return "index_out_of_range";
}

namespace {

bool is_inline_space(char c) { return c == ' ' || c == '\t'; }
bool is_newline(char c) { return c == '\n' || c == '\r'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

enum class Verb { click, longclick, text, swipe, press };

std::optional<Verb> verb_from_string(std::string_view word) {
  std::string v = to_lower(word);
  if (v == "click") return Verb::click;
  if (v == "longclick") return Verb::longclick;
  if (v == "text") return Verb::text;
  if (v == "swipe") return Verb::swipe;
  if (v == "press") return Verb::press;
  return std::nullopt;
}

// Incremental left-to-right scanner; `reason` reports the first rule broken.
class Scanner {
 public:
  explicit Scanner(std::string_view raw) : raw_(raw) {
    // Strip surrounding whitespace including line terminators.
    size_t begin = 0, end = raw.size();
    while (begin < end && (is_inline_space(raw[begin]) || is_newline(raw[begin])))
      ++begin;
    while (end > begin &&
           (is_inline_space(raw[end - 1]) || is_newline(raw[end - 1])))
      --end;
    line_ = raw.substr(begin, end - begin);
  }

  ParseResult run() {
    std::string verb_word;
    while (pos_ < line_.size() && !is_inline_space(line_[pos_]) &&
           line_[pos_] != '[' && !is_newline(line_[pos_]))
      verb_word.push_back(line_[pos_++]);
    auto verb = verb_from_string(verb_word);
    if (!verb) return fail(FormatErrorKind::unknown_verb);

    switch (*verb) {
      case Verb::click:
        return touch_action(*verb);
      case Verb::longclick:
        return touch_action(*verb);
      case Verb::text:
        return text_action();
      case Verb::swipe:
        return swipe_action();
      case Verb::press:
        return press_action();
    }
    return fail(FormatErrorKind::unknown_verb);
  }

 private:
  FormatFailure fail(FormatErrorKind reason) const {
    return FormatFailure{std::string(raw_), reason};
  }

  // Skips spaces/tabs; a newline is a hard stop reported as multiline_text.
  std::optional<FormatErrorKind> skip_space() {
    while (pos_ < line_.size()) {
      if (is_newline(line_[pos_])) return FormatErrorKind::multiline_text;
      if (!is_inline_space(line_[pos_])) break;
      ++pos_;
    }
    return std::nullopt;
  }

  bool at_end() {
    size_t p = pos_;
    while (p < line_.size() && is_inline_space(line_[p])) ++p;
    return p == line_.size();
  }

  std::optional<FormatErrorKind> expect_open_bracket() {
    if (auto err = skip_space()) return err;
    if (pos_ >= line_.size() || line_[pos_] != '[')
      return FormatErrorKind::arity;
    ++pos_;
    return std::nullopt;
  }

  // Nonnegative integer literal; `coordinate` selects the failure reason.
  std::optional<int> read_number(bool coordinate,
                                 std::optional<FormatErrorKind>& err) {
    if ((err = skip_space())) return std::nullopt;
    FormatErrorKind bad = coordinate ? FormatErrorKind::bad_coordinate
                                     : FormatErrorKind::bad_index_literal;
    if (pos_ >= line_.size() || !std::isdigit(
            static_cast<unsigned char>(line_[pos_]))) {
      err = bad;
      return std::nullopt;
    }
    long long value = 0;
    while (pos_ < line_.size() &&
           std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
      value = value * 10 + (line_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        err = bad;
        return std::nullopt;
      }
      ++pos_;
    }
    return static_cast<int>(value);
  }

  // Group content is either a single index or an "x,y" pair. The failure
  // reason follows which shape the content committed to.
  struct NumberGroup {
    bool is_pair;
    int first;
    int second;
  };

  std::optional<NumberGroup> read_number_group(
      std::optional<FormatErrorKind>& err, bool require_pair = false) {
    if ((err = expect_open_bracket())) return std::nullopt;
    // A comma anywhere before the closing bracket means coordinate context.
    bool coordinate = require_pair;
    for (size_t p = pos_; !coordinate && p < line_.size() && line_[p] != ']';
         ++p) {
      if (line_[p] == ',') {
        coordinate = true;
        break;
      }
      if (is_newline(line_[p])) break;
    }
    auto first = read_number(coordinate, err);
    if (!first) return std::nullopt;
    if ((err = skip_space())) return std::nullopt;
    NumberGroup group{false, *first, 0};
    if (coordinate) {
      if (pos_ >= line_.size() || line_[pos_] != ',') {
        err = FormatErrorKind::bad_coordinate;
        return std::nullopt;
      }
      ++pos_;
      auto second = read_number(true, err);
      if (!second) return std::nullopt;
      if ((err = skip_space())) return std::nullopt;
      group.is_pair = true;
      group.second = *second;
    }
    if (pos_ >= line_.size() || line_[pos_] != ']') {
      err = coordinate ? FormatErrorKind::bad_coordinate
                       : FormatErrorKind::bad_index_literal;
      return std::nullopt;
    }
    ++pos_;
    return group;
  }

  // Bracketed keyword (press key / swipe direction).
  std::optional<std::string> read_word_group(
      FormatErrorKind bad, std::optional<FormatErrorKind>& err) {
    if ((err = expect_open_bracket())) return std::nullopt;
    if ((err = skip_space())) return std::nullopt;
    std::string word;
    while (pos_ < line_.size() &&
           std::isalpha(static_cast<unsigned char>(line_[pos_])))
      word.push_back(line_[pos_++]);
    if (word.empty()) {
      err = bad;
      return std::nullopt;
    }
    if ((err = skip_space())) return std::nullopt;
    if (pos_ >= line_.size() || line_[pos_] != ']') {
      err = bad;
      return std::nullopt;
    }
    ++pos_;
    return word;
  }

  // Payload group: opening '[' through the last ']' on the line.
  std::optional<std::string> read_payload_group(
      std::optional<FormatErrorKind>& err) {
    if ((err = expect_open_bracket())) return std::nullopt;
    size_t close = line_.rfind(']');
    if (close == std::string_view::npos || close < pos_) {
      err = FormatErrorKind::arity;
      return std::nullopt;
    }
    std::string payload(line_.substr(pos_, close - pos_));
    if (payload.find('\n') != std::string::npos ||
        payload.find('\r') != std::string::npos) {
      err = FormatErrorKind::multiline_text;
      return std::nullopt;
    }
    pos_ = close + 1;
    return payload;
  }

  ParseResult finish(Action a) {
    if (!at_end()) return fail(FormatErrorKind::arity);
    return a;
  }

  ParseResult touch_action(Verb verb) {
    std::optional<FormatErrorKind> err;
    auto group = read_number_group(err);
    if (!group) return fail(*err);
    if (group->is_pair) {
      if (verb == Verb::click) return finish(ClickXY{group->first, group->second});
      return finish(LongClickXY{group->first, group->second});
    }
    if (verb == Verb::click) return finish(ClickElem{group->first});
    return finish(LongClickElem{group->first});
  }

  ParseResult text_action() {
    std::optional<FormatErrorKind> err;
    auto target = read_number_group(err);
    if (!target) return fail(*err);
    auto payload = read_payload_group(err);
    if (!payload) return fail(*err);
    if (target->is_pair)
      return finish(TextXY{target->first, target->second, *payload});
    return finish(TextElem{target->first, *payload});
  }

  ParseResult swipe_action() {
    std::optional<FormatErrorKind> err;
    auto first = read_number_group(err);
    if (!first) return fail(*err);
    if (first->is_pair) {
      auto second = read_number_group(err, /*require_pair=*/true);
      if (!second) return fail(*err);
      if (!second->is_pair) return fail(FormatErrorKind::bad_coordinate);
      return finish(SwipeXYXY{first->first, first->second, second->first,
                              second->second});
    }
    auto word = read_word_group(FormatErrorKind::bad_direction, err);
    if (!word) return fail(*err);
    auto dir = direction_from_string(*word);
    if (!dir) return fail(FormatErrorKind::bad_direction);
    return finish(SwipeElem{first->first, *dir});
  }

  ParseResult press_action() {
    std::optional<FormatErrorKind> err;
    auto word = read_word_group(FormatErrorKind::bad_key, err);
    if (!word) return fail(*err);
    auto key = press_key_from_string(*word);
    if (!key) return fail(FormatErrorKind::bad_key);
    return finish(Press{*key});
  }

  std::string_view raw_;
  std::string_view line_;
  size_t pos_ = 0;
};

}  // namespace

ParseResult parse_action(std::string_view line) {
  return Scanner(line).run();
}

std::optional<ValidationFailure> validate(const Action& a,
                                          const UIScreen& screen) {
  auto in_bounds = [&](int x, int y) {
    return x >= 0 && x < screen.width && y >= 0 && y < screen.height;
  };
  auto check_index = [&](int index) -> std::optional<ValidationFailure> {
    if (interactable_at(screen, index) == nullptr)
      return ValidationFailure{ValidationErrorKind::index_out_of_range};
    return std::nullopt;
  };

  if (const auto* v = std::get_if<ClickElem>(&a)) return check_index(v->index);
  if (const auto* v = std::get_if<LongClickElem>(&a))
    return check_index(v->index);
  if (const auto* v = std::get_if<SwipeElem>(&a)) return check_index(v->index);
  if (const auto* v = std::get_if<TextElem>(&a)) {
    if (auto failure = check_index(v->index)) return failure;
    if (!interactable_at(screen, v->index)->editable)
      return ValidationFailure{ValidationErrorKind::not_editable};
    return std::nullopt;
  }
  if (const auto* v = std::get_if<ClickXY>(&a)) {
    if (!in_bounds(v->x, v->y))
      return ValidationFailure{ValidationErrorKind::coord_out_of_bounds};
    return std::nullopt;
  }
  if (const auto* v = std::get_if<LongClickXY>(&a)) {
    if (!in_bounds(v->x, v->y))
      return ValidationFailure{ValidationErrorKind::coord_out_of_bounds};
    return std::nullopt;
  }
  if (const auto* v = std::get_if<TextXY>(&a)) {
    if (!in_bounds(v->x, v->y))
      return ValidationFailure{ValidationErrorKind::coord_out_of_bounds};
    return std::nullopt;
  }
  if (const auto* v = std::get_if<SwipeXYXY>(&a)) {
    if (!in_bounds(v->x1, v->y1) || !in_bounds(v->x2, v->y2))
      return ValidationFailure{ValidationErrorKind::coord_out_of_bounds};
    return std::nullopt;
  }
  return std::nullopt;  // Press
}

std::variant<ExtractedAction, FormatFailure> extract_action(
    std::string_view response) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= response.size()) {
    size_t nl = response.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(response.substr(start));
      break;
    }
    lines.push_back(response.substr(start, nl - start));
    start = nl + 1;
  }

  auto starts_with_verb = [](std::string_view line) {
    size_t p = 0;
    while (p < line.size() &&
           (is_inline_space(line[p]) || line[p] == '\r'))
      ++p;
    std::string word;
    while (p < line.size() && !is_inline_space(line[p]) && line[p] != '[' &&
           line[p] != '\r')
      word.push_back(line[p++]);
    return verb_from_string(word).has_value();
  };

  for (size_t i = lines.size(); i-- > 0;) {
    if (!starts_with_verb(lines[i])) continue;
    std::string thought;
    for (size_t j = 0; j < i; ++j) {
      if (j > 0) thought += '\n';
      thought += std::string(lines[j]);
    }
    std::string action_line(lines[i]);
    // Trim the action line for downstream parsing.
    while (!action_line.empty() &&
           (is_inline_space(action_line.front()) ||
            action_line.front() == '\r'))
      action_line.erase(action_line.begin());
    while (!action_line.empty() &&
           (is_inline_space(action_line.back()) || action_line.back() == '\r'))
      action_line.pop_back();
    return ExtractedAction{std::move(thought), std::move(action_line)};
  }
  return FormatFailure{std::string(response), FormatErrorKind::unknown_verb};
}

const std::vector<ActionSpaceRow>& action_space_rows() {
  static const std::vector<ActionSpaceRow> rows = {
      {"click [elem]", "click the element with the given index"},
      {"longclick [elem]", "long click the element with the given index"},
      {"text [elem] [string]",
       "type the given string into the element with the given index"},
      {"swipe [elem] [dir]",
       "swipe the element in the given direction (up, down, left or right)"},
      {"click [x,y]", "click the (x,y) coordinate on the screen"},
      {"longclick [x,y]", "long click the (x,y) coordinate on the screen"},
      {"text [x,y] [string]", "type the given string at the (x,y) coordinate"},
      {"swipe [x1,y1] [x2,y2]", "swipe from (x1,y1) to (x2,y2)"},
      {"press [back]", "navigate to the previous screen"},
      {"press [home]", "navigate to the Home screen"},
      {"press [restart]", "navigate to the home screen of the app"},
      {"press [wait]", "wait for page rendering and do nothing"},
      {"press [enter]", "send the Enter key event"},
      {"press [stop]", "stop exploration and complete the task"},
  };
  return rows;
}

}  // namespace uinav
