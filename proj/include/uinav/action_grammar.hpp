// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uinav/action.hpp"
#include "uinav/ui_screen.hpp"

namespace uinav {

enum class FormatErrorKind {
  unknown_verb,
  arity,
  bad_index_literal,
  bad_coordinate,
  bad_direction,
  bad_key,
  multiline_text,
};

const char* to_string(FormatErrorKind k);
std::optional<FormatErrorKind> format_error_kind_from_string(std::string_view);

struct FormatFailure {
  std::string raw;
  FormatErrorKind reason;
  bool operator==(const FormatFailure&) const = default;
};

using ParseResult = std::variant<Action, FormatFailure>;

// Total over arbitrary byte strings. Verbs, directions and press keys are
// case-insensitive; whitespace between tokens is ignored. The text payload
// runs from its opening '[' to the last ']' on the line, so payloads may
// contain brackets.
ParseResult parse_action(std::string_view line);

enum class ValidationErrorKind {
  index_out_of_range,
  not_editable,
  coord_out_of_bounds,
};

const char* to_string(ValidationErrorKind k);

struct ValidationFailure {
  ValidationErrorKind reason;
  bool operator==(const ValidationFailure&) const = default;
};

// Grounds an action against the current screen before execution.
// nullopt = ok.
std::optional<ValidationFailure> validate(const Action& a,
                                          const UIScreen& screen);

struct ExtractedAction {
  std::string thought;
  std::string action_line;
};

// Picks the last line of a model response that begins with a grammar verb;
// everything before that line is the thought.
std::variant<ExtractedAction, FormatFailure> extract_action(
    std::string_view response);

// The grammar rendered one line per action-space row, for prompt assembly.
struct ActionSpaceRow {
  const char* usage;
  const char* description;
};
const std::vector<ActionSpaceRow>& action_space_rows();

}  // namespace uinav
