// SPDX-License-Identifier: Apache-2.0
#include "uinav/probes.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "uinav/action_grammar.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

const char* to_string(KnowledgeDimension d) {
  return d == KnowledgeDimension::goal_understanding ? "goal_understanding"
                                                     : "app_knowledge";
}

namespace {

KnowledgeDimension dimension_from(const std::string& s,
                                  const std::string& origin,
                                  const std::string& path) {
  if (s == "goal_understanding") return KnowledgeDimension::goal_understanding;
  if (s == "app_knowledge") return KnowledgeDimension::app_knowledge;
  schema_fail(origin, path, "unknown dimension: " + s);
}

}  // namespace

std::vector<KnowledgeItem> load_knowledge_items(
    const std::filesystem::path& path) {
  std::string origin = path.filename().string();
  std::vector<json> records =
      parse_jsonl(read_text_file(path), origin, "knowledge");
  std::vector<KnowledgeItem> items;
  std::set<std::string> ids;
  for (size_t i = 0; i < records.size(); ++i) {
    std::string where = "item[" + std::to_string(i) + "]";
    const json& v = records[i];
    KnowledgeItem item;
    item.id = require_string(v, "id", origin, where);
    if (!ids.insert(item.id).second)
      schema_fail(origin, where, "duplicate id " + item.id);
    item.dimension = dimension_from(
        require_string(v, "dimension", origin, where), origin, where);
    std::string kind = require_string(v, "kind", origin, where);
    item.question = require_string(v, "question", origin, where);
    std::string answer = require_string(v, "answer", origin, where);
    if (kind == "mcq") {
      item.is_mcq = true;
      const json& options = require_field(v, "options", origin, where);
      if (!options.is_array() || options.size() < 2 || options.size() > 6)
        schema_fail(origin, where + ".options", "need 2-6 options");
      for (const auto& option : options)
        item.options.push_back(option.get<std::string>());
      if (answer.size() != 1 || answer[0] < 'A' ||
          answer[0] >= char('A' + item.options.size()))
        schema_fail(origin, where + ".answer",
                    "answer label must name an existing option");
      item.answer_label = answer[0];
    } else if (kind == "bq") {
      item.is_mcq = false;
      if (answer == "Yes") item.answer_label = 'Y';
      else if (answer == "No") item.answer_label = 'N';
      else schema_fail(origin, where + ".answer", "must be Yes or No");
    } else {
      schema_fail(origin, where + ".kind", "must be mcq or bq");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<CompletionItem> load_completion_items(
    const std::filesystem::path& path) {
  std::string origin = path.filename().string();
  std::vector<json> records =
      parse_jsonl(read_text_file(path), origin, "completion");
  std::vector<CompletionItem> items;
  for (size_t i = 0; i < records.size(); ++i) {
    std::string where = "item[" + std::to_string(i) + "]";
    const json& v = records[i];
    CompletionItem item;
    item.id = require_string(v, "id", origin, where);
    item.task_id = require_string(v, "task_id", origin, where);
    item.screen_ref = require_string(v, "screen", origin, where);
    std::string label = require_string(v, "label", origin, where);
    if (label == "stop") item.label_stop = true;
    else if (label == "continue") item.label_stop = false;
    else schema_fail(origin, where + ".label", "must be continue or stop");
    if (v.contains("history")) {
      for (const auto& entry : v["history"])
        item.action_history.push_back(entry.get<std::string>());
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<GroundingItem> load_grounding_items(
    const std::filesystem::path& path, const ScreenStore& screens) {
  std::string origin = path.filename().string();
  std::vector<json> records =
      parse_jsonl(read_text_file(path), origin, "grounding");
  std::vector<GroundingItem> items;
  for (size_t i = 0; i < records.size(); ++i) {
    std::string where = "item[" + std::to_string(i) + "]";
    const json& v = records[i];
    GroundingItem item;
    item.id = require_string(v, "id", origin, where);
    item.instruction = require_string(v, "instruction", origin, where);
    item.screen_ref = require_string(v, "screen", origin, where);
    item.screenshot_ref = optional_string(v, "screenshot", origin, where);
    item.gt_verb = require_string(v, "verb", origin, where);
    if (item.gt_verb != "click" && item.gt_verb != "longclick" &&
        item.gt_verb != "text" && item.gt_verb != "swipe")
      schema_fail(origin, where + ".verb", "unknown verb " + item.gt_verb);
    const json& bbox = require_field(v, "bbox", origin, where);
    if (!bbox.is_array() || bbox.size() != 4)
      schema_fail(origin, where + ".bbox", "expected [l, t, r, b]");
    item.gt_bbox = Rect{bbox[0].get<int>(), bbox[1].get<int>(),
                        bbox[2].get<int>(), bbox[3].get<int>()};
    if (!item.gt_bbox.well_formed() || item.gt_bbox.area() <= 0)
      schema_fail(origin, where + ".bbox", "must be non-degenerate");
    auto screen = screens.load(item.screen_ref);
    if (item.gt_bbox.left < 0 || item.gt_bbox.top < 0 ||
        item.gt_bbox.right > screen->width ||
        item.gt_bbox.bottom > screen->height)
      schema_fail(origin, where + ".bbox", "outside the screen bounds");
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<FocusedItem> load_focused_items(
    const std::filesystem::path& path) {
  std::string origin = path.filename().string();
  std::vector<json> records =
      parse_jsonl(read_text_file(path), origin, "focused");
  std::vector<FocusedItem> items;
  for (size_t i = 0; i < records.size(); ++i) {
    std::string where = "item[" + std::to_string(i) + "]";
    const json& v = records[i];
    FocusedItem item;
    item.id = require_string(v, "id", origin, where);
    item.instruction = require_string(v, "instruction", origin, where);
    item.pattern_text = require_string(v, "pattern", origin, where);
    try {
      item.pattern = std::make_shared<const std::regex>(item.pattern_text);
    } catch (const std::regex_error&) {
      schema_fail(origin, where + ".pattern", "regex does not compile");
    }
    // When the instruction embeds a `quoted example`, the pattern must
    // accept it.
    auto open = item.instruction.find('`');
    if (open != std::string::npos) {
      auto close = item.instruction.find('`', open + 1);
      if (close != std::string::npos) {
        std::string example =
            item.instruction.substr(open + 1, close - open - 1);
        if (!std::regex_match(example, *item.pattern))
          schema_fail(origin, where + ".pattern",
                      "pattern rejects the instruction's own example: " +
                          example);
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

namespace {

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// First word-bounded, case-insensitive occurrence of any candidate word;
// returns the candidate index or -1.
int first_word_match(const std::string& text,
                     const std::vector<std::string>& words) {
  for (size_t pos = 0; pos < text.size(); ++pos) {
    for (size_t w = 0; w < words.size(); ++w) {
      const std::string& word = words[w];
      if (pos + word.size() > text.size()) continue;
      bool equal = true;
      for (size_t i = 0; i < word.size() && equal; ++i)
        equal = std::tolower(static_cast<unsigned char>(text[pos + i])) ==
                std::tolower(static_cast<unsigned char>(word[i]));
      if (!equal) continue;
      bool left_ok = pos == 0 || !word_char(text[pos - 1]);
      bool right_ok =
          pos + word.size() == text.size() || !word_char(text[pos + word.size()]);
      if (left_ok && right_ok) return static_cast<int>(w);
    }
  }
  return -1;
}

}  // namespace

char extract_choice_mcq(const std::string& response, int option_count) {
  for (size_t pos = 0; pos < response.size(); ++pos) {
    char c = response[pos];
    char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper < 'A' || upper >= char('A' + option_count)) continue;
    bool left_ok = pos == 0 || !word_char(response[pos - 1]);
    bool right_ok =
        pos + 1 == response.size() || !word_char(response[pos + 1]);
    if (left_ok && right_ok) return upper;
  }
  return '\0';
}

char extract_choice_bq(const std::string& response) {
  int match = first_word_match(response, {"yes", "no"});
  if (match < 0) return '\0';
  return match == 0 ? 'Y' : 'N';
}

char extract_continue_stop(const std::string& response) {
  int match = first_word_match(response, {"continue", "stop"});
  if (match < 0) return '\0';
  return match == 0 ? 'c' : 's';
}

std::string knowledge_format_instruction(const KnowledgeItem& item) {
  if (item.is_mcq)
    return "Answer with the letter of the correct option and nothing else.";
  return "Answer Yes or No and nothing else.";
}

std::string knowledge_prompt(const KnowledgeItem& item) {
  std::string prompt = "Question: " + item.question + "\n";
  if (item.is_mcq) {
    prompt += "Options:\n";
    for (size_t i = 0; i < item.options.size(); ++i) {
      prompt += static_cast<char>('A' + i);
      prompt += ". " + item.options[i] + "\n";
    }
  }
  prompt += "\n" + knowledge_format_instruction(item);
  return prompt;
}

std::string completion_prompt(const CompletionItem& item,
                              const std::string& instruction,
                              const std::string& observation_text) {
  std::string prompt = "Goal: " + instruction + "\n\n";
  if (item.action_history.empty()) {
    prompt += "Actions performed so far: (none)\n";
  } else {
    prompt += "Actions performed so far:\n";
    for (size_t i = 0; i < item.action_history.size(); ++i)
      prompt += std::to_string(i + 1) + ". " + item.action_history[i] + "\n";
  }
  prompt += "\nCurrent screen:\n" + observation_text + "\n\n";
  prompt +=
      "Has the goal been fully completed? Reply with the single word "
      "\"stop\" if it is completed, or \"continue\" if more actions are "
      "needed.";
  return prompt;
}

std::string grounding_prompt(const GroundingItem& item,
                             const std::string& observation_text,
                             ObservationMode mode) {
  std::string prompt = "Instruction: " + item.instruction + "\n\n";
  bool vision = mode == ObservationMode::image ||
                mode == ObservationMode::annotated_image;
  if (vision) {
    prompt += "Current screen: see the attached screenshot.\n\n";
    prompt +=
        "Reply with exactly one action line addressing the target by "
        "coordinates, e.g. `click [120,640]`, `text [120,640] [hello]` or "
        "`swipe [120,640] [120,200]`.";
  } else {
    prompt += "Current screen:\n" + observation_text + "\n\n";
    prompt +=
        "Reply with exactly one action line addressing the target by its "
        "index, e.g. `click [3]`, `text [3] [hello]` or `swipe [3] [down]`.";
  }
  return prompt;
}

std::string repair_prompt(const std::string& format_instruction,
                          const std::string& raw_response) {
  return "The reply below did not follow the required format.\n"
         "Required format: " +
         format_instruction +
         "\nReply:\n" + raw_response +
         "\n\nRewrite the reply so it follows the required format exactly, "
         "preserving its meaning. Output only the corrected reply.";
}

namespace {

ChatRequest text_request(const std::string& prompt) {
  ChatRequest request;
  request.model = "probe";
  ChatMessage user;
  user.role = "user";
  user.text = prompt;
  request.messages.push_back(std::move(user));
  return request;
}

std::string try_complete(Backend& backend, const ChatRequest& request,
                         std::string& error) {
  try {
    return backend.complete(request);
  } catch (const BackendError& e) {
    error = e.what();
    return "";
  }
}

}  // namespace

KnowledgeOutcome score_knowledge(const std::vector<KnowledgeItem>& items,
                                 const std::vector<ProbeRecord>& records) {
  KnowledgeOutcome outcome;
  outcome.records = records;
  int correct_original = 0, correct_repaired = 0;
  int goal_orig = 0, goal_rep = 0, app_orig = 0, app_rep = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const KnowledgeItem& item = items[i];
    ProbeRecord& record = outcome.records[i];

    auto extract = [&](const std::string& raw) -> char {
      return item.is_mcq
                 ? extract_choice_mcq(raw, static_cast<int>(item.options.size()))
                 : extract_choice_bq(raw);
    };
    char original = extract(record.raw);
    record.parsed = original != '\0';
    record.extracted = record.parsed ? std::string(1, original) : "";
    record.correct = record.parsed && original == item.answer_label;

    char repaired = original;
    if (original == '\0' && !record.repaired_raw.empty())
      repaired = extract(record.repaired_raw);
    record.repaired_parsed = repaired != '\0';
    record.repaired_extracted =
        record.repaired_parsed ? std::string(1, repaired) : "";
    record.repaired_correct =
        record.repaired_parsed && repaired == item.answer_label;

    bool is_goal = item.dimension == KnowledgeDimension::goal_understanding;
    (is_goal ? outcome.goal_count : outcome.app_count)++;
    if (record.correct) {
      ++correct_original;
      (is_goal ? goal_orig : app_orig)++;
    }
    if (record.repaired_correct) {
      ++correct_repaired;
      (is_goal ? goal_rep : app_rep)++;
    }
  }
  auto ratio = [](int num, int den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / den;
  };
  outcome.accuracy_original = ratio(correct_original, items.size());
  outcome.accuracy_repaired = ratio(correct_repaired, items.size());
  outcome.goal_original = ratio(goal_orig, outcome.goal_count);
  outcome.goal_repaired = ratio(goal_rep, outcome.goal_count);
  outcome.app_original = ratio(app_orig, outcome.app_count);
  outcome.app_repaired = ratio(app_rep, outcome.app_count);
  return outcome;
}

KnowledgeOutcome run_knowledge(Backend& backend, Backend* repair_backend,
                               const std::vector<KnowledgeItem>& items) {
  std::vector<ProbeRecord> records;
  records.reserve(items.size());
  for (const KnowledgeItem& item : items) {
    ProbeRecord record;
    record.id = item.id;
    record.raw = try_complete(backend, text_request(knowledge_prompt(item)),
                              record.error);
    char extracted =
        item.is_mcq
            ? extract_choice_mcq(record.raw,
                                 static_cast<int>(item.options.size()))
            : extract_choice_bq(record.raw);
    if (extracted == '\0' && repair_backend != nullptr &&
        record.error.empty()) {
      record.repaired_raw = try_complete(
          *repair_backend,
          text_request(repair_prompt(knowledge_format_instruction(item),
                                     record.raw)),
          record.error);
    }
    records.push_back(std::move(record));
  }
  return score_knowledge(items, records);
}

CompletionOutcome score_completion(const std::vector<CompletionItem>& items,
                                   const std::vector<ProbeRecord>& records) {
  CompletionOutcome outcome;
  outcome.records = records;
  std::map<std::string, bool> task_perfect;
  for (size_t i = 0; i < items.size(); ++i) {
    const CompletionItem& item = items[i];
    ProbeRecord& record = outcome.records[i];
    char extracted = extract_continue_stop(record.raw);
    record.parsed = extracted != '\0';
    record.extracted = extracted == 'c'   ? "continue"
                       : extracted == 's' ? "stop"
                                          : "";
    int truth = item.label_stop ? 1 : 0;
    int prediction = extracted == 'c' ? 0 : extracted == 's' ? 1 : 2;
    outcome.confusion[truth][prediction]++;
    record.correct = truth == prediction;
    auto [it, inserted] = task_perfect.emplace(item.task_id, true);
    if (!record.correct) it->second = false;
  }
  int row0 = outcome.confusion[0][0] + outcome.confusion[0][1] +
             outcome.confusion[0][2];
  int row1 = outcome.confusion[1][0] + outcome.confusion[1][1] +
             outcome.confusion[1][2];
  outcome.acc_continue =
      row0 == 0 ? 0.0 : static_cast<double>(outcome.confusion[0][0]) / row0;
  outcome.acc_stop =
      row1 == 0 ? 0.0 : static_cast<double>(outcome.confusion[1][1]) / row1;
  int total = row0 + row1;
  outcome.overall =
      total == 0 ? 0.0
                 : static_cast<double>(outcome.confusion[0][0] +
                                       outcome.confusion[1][1]) /
                       total;
  outcome.task_count = static_cast<int>(task_perfect.size());
  int perfect = 0;
  for (const auto& [task, ok] : task_perfect)
    if (ok) ++perfect;
  outcome.perfect_task_rate =
      outcome.task_count == 0
          ? 0.0
          : static_cast<double>(perfect) / outcome.task_count;
  return outcome;
}

CompletionOutcome run_completion(
    Backend& backend, const std::vector<CompletionItem>& items,
    const ScreenStore& screens, ObservationMode mode,
    const std::map<std::string, std::string>& task_instructions) {
  std::vector<ProbeRecord> records;
  records.reserve(items.size());
  for (const CompletionItem& item : items) {
    ProbeRecord record;
    record.id = item.id;
    auto screen = screens.load(item.screen_ref);
    std::string instruction;
    auto it = task_instructions.find(item.task_id);
    if (it != task_instructions.end()) instruction = it->second;

    ChatRequest request;
    bool vision = mode == ObservationMode::image ||
                  mode == ObservationMode::annotated_image;
    if (vision) {
      Observation obs =
          build_observation(mode, *screen, screens.screenshot(*screen));
      request = text_request(completion_prompt(
          item, instruction, "(see the attached screenshot)"));
      request.messages.back().images.push_back(
          ImagePart{"image/png", obs.image_png});
    } else {
      Observation obs = build_observation(mode, *screen);
      request = text_request(completion_prompt(item, instruction, obs.text));
    }
    record.raw = try_complete(backend, request, record.error);
    records.push_back(std::move(record));
  }
  return score_completion(items, records);
}

std::optional<GroundingPrediction> parse_grounding_prediction(
    const std::string& action_line) {
  ParseResult parsed = parse_action(action_line);
  if (std::holds_alternative<FormatFailure>(parsed)) return std::nullopt;
  const Action& action = std::get<Action>(parsed);
  GroundingPrediction prediction;
  struct Visitor {
    GroundingPrediction& p;
    void operator()(const ClickElem& v) {
      p.verb = "click";
      p.element_index = v.index;
    }
    void operator()(const LongClickElem& v) {
      p.verb = "longclick";
      p.element_index = v.index;
    }
    void operator()(const TextElem& v) {
      p.verb = "text";
      p.element_index = v.index;
    }
    void operator()(const SwipeElem& v) {
      p.verb = "swipe";
      p.element_index = v.index;
    }
    void operator()(const ClickXY& v) {
      p.verb = "click";
      p.point = Point{v.x, v.y};
    }
    void operator()(const LongClickXY& v) {
      p.verb = "longclick";
      p.point = Point{v.x, v.y};
    }
    void operator()(const TextXY& v) {
      p.verb = "text";
      p.point = Point{v.x, v.y};
    }
    void operator()(const SwipeXYXY& v) {
      p.verb = "swipe";
      p.point = Point{v.x1, v.y1};
    }
    void operator()(const Press&) { p.verb = "press"; }
  };
  Visitor visitor{prediction};
  std::visit(visitor, action);
  return prediction;
}

bool grounding_hit(const GroundingPrediction& prediction,
                   const GroundingItem& item, const UIScreen& screen) {
  if (prediction.verb != item.gt_verb) return false;
  if (prediction.element_index) {
    const UINode* node = interactable_at(screen, *prediction.element_index);
    if (node == nullptr) return false;
    return item.gt_bbox.contains(node->bounds.center());
  }
  if (prediction.point) return item.gt_bbox.contains(*prediction.point);
  return false;
}

GroundingOutcome score_grounding(const std::vector<GroundingItem>& items,
                                 const std::vector<ProbeRecord>& records,
                                 const ScreenStore& screens,
                                 ObservationMode mode) {
  (void)mode;
  GroundingOutcome outcome;
  outcome.records = records;
  int hit_original = 0, hit_repaired = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const GroundingItem& item = items[i];
    ProbeRecord& record = outcome.records[i];
    auto screen = screens.load(item.screen_ref);

    auto judge = [&](const std::string& raw, bool& parsed,
                     std::string& extracted) -> bool {
      parsed = false;
      extracted.clear();
      auto picked = extract_action(raw);
      if (std::holds_alternative<FormatFailure>(picked)) return false;
      const std::string& line =
          std::get<ExtractedAction>(picked).action_line;
      auto prediction = parse_grounding_prediction(line);
      if (!prediction) return false;
      parsed = true;
      extracted = line;
      return grounding_hit(*prediction, item, *screen);
    };

    record.correct = judge(record.raw, record.parsed, record.extracted);
    if (!record.parsed) ++outcome.format_errors;

    if (!record.parsed && !record.repaired_raw.empty()) {
      record.repaired_correct = judge(record.repaired_raw,
                                      record.repaired_parsed,
                                      record.repaired_extracted);
    } else {
      record.repaired_parsed = record.parsed;
      record.repaired_extracted = record.extracted;
      record.repaired_correct = record.correct;
    }
    if (record.correct) ++hit_original;
    if (record.repaired_correct) ++hit_repaired;
  }
  outcome.accuracy_original =
      items.empty() ? 0.0 : static_cast<double>(hit_original) / items.size();
  outcome.accuracy_repaired =
      items.empty() ? 0.0 : static_cast<double>(hit_repaired) / items.size();
  return outcome;
}

GroundingOutcome run_grounding(Backend& backend, Backend* repair_backend,
                               const std::vector<GroundingItem>& items,
                               const ScreenStore& screens,
                               ObservationMode mode) {
  std::vector<ProbeRecord> records;
  records.reserve(items.size());
  bool vision = mode == ObservationMode::image ||
                mode == ObservationMode::annotated_image;
  for (const GroundingItem& item : items) {
    ProbeRecord record;
    record.id = item.id;
    auto screen = screens.load(item.screen_ref);

    ChatRequest request;
    if (vision) {
      std::vector<unsigned char> shot;
      if (!item.screenshot_ref.empty())
        shot = read_binary_file(screens.root() / item.screenshot_ref);
      Observation obs = build_observation(mode, *screen, shot);
      request = text_request(grounding_prompt(item, "", mode));
      request.messages.back().images.push_back(
          ImagePart{"image/png", obs.image_png});
    } else {
      Observation obs = build_observation(mode, *screen);
      request = text_request(grounding_prompt(item, obs.text, mode));
    }
    record.raw = try_complete(backend, request, record.error);

    auto picked = extract_action(record.raw);
    bool parses = !std::holds_alternative<FormatFailure>(picked) &&
                  parse_grounding_prediction(
                      std::get<ExtractedAction>(picked).action_line)
                      .has_value();
    if (!parses && repair_backend != nullptr && record.error.empty()) {
      std::string format_instruction =
          vision ? "Reply with exactly one action line of the form "
                   "`<verb> [x,y]`."
                 : "Reply with exactly one action line of the form "
                   "`<verb> [element_index]`.";
      record.repaired_raw = try_complete(
          *repair_backend,
          text_request(repair_prompt(format_instruction, record.raw)),
          record.error);
    }
    records.push_back(std::move(record));
  }
  return score_grounding(items, records, screens, mode);
}

FocusedOutcome score_focused(const std::vector<FocusedItem>& items,
                             const std::vector<ProbeRecord>& records) {
  FocusedOutcome outcome;
  outcome.records = records;
  int violations = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const FocusedItem& item = items[i];
    ProbeRecord& record = outcome.records[i];
    std::string trimmed = record.raw;
    while (!trimmed.empty() &&
           std::isspace(static_cast<unsigned char>(trimmed.front())))
      trimmed.erase(trimmed.begin());
    while (!trimmed.empty() &&
           std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    record.parsed = true;
    record.extracted = trimmed;
    record.correct = std::regex_match(trimmed, *item.pattern);
    if (!record.correct) ++violations;
  }
  outcome.violation_rate =
      items.empty() ? 0.0 : static_cast<double>(violations) / items.size();
  return outcome;
}

FocusedOutcome run_focused(Backend& backend,
                           const std::vector<FocusedItem>& items) {
  std::vector<ProbeRecord> records;
  records.reserve(items.size());
  for (const FocusedItem& item : items) {
    ProbeRecord record;
    record.id = item.id;
    record.raw =
        try_complete(backend, text_request(item.instruction), record.error);
    records.push_back(std::move(record));
  }
  return score_focused(items, records);
}

std::string probe_records_to_jsonl(const std::string& kind,
                                   const std::vector<ProbeRecord>& records) {
  std::ostringstream out;
  json header;
  header["format_version"] = 1;
  header["kind"] = kind;
  out << header.dump() << "\n";
  for (const ProbeRecord& record : records) {
    json v;
    v["id"] = record.id;
    v["raw"] = record.raw;
    v["extracted"] = record.extracted;
    v["parsed"] = record.parsed;
    v["correct"] = record.correct;
    if (!record.repaired_raw.empty()) {
      v["repaired_raw"] = record.repaired_raw;
      v["repaired_extracted"] = record.repaired_extracted;
      v["repaired_parsed"] = record.repaired_parsed;
      v["repaired_correct"] = record.repaired_correct;
    }
    if (!record.error.empty()) v["error"] = record.error;
    out << v.dump() << "\n";
  }
  return out.str();
}

std::vector<ProbeRecord> parse_probe_records(const std::string& jsonl,
                                             const std::string& origin,
                                             const std::string& kind) {
  std::vector<json> rows = parse_jsonl(jsonl, origin, kind);
  std::vector<ProbeRecord> records;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::string where = "record[" + std::to_string(i) + "]";
    const json& v = rows[i];
    ProbeRecord record;
    record.id = require_string(v, "id", origin, where);
    record.raw = optional_string(v, "raw", origin, where);
    record.repaired_raw = optional_string(v, "repaired_raw", origin, where);
    record.error = optional_string(v, "error", origin, where);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace uinav
