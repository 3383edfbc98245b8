// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "uinav/backend.hpp"
#include "uinav/geometry.hpp"
#include "uinav/observation.hpp"
#include "uinav/screen_store.hpp"

namespace uinav {

enum class KnowledgeDimension { goal_understanding, app_knowledge };

const char* to_string(KnowledgeDimension d);

// MCQ (2-6 options labeled A..F) or BQ (Yes/No) probe item.
struct KnowledgeItem {
  std::string id;
  KnowledgeDimension dimension = KnowledgeDimension::goal_understanding;
  bool is_mcq = true;
  std::string question;
  std::vector<std::string> options;  // MCQ only
  char answer_label = 'A';           // MCQ: 'A'..'F'; BQ: 'Y' or 'N'
};

struct CompletionItem {
  std::string id;
  std::string task_id;
  std::vector<std::string> action_history;  // rendered action strings
  std::string screen_ref;
  bool label_stop = false;  // true only for the task's final step
};

struct GroundingItem {
  std::string id;
  std::string instruction;
  std::string screen_ref;
  std::string screenshot_ref;
  Rect gt_bbox;
  std::string gt_verb;  // click | longclick | text | swipe
};

struct FocusedItem {
  std::string id;
  std::string instruction;          // the full (and only) prompt text
  std::string pattern_text;         // anchored compliance pattern
  std::shared_ptr<const std::regex> pattern;
};

std::vector<KnowledgeItem> load_knowledge_items(
    const std::filesystem::path& path);
std::vector<CompletionItem> load_completion_items(
    const std::filesystem::path& path);
std::vector<GroundingItem> load_grounding_items(
    const std::filesystem::path& path, const ScreenStore& screens);
std::vector<FocusedItem> load_focused_items(const std::filesystem::path& path);

// Lenient first-match answer extraction: the first word-bounded option
// letter within range (MCQ) or yes/no (BQ), case-insensitive.
// '\0' = unparsed.
char extract_choice_mcq(const std::string& response, int option_count);
char extract_choice_bq(const std::string& response);  // 'Y', 'N' or '\0'
// First word-bounded continue/stop; '\0' = unparsed.
char extract_continue_stop(const std::string& response);

struct ProbeRecord {
  std::string id;
  std::string raw;
  std::string extracted;           // normalized answer, empty when unparsed
  bool parsed = false;
  bool correct = false;
  std::string repaired_raw;        // empty when no repair hop ran
  std::string repaired_extracted;
  bool repaired_parsed = false;
  bool repaired_correct = false;
  std::string error;               // backend error note
};

struct KnowledgeOutcome {
  std::vector<ProbeRecord> records;
  double accuracy_original = 0.0;
  double accuracy_repaired = 0.0;  // == original when no repair backend
  // Split by probed dimension.
  double goal_original = 0.0, goal_repaired = 0.0;
  double app_original = 0.0, app_repaired = 0.0;
  int goal_count = 0, app_count = 0;
};

KnowledgeOutcome run_knowledge(Backend& backend, Backend* repair_backend,
                               const std::vector<KnowledgeItem>& items);
// Pure re-score over recorded raw responses (same extraction pipeline).
KnowledgeOutcome score_knowledge(const std::vector<KnowledgeItem>& items,
                                 const std::vector<ProbeRecord>& records);

struct CompletionOutcome {
  std::vector<ProbeRecord> records;
  // confusion[truth][prediction]; 0 = continue, 1 = stop, 2 = unparsed.
  std::array<std::array<int, 3>, 2> confusion{};
  double acc_continue = 0.0;
  double acc_stop = 0.0;
  double overall = 0.0;
  // Fraction of tasks with every step judged correctly (unweighted).
  double perfect_task_rate = 0.0;
  int task_count = 0;
};

CompletionOutcome run_completion(
    Backend& backend, const std::vector<CompletionItem>& items,
    const ScreenStore& screens, ObservationMode mode,
    const std::map<std::string, std::string>& task_instructions);
CompletionOutcome score_completion(const std::vector<CompletionItem>& items,
                                   const std::vector<ProbeRecord>& records);

// A grounding prediction is a parsed action line: element-addressed in text
// mode, coordinate in vision mode.
struct GroundingPrediction {
  std::string verb;
  std::optional<int> element_index;
  std::optional<Point> point;
};

std::optional<GroundingPrediction> parse_grounding_prediction(
    const std::string& action_line);

// Hit iff the verb matches and the predicted target (element center or
// point) lies inside the ground-truth box, half-open on right/bottom.
bool grounding_hit(const GroundingPrediction& prediction,
                   const GroundingItem& item, const UIScreen& screen);

struct GroundingOutcome {
  std::vector<ProbeRecord> records;
  double accuracy_original = 0.0;
  double accuracy_repaired = 0.0;
  int format_errors = 0;
};

GroundingOutcome run_grounding(Backend& backend, Backend* repair_backend,
                               const std::vector<GroundingItem>& items,
                               const ScreenStore& screens,
                               ObservationMode mode);
GroundingOutcome score_grounding(const std::vector<GroundingItem>& items,
                                 const std::vector<ProbeRecord>& records,
                                 const ScreenStore& screens,
                                 ObservationMode mode);

struct FocusedOutcome {
  std::vector<ProbeRecord> records;  // correct == compliant
  double violation_rate = 0.0;
};

FocusedOutcome run_focused(Backend& backend,
                           const std::vector<FocusedItem>& items);
FocusedOutcome score_focused(const std::vector<FocusedItem>& items,
                             const std::vector<ProbeRecord>& records);

// Prompt builders (shared by runners and the repair pass so that original
// and repaired scoring use identical format instructions).
std::string knowledge_prompt(const KnowledgeItem& item);
std::string knowledge_format_instruction(const KnowledgeItem& item);
std::string completion_prompt(const CompletionItem& item,
                              const std::string& instruction,
                              const std::string& observation_text);
std::string grounding_prompt(const GroundingItem& item,
                             const std::string& observation_text,
                             ObservationMode mode);
std::string repair_prompt(const std::string& format_instruction,
                          const std::string& raw_response);

std::string probe_records_to_jsonl(const std::string& kind,
                                   const std::vector<ProbeRecord>& records);
std::vector<ProbeRecord> parse_probe_records(const std::string& jsonl,
                                             const std::string& origin,
                                             const std::string& kind);

}  // namespace uinav
