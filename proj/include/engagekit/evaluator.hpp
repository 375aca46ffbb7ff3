#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "engagekit/assessment.hpp"
#include "engagekit/curriculum.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

// Frozen rubric constants for the deterministic lexical backend. The depth
// rubric gives only the four level labels; these thresholds and marker lists
// pin its mechanical interpretation in one place. Overridable via the
// pipeline config ("rubric" key), never inline.
struct RubricConfig {
    // A subtopic touched only via continuations stays at depth 0 while the
    // attributed text is below this many words in total.
    int brief_word_limit = 8;
    // A substantive turn at or above this many words upgrades depth 2 to 3.
    int deep_turn_words = 25;
    std::vector<std::string> comparison_markers = {"compare", "vs", "versus", "difference",
                                                   "trade-off"};
    std::vector<std::string> reasoning_markers = {"why",     "because", "what if",
                                                  "explain", "reason",  "justify"};
};

// Whole-token keyword occurrences of every keyword of `s` in `text`.
int keyword_hits(const std::string& text, const Subtopic& s);

// Keyword attribution with the continuation rule. Lowercases the turn text,
// counts keyword hits per subtopic, picks the maximum positive count (ties:
// lexicographically smallest subtopic_id). With zero hits everywhere the
// turn inherits `prev_attribution` (the nearest preceding attributed student
// turn's subtopic), or stays unattributed when there is none.
std::optional<std::string> attribute_turn(const Turn& turn, std::span<const Subtopic> subtopics,
                                          const std::optional<std::string>& prev_attribution = {});

// True if the turn carries a direct keyword hit for `s` or a question mark.
bool is_substantive(const Turn& turn, const Subtopic& s);

// Deterministic depth rubric over the student turns attributed to one
// subtopic, in transcript order.
int rate_depth(std::span<const Turn> attributed_turns, const Subtopic& subtopic,
               const RubricConfig& rubric = {});

// The deterministic lexical evaluation backend: attribution in transcript
// order, grouping, depth rating. Pure function of its inputs; identical
// inputs yield byte-identical serialized output. Throws WeekMismatchError
// when t.week_id != week_id.
AssessmentSet evaluate_heuristic(const Transcript& t, const std::string& week_id,
                                 std::span<const Subtopic> subtopics,
                                 const RubricConfig& rubric = {});

}  // namespace engagekit
