#include "engagekit/evaluator.hpp"

#include <algorithm>
#include <map>

#include "engagekit/errors.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

int keyword_hits(const std::string& text, const Subtopic& s) {
    std::vector<std::string> tokens = tokenize_lower(text);
    int hits = 0;
    for (const auto& kw : s.keywords) hits += count_token_seq(tokens, kw);
    return hits;
}

std::optional<std::string> attribute_turn(const Turn& turn, std::span<const Subtopic> subtopics,
                                          const std::optional<std::string>& prev_attribution) {
    std::vector<std::string> tokens = tokenize_lower(turn.text);
    int best_hits = 0;
    const std::string* best_id = nullptr;
    for (const auto& s : subtopics) {
        int hits = 0;
        for (const auto& kw : s.keywords) hits += count_token_seq(tokens, kw);
        if (hits > best_hits || (hits == best_hits && hits > 0 && best_id &&
                                 s.subtopic_id < *best_id)) {
            best_hits = hits;
            best_id = &s.subtopic_id;
        }
    }
    if (best_id) return *best_id;
    return prev_attribution;  // continuation rule; nullopt when no prior attribution
}

bool is_substantive(const Turn& turn, const Subtopic& s) {
    if (turn.text.find('?') != std::string::npos) return true;
    return keyword_hits(turn.text, s) > 0;
}

int rate_depth(std::span<const Turn> attributed_turns, const Subtopic& subtopic,
               const RubricConfig& rubric) {
    int substantive = 0;
    int total_words = 0;
    bool comparison = false;
    bool reasoning = false;
    bool deep_turn = false;
    for (const auto& turn : attributed_turns) {
        total_words += turn.word_count;
        bool sub = is_substantive(turn, subtopic);
        if (sub) ++substantive;
        if (sub && turn.word_count >= rubric.deep_turn_words) deep_turn = true;
        std::vector<std::string> tokens = tokenize_lower(turn.text);
        for (const auto& m : rubric.comparison_markers)
            if (contains_token_seq(tokens, m)) comparison = true;
        for (const auto& m : rubric.reasoning_markers)
            if (contains_token_seq(tokens, m)) reasoning = true;
    }

    bool explored = substantive >= 2 || comparison;  // "follow-ups or comparisons"
    if (explored && (reasoning || deep_turn)) return 3;
    if (explored) return 2;
    // Touched only via continuation/agent mentions with little text.
    if (substantive == 0 && total_words < rubric.brief_word_limit) return 0;
    return 1;
}

AssessmentSet evaluate_heuristic(const Transcript& t, const std::string& week_id,
                                 std::span<const Subtopic> subtopics,
                                 const RubricConfig& rubric) {
    if (t.week_id != week_id) throw WeekMismatchError(t.week_id, week_id);

    AssessmentSet out;
    out.week_id = week_id;
    out.submission_id = t.submission_id;
    out.backend = Backend::Heuristic;

    std::map<std::string, std::vector<Turn>> grouped;
    std::optional<std::string> prev;
    for (const auto& turn : t.turns) {
        if (turn.role != Role::Student) continue;
        std::optional<std::string> attribution = attribute_turn(turn, subtopics, prev);
        if (attribution) {
            grouped[*attribution].push_back(turn);
            prev = attribution;
        } else {
            out.unattributed_student_turns.push_back(turn.index);
        }
    }

    for (const auto& s : subtopics) {
        auto it = grouped.find(s.subtopic_id);
        if (it == grouped.end()) continue;  // not engaged at all; no entry
        SubtopicAssessment entry;
        entry.subtopic_id = s.subtopic_id;
        entry.depth = rate_depth(it->second, s, rubric);
        for (const auto& turn : it->second) entry.attributed_student_turns.push_back(turn.index);
        out.entries[s.subtopic_id] = std::move(entry);
    }
    return out;
}

}  // namespace engagekit
