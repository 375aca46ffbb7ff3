#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engagekit/curriculum.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

enum class Backend { Heuristic, Remote };

std::string_view to_string(Backend backend);
std::optional<Backend> backend_from_string(std::string_view name);

// Ordinal depth scale (four levels). The labels are the rubric wording
// rendered in reports.
inline constexpr int kMinDepth = 0;
inline constexpr int kMaxDepth = 3;
std::string_view depth_label(int depth);

struct SubtopicAssessment {
    std::string subtopic_id;
    int depth = 0;                             // in [0, 3]
    std::vector<int> attributed_student_turns; // indices of student turns only
    std::vector<std::string> evidence;         // verbatim transcript quotes; may be empty
};

// Structured output of the evaluation engine, one per transcript. Both
// backends produce this; its serialized form is the frozen assessment/v1
// schema. Invariant: attributed indices plus unattributed indices partition
// the student-turn indices of the transcript.
struct AssessmentSet {
    std::string week_id;
    std::string submission_id;
    Backend backend = Backend::Heuristic;
    std::map<std::string, SubtopicAssessment> entries;  // keyed by subtopic_id
    std::vector<int> unattributed_student_turns;

    int engaged_count() const;  // entries with depth >= 1
};

inline constexpr std::string_view kAssessmentSchema = "assessment/v1";

std::string serialize_assessment(const AssessmentSet& a);

// Strict schema validation of an assessment/v1 document against the
// transcript it claims to describe and the week's subtopic list. Returns
// every violation found (empty = conformant). Never coerces.
std::vector<std::string> validate_assessment_json(const std::string& document,
                                                  const Transcript& t,
                                                  const std::vector<Subtopic>& subtopics);

// Parse a document that validate_assessment_json accepted.
AssessmentSet parse_assessment(const std::string& document);

}  // namespace engagekit
