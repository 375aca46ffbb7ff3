#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace engagekit {

// Bloom's taxonomy cognitive-complexity levels, lowest to highest.
enum class BloomLevel { Remember, Understand, Apply, Analyze, Evaluate, Create };

std::string_view to_string(BloomLevel level);
std::optional<BloomLevel> bloom_from_string(std::string_view name);

struct Subtopic {
    std::string subtopic_id;
    std::string title;
    std::vector<std::string> keywords;  // lowercase, nonempty
    std::string learning_outcome;
    BloomLevel bloom_level = BloomLevel::Understand;
    bool tutorial_only = false;
};

struct WeekSpec {
    std::string week_id;
    std::string topic_title;
    std::vector<Subtopic> subtopics;
    std::vector<std::string> starter_prompts;
    std::optional<std::string> prev_week_id;
    std::optional<std::string> next_week_id;
};

struct ModuleSpec {
    std::string module_id;
    std::string title;
    std::vector<WeekSpec> weeks;
};

// The course knowledge model every other module consumes. Immutable after
// parsing; safe to share across concurrent evaluations.
struct Curriculum {
    std::string course_id;
    std::string title;
    std::vector<ModuleSpec> modules;

    const WeekSpec* find_week(std::string_view week_id) const;
};

// One invariant violation; `path` locates the offending field.
struct Violation {
    std::string path;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

// Parse the curriculum JSON document (format frozen in docs/formats.md).
// Throws SyntaxError on malformed JSON and SchemaError on missing fields,
// duplicate ids or unknown bloom levels. The returned value also satisfies
// validate_curriculum() == empty.
Curriculum parse_curriculum(std::string_view document);

// Inverse of parse_curriculum for valid values: parse(serialize(c)) == c.
std::string serialize_curriculum(const Curriculum& c);

// Every invariant violation, with a path per finding; empty means valid.
// Violations are data, not errors: this never throws.
ValidationReport validate_curriculum(const Curriculum& c);

// The week's subtopics in declaration order, tutorial_only ones included.
// Throws UnknownWeekError.
const std::vector<Subtopic>& subtopics_for_week(const Curriculum& c, std::string_view week_id);

}  // namespace engagekit
