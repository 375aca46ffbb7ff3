#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "engagekit/curriculum.hpp"
#include "engagekit/metrics.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

// Parameters for a synthetic transcript with planted ground truth. The
// generator targets the heuristic rubric, so recovery is exact by
// construction; it makes no claim of simulating real student behavior.
struct SynthSpec {
    std::uint64_t seed = 0;
    std::string week_id;
    double target_coverage = 0.0;
    // Engaged-subtopic counts per planted depth (keys 1..3).
    std::map<int, int> depth_histogram;
    double words_mean = 12.0;
    double words_spread = 4.0;
    // Student messages emitted per engaged subtopic, per planted depth
    // (keys 1..3). Must be rubric-consistent: >= 1 for depth 1, >= 2 for
    // depths 2 and 3.
    std::map<int, int> messages_per_engaged_subtopic = {{1, 1}, {2, 2}, {3, 2}};
};

inline constexpr std::string_view kSynthSchema = "synth/v1";

SynthSpec parse_synth_spec(const std::string& document);
std::string serialize_synth_spec(const SynthSpec& spec);

struct SynthResult {
    Transcript transcript;
    EngagementReport planted;  // ground truth computed from the plant itself
};

// Deterministically (seeded) selects engaged subtopics and emits student
// turns built from each subtopic's own keywords plus rubric-trigger
// phrases, so the heuristic evaluator provably assigns the planted depth.
// The planted report is computed directly from the construction, not
// through the evaluator. Throws InfeasibleSpecError when the histogram
// exceeds the subtopic count, disagrees with target_coverage, or no
// unambiguous keyword exists for a selected subtopic.
SynthResult generate_transcript(const SynthSpec& spec, std::span<const Subtopic> subtopics);

// generate -> evaluate_heuristic -> build_report, compared to the plant.
// Contract: coverage and per-subtopic depths recover exactly; turn length
// within one word.
struct RecoveryResult {
    EngagementReport planted;
    EngagementReport recovered;
    double coverage_delta = 0.0;
    int max_depth_delta = 0;        // max |planted - recovered| over subtopics
    double avg_depth_delta = 0.0;
    double turn_length_delta = 0.0;

    bool exact() const {
        return coverage_delta == 0.0 && max_depth_delta == 0 && avg_depth_delta == 0.0 &&
               turn_length_delta <= 1.0 && turn_length_delta >= -1.0;
    }
};

RecoveryResult recovery_check(const SynthSpec& spec, std::span<const Subtopic> subtopics);

}  // namespace engagekit
