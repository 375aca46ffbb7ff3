#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engagekit/assessment.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

// "Actively engaged" means depth >= 1; depth 0 is "Briefly mentioned" and
// does not count toward coverage.
inline constexpr int kEngagedDepthThreshold = 1;

struct SubtopicMetrics {
    int depth = 0;
    double mean_student_words = 0.0;
    int message_count = 0;
};

// One student-week's engagement metrics. avg_topic_depth and the turn-length
// fields are nullopt when the student engaged no subtopics (reports render
// these as an em dash).
struct EngagementReport {
    std::string submission_id;
    std::string student_pseudonym;
    std::string week_id;
    int total_subtopics = 0;
    int engaged_subtopics = 0;
    double topic_coverage = 0.0;  // engaged_subtopics / total_subtopics, exactly
    std::optional<double> avg_topic_depth;            // mean depth over engaged subtopics
    std::optional<double> avg_turn_length_per_topic;  // unweighted mean of per-topic means
    std::optional<double> pooled_turn_length;         // diagnostic: pooled mean over messages
    std::map<std::string, SubtopicMetrics> per_subtopic;
};

inline constexpr std::string_view kReportSchema = "report/v1";

std::string serialize_report(const EngagementReport& r);
EngagementReport parse_report(const std::string& document);

// Fraction of the week's canonical subtopics with depth >= 1. Throws
// std::invalid_argument when total_subtopics is zero or smaller than the
// number of entries.
double topic_coverage(const AssessmentSet& a, int total_subtopics);

// Arithmetic mean of depth over engaged entries only; nullopt when none.
// Averaging over all subtopics instead would cap the result at
// 3 * coverage, which the reported week-two figures (coverage 0.31, mean
// depth 2.06) rule out.
std::optional<double> avg_topic_depth(const AssessmentSet& a);

// For each engaged subtopic the mean word count of its attributed student
// messages, then the unweighted mean of those per-subtopic means.
std::optional<double> avg_turn_length_per_topic(const Transcript& t, const AssessmentSet& a);

EngagementReport build_report(const Transcript& t, const AssessmentSet& a, int total_subtopics);

// Distribution summary of one metric across a class. Quartiles use the
// half-sample rule: median of the lower/upper half, halves excluding the
// middle element for odd n.
struct MetricStats {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

MetricStats summarize(std::vector<double> values);  // values must be nonempty

// Per-week class aggregate: medians (plus min/max/quartiles) across the
// students' reports. Reports with an undefined metric are excluded from that
// metric only.
struct ClassAggregate {
    std::string week_id;
    int n_students = 0;
    std::optional<MetricStats> coverage;
    std::optional<MetricStats> avg_depth;
    std::optional<MetricStats> avg_turn_length;

    double median_coverage() const { return coverage ? coverage->median : 0.0; }
};

inline constexpr std::string_view kAggregateSchema = "aggregate/v1";

std::string serialize_aggregate(const ClassAggregate& agg);
ClassAggregate parse_aggregate(const std::string& document);

// Throws std::invalid_argument on empty input or mixed week ids.
ClassAggregate aggregate_class(const std::vector<EngagementReport>& reports);

// Signed relative change per metric, 100 * (b - a) / a.
struct WeekComparison {
    std::string week_a;
    std::string week_b;
    double pct_change_coverage = 0.0;
    double pct_change_depth = 0.0;
    double pct_change_turn_length = 0.0;
};

// Throws std::invalid_argument when a baseline metric is undefined or zero.
WeekComparison compare_weeks(const ClassAggregate& agg_a, const ClassAggregate& agg_b);

// Nearest-integer percent with explicit sign: "-41%", "+55%", "0%".
std::string format_pct_change(double pct);

}  // namespace engagekit
