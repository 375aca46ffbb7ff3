#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engagekit/curriculum.hpp"
#include "engagekit/metrics.hpp"

namespace engagekit {

enum class DocKind { StudentFeedback, ClassAggregate, WeekComparison };

std::string_view to_string(DocKind kind);

// A rendered feedback or class document: self-contained HTML with inline SVG
// charts, no external references. Deterministic for fixed inputs and a fixed
// (or omitted) timestamp, so documents are golden-file testable.
struct RenderedDocument {
    std::string doc_id;
    DocKind kind = DocKind::StudentFeedback;
    std::string body;                 // well-formed HTML, UTF-8
    std::vector<std::string> charts;  // the inline SVG fragments, in order
    std::optional<std::int64_t> created_at;

    std::string filename() const { return doc_id + ".html"; }
};

// Chart geometry shared by the renderer and anyone verifying bar heights:
// bar height = value / max(values) * kChartPlotHeight, computed in double
// precision and printed with shortest round-trip formatting.
inline constexpr double kChartPlotHeight = 160.0;

// Self-contained SVG bar chart. Bars are proportional to values; the maximum
// value spans the plot height. Throws std::invalid_argument on length
// mismatch or negative values. Empty input yields a valid empty-axes chart.
std::string chart_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                       const std::string& axis_title);

// Per-student feedback document: headline metrics, per-subtopic table with
// the rubric depth wording, a coverage chart and a depth-per-subtopic chart.
// Throws WeekMismatchError when r.week_id != week.week_id.
RenderedDocument render_student_report(const EngagementReport& r, const WeekSpec& week,
                                       std::optional<std::int64_t> created_at = std::nullopt);

// Class-level document: per-week median bar charts for the three metrics,
// aggregate statistics, and percent-change callouts when a comparison is
// given.
RenderedDocument render_class_report(const std::vector<ClassAggregate>& aggs,
                                     const std::optional<WeekComparison>& cmp = std::nullopt,
                                     std::optional<std::int64_t> created_at = std::nullopt);

}  // namespace engagekit
