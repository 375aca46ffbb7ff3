#include "engagekit/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "engagekit/errors.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

namespace {

// Chart geometry. Bar heights are fractions of kChartPlotHeight; everything
// else is fixed so output stays byte-stable.
constexpr double kMarginLeft = 46.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 34.0;
constexpr double kBarWidth = 56.0;
constexpr double kBarGap = 26.0;
constexpr double kMarginRight = 12.0;

std::string pct_int(double fraction) {
    return std::to_string(std::lround(fraction * 100.0)) + "%";
}

std::string opt_fixed2(const std::optional<double>& v, const char* suffix = "") {
    if (!v) return "&#8212;";  // em dash: undefined metric
    return format_fixed2(*v) + suffix;
}

void open_html(std::string& b, const std::string& title) {
    b += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>";
    b += html_escape(title);
    b += "</title>\n<style>\n";
    b += "body { font-family: sans-serif; margin: 2em; color: #222; }\n";
    b += "table { border-collapse: collapse; margin: 1em 0; }\n";
    b += "th, td { border: 1px solid #bbb; padding: 0.35em 0.7em; text-align: left; }\n";
    b += "th { background: #f0f0f0; }\n";
    b += ".meta { color: #555; }\n";
    b += ".callout { font-size: 1.1em; font-weight: bold; }\n";
    b += "</style>\n</head>\n<body>\n";
}

std::string generated_line(std::optional<std::int64_t> created_at) {
    if (!created_at) return "";
    return "<p class=\"meta\">Generated " + format_utc(*created_at) + "</p>\n";
}

}  // namespace

std::string_view to_string(DocKind kind) {
    switch (kind) {
        case DocKind::StudentFeedback: return "student-feedback";
        case DocKind::ClassAggregate: return "class-aggregate";
        case DocKind::WeekComparison: return "week-comparison";
    }
    return "?";
}

std::string chart_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                       const std::string& axis_title) {
    if (labels.size() != values.size())
        throw std::invalid_argument("chart_bars: labels and values length mismatch");
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("chart_bars: negative value");

    std::size_t n = values.size();
    double plot_w = n == 0 ? kBarGap + kBarWidth : kBarGap + n * (kBarWidth + kBarGap);
    double width = kMarginLeft + plot_w + kMarginRight;
    double height = kMarginTop + kChartPlotHeight + kMarginBottom;
    double max_value = 0.0;
    for (double v : values) max_value = std::max(max_value, v);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
           " " + format_double(height) + "\" role=\"img\">\n";
    svg += "  <title>" + html_escape(axis_title) + "</title>\n";
    svg += "  <text x=\"" + format_double(kMarginLeft) + "\" y=\"16\" font-size=\"13\">" +
           html_escape(axis_title) + "</text>\n";

    double axis_y = kMarginTop + kChartPlotHeight;
    svg += "  <line x1=\"" + format_double(kMarginLeft) + "\" y1=\"" + format_double(kMarginTop) +
           "\" x2=\"" + format_double(kMarginLeft) + "\" y2=\"" + format_double(axis_y) +
           "\" stroke=\"#333\"/>\n";
    svg += "  <line x1=\"" + format_double(kMarginLeft) + "\" y1=\"" + format_double(axis_y) +
           "\" x2=\"" + format_double(kMarginLeft + plot_w) + "\" y2=\"" + format_double(axis_y) +
           "\" stroke=\"#333\"/>\n";

    for (std::size_t i = 0; i < n; ++i) {
        double h = max_value > 0.0 ? values[i] / max_value * kChartPlotHeight : 0.0;
        double x = kMarginLeft + kBarGap + i * (kBarWidth + kBarGap);
        double y = axis_y - h;
        svg += "  <rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) + "\" width=\"" +
               format_double(kBarWidth) + "\" height=\"" + format_double(h) +
               "\" fill=\"#4878a8\"/>\n";
        svg += "  <text x=\"" + format_double(x + kBarWidth / 2) + "\" y=\"" +
               format_double(y - 5) + "\" font-size=\"12\" text-anchor=\"middle\">" +
               format_double(values[i]) + "</text>\n";
        svg += "  <text x=\"" + format_double(x + kBarWidth / 2) + "\" y=\"" +
               format_double(axis_y + 16) + "\" font-size=\"12\" text-anchor=\"middle\">" +
               html_escape(labels[i]) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

RenderedDocument render_student_report(const EngagementReport& r, const WeekSpec& week,
                                       std::optional<std::int64_t> created_at) {
    if (r.week_id != week.week_id) throw WeekMismatchError(r.week_id, week.week_id);

    RenderedDocument doc;
    doc.kind = DocKind::StudentFeedback;
    doc.doc_id = std::string(to_string(doc.kind)) + "-" + r.week_id + "-" + r.submission_id;
    doc.created_at = created_at;

    std::string& b = doc.body;
    open_html(b, "Engagement feedback - " + r.week_id + " - " + r.student_pseudonym);
    b += "<h1>Engagement feedback</h1>\n";
    b += "<p class=\"meta\">Week " + html_escape(r.week_id) + " &#8212; " +
         html_escape(week.topic_title) + " &middot; Student " + html_escape(r.student_pseudonym) +
         " &middot; Submission " + html_escape(r.submission_id) + "</p>\n";
    b += generated_line(created_at);

    b += "<table>\n";
    b += "<tr><th>Topic coverage</th><td>" + pct_int(r.topic_coverage) + " (" +
         std::to_string(r.engaged_subtopics) + " of " + std::to_string(r.total_subtopics) +
         " subtopics)</td></tr>\n";
    b += "<tr><th>Average topic depth</th><td>" + opt_fixed2(r.avg_topic_depth) + "</td></tr>\n";
    b += "<tr><th>Average turn length per topic</th><td>" +
         opt_fixed2(r.avg_turn_length_per_topic, " words") + "</td></tr>\n";
    b += "</table>\n";

    b += "<h2>Subtopics you worked on</h2>\n";
    if (r.per_subtopic.empty()) {
        b += "<p>No subtopics were engaged in this session.</p>\n";
    } else {
        b += "<table>\n<tr><th>Subtopic</th><th>Depth</th><th>Messages</th>"
             "<th>Mean words per message</th></tr>\n";
        for (const auto& s : week.subtopics) {
            auto it = r.per_subtopic.find(s.subtopic_id);
            if (it == r.per_subtopic.end()) continue;
            const SubtopicMetrics& m = it->second;
            b += "<tr><td>" + html_escape(s.title) + "</td><td>" + std::to_string(m.depth) +
                 " &#8212; " + std::string(depth_label(m.depth)) + "</td><td>" +
                 std::to_string(m.message_count) + "</td><td>" +
                 format_fixed2(m.mean_student_words) + "</td></tr>\n";
        }
        b += "</table>\n";
    }

    std::string coverage_chart =
        chart_bars({"engaged", "total"},
                   {static_cast<double>(r.engaged_subtopics),
                    static_cast<double>(r.total_subtopics)},
                   "Subtopic coverage");
    std::vector<std::string> depth_labels;
    std::vector<double> depth_values;
    for (const auto& s : week.subtopics) {
        auto it = r.per_subtopic.find(s.subtopic_id);
        if (it == r.per_subtopic.end()) continue;
        depth_labels.push_back(s.subtopic_id);
        depth_values.push_back(static_cast<double>(it->second.depth));
    }
    std::string depth_chart = chart_bars(depth_labels, depth_values, "Depth per subtopic");

    b += "<h2>Charts</h2>\n";
    b += coverage_chart;
    b += depth_chart;
    b += "</body>\n</html>\n";

    doc.charts.push_back(std::move(coverage_chart));
    doc.charts.push_back(std::move(depth_chart));
    return doc;
}

RenderedDocument render_class_report(const std::vector<ClassAggregate>& aggs,
                                     const std::optional<WeekComparison>& cmp,
                                     std::optional<std::int64_t> created_at) {
    if (aggs.empty()) throw std::invalid_argument("render_class_report: no aggregates");

    RenderedDocument doc;
    doc.kind = cmp ? DocKind::WeekComparison : DocKind::ClassAggregate;
    doc.doc_id = std::string(to_string(doc.kind)) + "-" + aggs.back().week_id + "-class";
    doc.created_at = created_at;

    std::string& b = doc.body;
    open_html(b, "Class engagement report");
    b += "<h1>Class engagement report</h1>\n";
    b += "<p class=\"meta\">Weeks: ";
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        if (i) b += ", ";
        b += html_escape(aggs[i].week_id);
    }
    b += "</p>\n";
    b += generated_line(created_at);

    if (cmp) {
        b += "<p class=\"callout\">Week " + html_escape(cmp->week_a) + " &#8594; week " +
             html_escape(cmp->week_b) + ": coverage " + format_pct_change(cmp->pct_change_coverage) +
             " &middot; topic depth " + format_pct_change(cmp->pct_change_depth) +
             " &middot; turn length " + format_pct_change(cmp->pct_change_turn_length) + "</p>\n";
    }

    std::vector<std::string> week_labels;
    std::vector<double> cov_medians, depth_medians, turn_medians;
    for (const auto& agg : aggs) {
        week_labels.push_back(agg.week_id);
        cov_medians.push_back(agg.coverage ? agg.coverage->median * 100.0 : 0.0);
        depth_medians.push_back(agg.avg_depth ? agg.avg_depth->median : 0.0);
        turn_medians.push_back(agg.avg_turn_length ? agg.avg_turn_length->median : 0.0);
    }
    std::string cov_chart = chart_bars(week_labels, cov_medians, "Median topic coverage (%)");
    std::string depth_chart = chart_bars(week_labels, depth_medians, "Median avg. topic depth");
    std::string turn_chart =
        chart_bars(week_labels, turn_medians, "Median avg. turn length per topic (words)");

    b += "<h2>Median engagement metrics per week</h2>\n";
    b += cov_chart;
    b += depth_chart;
    b += turn_chart;

    b += "<h2>Distribution</h2>\n";
    b += "<table>\n<tr><th>Week</th><th>Students</th><th>Metric</th><th>Median</th>"
         "<th>Q1</th><th>Q3</th><th>Min</th><th>Max</th></tr>\n";
    auto stat_row = [&](const std::string& week, int n, const char* metric,
                        const std::optional<MetricStats>& s, bool as_pct) {
        b += "<tr><td>" + html_escape(week) + "</td><td>" + std::to_string(n) + "</td><td>" +
             metric + "</td>";
        if (!s) {
            b += "<td>&#8212;</td><td>&#8212;</td><td>&#8212;</td><td>&#8212;</td>"
                 "<td>&#8212;</td></tr>\n";
            return;
        }
        auto fmt = [&](double v) { return as_pct ? pct_int(v) : format_fixed2(v); };
        b += "<td>" + fmt(s->median) + "</td><td>" + fmt(s->q1) + "</td><td>" + fmt(s->q3) +
             "</td><td>" + fmt(s->min) + "</td><td>" + fmt(s->max) + "</td></tr>\n";
    };
    for (const auto& agg : aggs) {
        stat_row(agg.week_id, agg.n_students, "Topic coverage", agg.coverage, true);
        stat_row(agg.week_id, agg.n_students, "Avg. topic depth", agg.avg_depth, false);
        stat_row(agg.week_id, agg.n_students, "Avg. turn length", agg.avg_turn_length, false);
    }
    b += "</table>\n";
    b += "</body>\n</html>\n";

    doc.charts.push_back(std::move(cov_chart));
    doc.charts.push_back(std::move(depth_chart));
    doc.charts.push_back(std::move(turn_chart));
    return doc;
}

}  // namespace engagekit
