#include "engagekit/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "engagekit/errors.hpp"

namespace engagekit {

using nlohmann::json;

namespace {

double median_sorted(const std::vector<double>& v, std::size_t begin, std::size_t end) {
    std::size_t n = end - begin;
    std::size_t mid = begin + n / 2;
    if (n % 2 == 1) return v[mid];
    return (v[mid - 1] + v[mid]) / 2.0;
}

json stats_to_json(const std::optional<MetricStats>& s) {
    if (!s) return nullptr;
    json j;
    j["median"] = s->median;
    j["min"] = s->min;
    j["max"] = s->max;
    j["q1"] = s->q1;
    j["q3"] = s->q3;
    return j;
}

std::optional<MetricStats> stats_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    MetricStats s;
    s.median = j.at("median").get<double>();
    s.min = j.at("min").get<double>();
    s.max = j.at("max").get<double>();
    s.q1 = j.at("q1").get<double>();
    s.q3 = j.at("q3").get<double>();
    return s;
}

json opt_to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

double topic_coverage(const AssessmentSet& a, int total_subtopics) {
    if (total_subtopics <= 0)
        throw std::invalid_argument("total_subtopics must be positive");
    if (static_cast<int>(a.entries.size()) > total_subtopics)
        throw std::invalid_argument("assessment has more entries than total_subtopics");
    return static_cast<double>(a.engaged_count()) / total_subtopics;
}

std::optional<double> avg_topic_depth(const AssessmentSet& a) {
    int engaged = 0;
    int depth_sum = 0;
    for (const auto& [id, entry] : a.entries) {
        if (entry.depth < kEngagedDepthThreshold) continue;
        ++engaged;
        depth_sum += entry.depth;
    }
    if (engaged == 0) return std::nullopt;
    return static_cast<double>(depth_sum) / engaged;
}

std::optional<double> avg_turn_length_per_topic(const Transcript& t, const AssessmentSet& a) {
    double sum_of_means = 0.0;
    int engaged = 0;
    for (const auto& [id, entry] : a.entries) {
        if (entry.depth < kEngagedDepthThreshold) continue;
        if (entry.attributed_student_turns.empty()) continue;
        long words = 0;
        for (int idx : entry.attributed_student_turns) words += t.turns.at(idx).word_count;
        sum_of_means += static_cast<double>(words) / entry.attributed_student_turns.size();
        ++engaged;
    }
    if (engaged == 0) return std::nullopt;
    return sum_of_means / engaged;
}

EngagementReport build_report(const Transcript& t, const AssessmentSet& a, int total_subtopics) {
    EngagementReport r;
    r.submission_id = t.submission_id;
    r.student_pseudonym = t.student_pseudonym;
    r.week_id = t.week_id;
    r.total_subtopics = total_subtopics;
    r.engaged_subtopics = a.engaged_count();
    r.topic_coverage = topic_coverage(a, total_subtopics);
    r.avg_topic_depth = avg_topic_depth(a);
    r.avg_turn_length_per_topic = avg_turn_length_per_topic(t, a);

    long pooled_words = 0;
    long pooled_messages = 0;
    for (const auto& [id, entry] : a.entries) {
        SubtopicMetrics m;
        m.depth = entry.depth;
        m.message_count = static_cast<int>(entry.attributed_student_turns.size());
        long words = 0;
        for (int idx : entry.attributed_student_turns) words += t.turns.at(idx).word_count;
        m.mean_student_words =
            m.message_count > 0 ? static_cast<double>(words) / m.message_count : 0.0;
        r.per_subtopic[id] = m;
        if (entry.depth >= kEngagedDepthThreshold) {
            pooled_words += words;
            pooled_messages += m.message_count;
        }
    }
    if (pooled_messages > 0)
        r.pooled_turn_length = static_cast<double>(pooled_words) / pooled_messages;
    return r;
}

MetricStats summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize requires at least one value");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    MetricStats s;
    s.min = values.front();
    s.max = values.back();
    s.median = median_sorted(values, 0, n);
    std::size_t half = n / 2;
    if (half == 0) {
        s.q1 = s.q3 = s.median;
    } else {
        s.q1 = median_sorted(values, 0, half);
        s.q3 = median_sorted(values, n - half, n);
    }
    return s;
}

ClassAggregate aggregate_class(const std::vector<EngagementReport>& reports) {
    if (reports.empty())
        throw std::invalid_argument("aggregate_class requires at least one report");
    ClassAggregate agg;
    agg.week_id = reports.front().week_id;
    agg.n_students = static_cast<int>(reports.size());

    std::vector<double> coverages, depths, turn_lengths;
    for (const auto& r : reports) {
        if (r.week_id != agg.week_id)
            throw std::invalid_argument("aggregate_class: reports span multiple weeks (" +
                                        agg.week_id + " vs " + r.week_id + ")");
        coverages.push_back(r.topic_coverage);
        if (r.avg_topic_depth) depths.push_back(*r.avg_topic_depth);
        if (r.avg_turn_length_per_topic) turn_lengths.push_back(*r.avg_turn_length_per_topic);
    }
    agg.coverage = summarize(std::move(coverages));
    if (!depths.empty()) agg.avg_depth = summarize(std::move(depths));
    if (!turn_lengths.empty()) agg.avg_turn_length = summarize(std::move(turn_lengths));
    return agg;
}

WeekComparison compare_weeks(const ClassAggregate& agg_a, const ClassAggregate& agg_b) {
    auto change = [](const std::optional<MetricStats>& a, const std::optional<MetricStats>& b,
                     const char* name) {
        if (!a || !b)
            throw std::invalid_argument(std::string("compare_weeks: ") + name + " undefined");
        if (a->median == 0.0)
            throw std::invalid_argument(std::string("compare_weeks: zero baseline for ") + name);
        return 100.0 * (b->median - a->median) / a->median;
    };
    WeekComparison cmp;
    cmp.week_a = agg_a.week_id;
    cmp.week_b = agg_b.week_id;
    cmp.pct_change_coverage = change(agg_a.coverage, agg_b.coverage, "coverage");
    cmp.pct_change_depth = change(agg_a.avg_depth, agg_b.avg_depth, "avg_depth");
    cmp.pct_change_turn_length =
        change(agg_a.avg_turn_length, agg_b.avg_turn_length, "avg_turn_length");
    return cmp;
}

std::string format_pct_change(double pct) {
    long rounded = std::lround(pct);
    if (rounded > 0) return "+" + std::to_string(rounded) + "%";
    return std::to_string(rounded) + "%";
}

std::string serialize_report(const EngagementReport& r) {
    json root;
    root["schema"] = std::string(kReportSchema);
    root["submission_id"] = r.submission_id;
    root["student_pseudonym"] = r.student_pseudonym;
    root["week_id"] = r.week_id;
    root["total_subtopics"] = r.total_subtopics;
    root["engaged_subtopics"] = r.engaged_subtopics;
    root["topic_coverage"] = r.topic_coverage;
    root["avg_topic_depth"] = opt_to_json(r.avg_topic_depth);
    root["avg_turn_length_per_topic"] = opt_to_json(r.avg_turn_length_per_topic);
    root["pooled_turn_length"] = opt_to_json(r.pooled_turn_length);
    root["per_subtopic"] = json::object();
    for (const auto& [id, m] : r.per_subtopic) {
        json jm;
        jm["depth"] = m.depth;
        jm["mean_student_words"] = m.mean_student_words;
        jm["message_count"] = m.message_count;
        root["per_subtopic"][id] = std::move(jm);
    }
    return root.dump(2) + "\n";
}

EngagementReport parse_report(const std::string& document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    if (root.value("schema", "") != kReportSchema)
        throw SchemaError("expected schema report/v1", "$.schema");
    EngagementReport r;
    r.submission_id = root.at("submission_id").get<std::string>();
    r.student_pseudonym = root.at("student_pseudonym").get<std::string>();
    r.week_id = root.at("week_id").get<std::string>();
    r.total_subtopics = root.at("total_subtopics").get<int>();
    r.engaged_subtopics = root.at("engaged_subtopics").get<int>();
    r.topic_coverage = root.at("topic_coverage").get<double>();
    r.avg_topic_depth = opt_from_json(root.at("avg_topic_depth"));
    r.avg_turn_length_per_topic = opt_from_json(root.at("avg_turn_length_per_topic"));
    r.pooled_turn_length = opt_from_json(root.at("pooled_turn_length"));
    for (const auto& [id, jm] : root.at("per_subtopic").items()) {
        SubtopicMetrics m;
        m.depth = jm.at("depth").get<int>();
        m.mean_student_words = jm.at("mean_student_words").get<double>();
        m.message_count = jm.at("message_count").get<int>();
        r.per_subtopic[id] = m;
    }
    return r;
}

std::string serialize_aggregate(const ClassAggregate& agg) {
    json root;
    root["schema"] = std::string(kAggregateSchema);
    root["week_id"] = agg.week_id;
    root["n_students"] = agg.n_students;
    root["coverage"] = stats_to_json(agg.coverage);
    root["avg_depth"] = stats_to_json(agg.avg_depth);
    root["avg_turn_length"] = stats_to_json(agg.avg_turn_length);
    return root.dump(2) + "\n";
}

ClassAggregate parse_aggregate(const std::string& document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    if (root.value("schema", "") != kAggregateSchema)
        throw SchemaError("expected schema aggregate/v1", "$.schema");
    ClassAggregate agg;
    agg.week_id = root.at("week_id").get<std::string>();
    agg.n_students = root.at("n_students").get<int>();
    agg.coverage = stats_from_json(root.at("coverage"));
    agg.avg_depth = stats_from_json(root.at("avg_depth"));
    agg.avg_turn_length = stats_from_json(root.at("avg_turn_length"));
    return agg;
}

}  // namespace engagekit
