#include "engagekit/pipeline.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>

#include "engagekit/errors.hpp"
#include "engagekit/metrics.hpp"
#include "engagekit/report.hpp"
#include "engagekit/sha256.hpp"

namespace engagekit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file_or_throw(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

json outcome_to_json(const SubmissionOutcome& o, const std::string& payload_hash) {
    json j;
    j["submission_id"] = o.submission_id;
    j["payload_hash"] = payload_hash;
    j["status"] = o.dead_letter ? "dead-letter" : "ok";
    j["error"] = o.error;
    j["assessment_key"] = o.assessment_key;
    j["report_key"] = o.report_key;
    j["feedback_key"] = o.feedback_key;
    j["dead_letter_key"] = o.dead_letter_key;
    return j;
}

SubmissionOutcome outcome_from_json(const json& j) {
    SubmissionOutcome o;
    o.submission_id = j.at("submission_id").get<std::string>();
    o.dead_letter = j.at("status").get<std::string>() == "dead-letter";
    o.error = j.value("error", "");
    o.assessment_key = j.value("assessment_key", "");
    o.report_key = j.value("report_key", "");
    o.feedback_key = j.value("feedback_key", "");
    o.dead_letter_key = j.value("dead_letter_key", "");
    o.already_processed = true;
    return o;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& document, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    PipelineConfig cfg;
    if (!j.contains("curriculum")) throw SchemaError("missing field \"curriculum\"", "$");
    cfg.curriculum_path = base_dir / j.at("curriculum").get<std::string>();
    cfg.store_root = base_dir / j.value("store_root", std::string("store"));
    auto backend = backend_from_string(j.value("backend", std::string("heuristic")));
    if (!backend) throw SchemaError("backend must be \"heuristic\" or \"remote\"", "$.backend");
    cfg.backend = *backend;
    if (j.contains("remote")) {
        const json& r = j["remote"];
        cfg.remote.endpoint_url = r.value("endpoint_url", "");
        cfg.remote.model_name = r.value("model_name", "");
        cfg.remote.auth_token_env_var = r.value("auth_token_env_var", "");
        cfg.remote.max_retries = r.value("max_retries", 2);
        cfg.remote.timeout_seconds = r.value("timeout_seconds", 30.0);
        if (cfg.remote.max_retries < 0)
            throw SchemaError("max_retries must be >= 0", "$.remote.max_retries");
        if (cfg.remote.timeout_seconds <= 0)
            throw SchemaError("timeout_seconds must be > 0", "$.remote.timeout_seconds");
    }
    cfg.rubric_prompt = j.value("rubric_prompt", "");
    if (j.contains("rubric")) {
        const json& r = j["rubric"];
        cfg.rubric.brief_word_limit = r.value("brief_word_limit", cfg.rubric.brief_word_limit);
        cfg.rubric.deep_turn_words = r.value("deep_turn_words", cfg.rubric.deep_turn_words);
        if (r.contains("comparison_markers"))
            cfg.rubric.comparison_markers = r["comparison_markers"].get<std::vector<std::string>>();
        if (r.contains("reasoning_markers"))
            cfg.rubric.reasoning_markers = r["reasoning_markers"].get<std::vector<std::string>>();
    }
    cfg.port = j.value("port", 8086);
    if (j.contains("watch_dir")) cfg.watch_dir = base_dir / j.at("watch_dir").get<std::string>();
    cfg.poll_interval_ms = j.value("poll_interval_ms", 500);
    cfg.worker_limit = j.value("worker_limit", 4);
    if (cfg.worker_limit < 1) throw SchemaError("worker_limit must be >= 1", "$.worker_limit");
    return cfg;
}

Pipeline::Pipeline(Curriculum curriculum, PipelineConfig cfg)
    : curriculum_(std::move(curriculum)), cfg_(std::move(cfg)), store_(cfg_.store_root) {
    fs::create_directories(cfg_.store_root / "index");
}

std::string Pipeline::resolve_payload(const std::string& payload_ref) const {
    if (store_.exists(payload_ref)) return store_.get(payload_ref);
    return read_file_or_throw(payload_ref);
}

std::optional<SubmissionOutcome> Pipeline::recorded_outcome(const std::string& submission_id,
                                                            const std::string& payload_hash) {
    fs::path path = cfg_.store_root / "index" / (submission_id + ".json");
    if (!fs::exists(path)) return std::nullopt;
    json j = json::parse(read_file_or_throw(path));
    if (j.at("payload_hash").get<std::string>() != payload_hash)
        throw ConflictError("submission_id " + submission_id +
                            " was already processed with a different payload");
    return outcome_from_json(j);
}

void Pipeline::record_outcome(const SubmissionOutcome& outcome, const std::string& payload_hash) {
    fs::path path = cfg_.store_root / "index" / (outcome.submission_id + ".json");
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << outcome_to_json(outcome, payload_hash).dump(2) << "\n";
    out.close();
    fs::rename(tmp, path);
}

void Pipeline::notify(const NotificationRecord& record) {
    json j;
    j["submission_id"] = record.submission_id;
    j["recipient_pseudonym"] = record.recipient_pseudonym;
    j["report_key"] = record.report_key;
    j["sent_at"] = record.sent_at;
    j["channel"] = record.channel;
    fs::path log = cfg_.store_root / "notifications.jsonl";
    std::ofstream out(log, std::ios::binary | std::ios::app);
    out << j.dump() << "\n";
    std::cerr << "[notify] report " << record.report_key << " for " << record.recipient_pseudonym
              << " (" << record.channel << ")\n";
}

std::vector<NotificationRecord> Pipeline::notifications() const {
    std::vector<NotificationRecord> out;
    fs::path log = cfg_.store_root / "notifications.jsonl";
    if (!fs::exists(log)) return out;
    std::ifstream in(log, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        NotificationRecord r;
        r.submission_id = j.at("submission_id").get<std::string>();
        r.recipient_pseudonym = j.at("recipient_pseudonym").get<std::string>();
        r.report_key = j.at("report_key").get<std::string>();
        r.sent_at = j.at("sent_at").get<std::int64_t>();
        r.channel = j.at("channel").get<std::string>();
        out.push_back(std::move(r));
    }
    return out;
}

SubmissionOutcome Pipeline::dead_letter(const SubmissionEvent& event,
                                        const std::string& payload_hash,
                                        const std::string& error) {
    json j;
    j["schema"] = "dead-letter/v1";
    j["submission_id"] = event.submission_id;
    j["student_pseudonym"] = event.student_pseudonym;
    j["week_id"] = event.week_id;
    j["payload_ref"] = event.payload_ref;
    j["error"] = error;
    SubmissionOutcome outcome;
    outcome.submission_id = event.submission_id;
    outcome.dead_letter = true;
    outcome.error = error;
    outcome.dead_letter_key = store_.put(j.dump(2) + "\n", ArtifactKind::DeadLetter,
                                         Acl::InstructorOnly, event.received_at);
    return outcome;
}

SubmissionOutcome Pipeline::process(const SubmissionEvent& event, const std::string& payload,
                                    const std::string& payload_hash) {
    try {
        const WeekSpec* week = curriculum_.find_week(event.week_id);
        if (!week) throw UnknownWeekError(event.week_id);
        const auto& subtopics = week->subtopics;

        SubmissionMeta meta;
        meta.submission_id = event.submission_id;
        meta.student_pseudonym = event.student_pseudonym;
        meta.week_id = event.week_id;
        meta.submitted_at = event.received_at;
        Transcript t = parse_transcript(payload, event.format, meta);

        AssessmentSet assessment;
        if (cfg_.backend == Backend::Heuristic) {
            assessment = evaluate_heuristic(t, event.week_id, subtopics, cfg_.rubric);
        } else {
            std::string rubric_prompt =
                cfg_.rubric_prompt.empty() ? default_rubric_prompt() : cfg_.rubric_prompt;
            assessment = evaluate_remote(t, subtopics, cfg_.remote, rubric_prompt);
        }

        EngagementReport report = build_report(t, assessment, static_cast<int>(subtopics.size()));
        std::optional<std::int64_t> doc_ts;
        if (event.received_at > 0) doc_ts = event.received_at;
        RenderedDocument feedback = render_student_report(report, *week, doc_ts);

        SubmissionOutcome outcome;
        outcome.submission_id = event.submission_id;
        // Store raw payload alongside the derived artifacts; the raw
        // transcript stays instructor-only.
        store_.put(payload, ArtifactKind::RawTranscript, Acl::InstructorOnly, event.received_at);
        outcome.assessment_key = store_.put(serialize_assessment(assessment),
                                            ArtifactKind::Assessment, Acl::InstructorOnly,
                                            event.received_at);
        outcome.report_key = store_.put(serialize_report(report), ArtifactKind::Report, Acl::Both,
                                        event.received_at);
        outcome.feedback_key = store_.put(feedback.body, ArtifactKind::RenderedReport,
                                          Acl::StudentOnly, event.received_at);

        NotificationRecord note;
        note.submission_id = event.submission_id;
        note.recipient_pseudonym = event.student_pseudonym;
        note.report_key = outcome.feedback_key;
        note.sent_at = event.received_at;  // log channel; deterministic re-runs
        notify(note);
        return outcome;
    } catch (const std::exception& e) {
        return dead_letter(event, payload_hash, e.what());
    }
}

SubmissionOutcome Pipeline::handle_submission(const SubmissionEvent& event) {
    std::string payload;
    try {
        payload = resolve_payload(event.payload_ref);
    } catch (const std::exception& e) {
        std::lock_guard lock(index_mutex_);
        if (auto prior = recorded_outcome(event.submission_id, sha256_hex("")))
            return *prior;
        SubmissionOutcome outcome = dead_letter(event, sha256_hex(""), e.what());
        record_outcome(outcome, sha256_hex(""));
        return outcome;
    }
    std::string payload_hash = sha256_hex(payload);
    {
        std::lock_guard lock(index_mutex_);
        if (auto prior = recorded_outcome(event.submission_id, payload_hash)) return *prior;
    }
    SubmissionOutcome outcome = process(event, payload, payload_hash);
    {
        std::lock_guard lock(index_mutex_);
        record_outcome(outcome, payload_hash);
    }
    return outcome;
}

std::string Pipeline::run_class_aggregation(const std::string& week_id,
                                            const std::optional<std::string>& compare_to) {
    std::vector<EngagementReport> reports;
    for (const auto& artifact : store_.list(ArtifactKind::Report)) {
        EngagementReport r = parse_report(store_.get(artifact.key));
        if (r.week_id == week_id) reports.push_back(std::move(r));
    }
    if (reports.empty()) throw Error("no stored reports for week " + week_id);
    ClassAggregate agg = aggregate_class(reports);

    std::vector<ClassAggregate> aggs;
    std::optional<WeekComparison> cmp;
    if (compare_to) {
        std::vector<EngagementReport> baseline;
        for (const auto& artifact : store_.list(ArtifactKind::Report)) {
            EngagementReport r = parse_report(store_.get(artifact.key));
            if (r.week_id == *compare_to) baseline.push_back(std::move(r));
        }
        if (baseline.empty()) throw Error("no stored reports for baseline week " + *compare_to);
        ClassAggregate base_agg = aggregate_class(baseline);
        cmp = compare_weeks(base_agg, agg);
        aggs.push_back(std::move(base_agg));
    }
    aggs.push_back(agg);

    store_.put(serialize_aggregate(agg), ArtifactKind::ClassReport, Acl::InstructorOnly, 0);
    RenderedDocument doc = render_class_report(aggs, cmp);
    return store_.put(doc.body, ArtifactKind::ClassReport, Acl::InstructorOnly, 0);
}

}  // namespace engagekit
