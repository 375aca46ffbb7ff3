#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <thread>

#include "engagekit/errors.hpp"
#include "engagekit/pipeline.hpp"
#include "engagekit/service.hpp"
#include "test_util.hpp"

using namespace engagekit;
using nlohmann::json;
using testutil::fixture_curriculum;

namespace {

PipelineConfig test_config(const std::filesystem::path& store_root) {
    PipelineConfig cfg;
    cfg.curriculum_path = testutil::fixture_path("curriculum.json");
    cfg.store_root = store_root;
    cfg.backend = Backend::Heuristic;
    cfg.port = 0;  // ephemeral
    cfg.poll_interval_ms = 50;
    cfg.worker_limit = 2;
    return cfg;
}

SubmissionEvent fixture_event(const std::string& id = "sub-0001") {
    SubmissionEvent event;
    event.submission_id = id;
    event.student_pseudonym = "anon-03";
    event.week_id = "w1";
    event.received_at = 1758000000;
    event.payload_ref = testutil::fixture_path("transcript-w1.jsonl").string();
    event.format = TranscriptFormat::CanonicalJsonLines;
    return event;
}

std::size_t count_kind(ArtifactStore& store, ArtifactKind kind) {
    return store.list(kind).size();
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("handle_submission stores the full artifact chain and notifies") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    SubmissionOutcome outcome = pipeline.handle_submission(fixture_event());
    CHECK(!outcome.dead_letter);
    CHECK(!outcome.already_processed);
    CHECK(pipeline.store().exists(outcome.assessment_key));
    CHECK(pipeline.store().exists(outcome.report_key));
    CHECK(pipeline.store().exists(outcome.feedback_key));
    CHECK(count_kind(pipeline.store(), ArtifactKind::RawTranscript) == 1);
    CHECK(count_kind(pipeline.store(), ArtifactKind::Assessment) == 1);
    CHECK(count_kind(pipeline.store(), ArtifactKind::Report) == 1);
    CHECK(count_kind(pipeline.store(), ArtifactKind::RenderedReport) == 1);

    auto notes = pipeline.notifications();
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].recipient_pseudonym == "anon-03");
    CHECK(notes[0].report_key == outcome.feedback_key);
    CHECK(pipeline.store().exists(notes[0].report_key));

    EngagementReport r = parse_report(pipeline.store().get(outcome.report_key));
    CHECK(r.topic_coverage == 0.15);
}

TEST_CASE("re-delivery with identical payload returns recorded keys, store unchanged") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    SubmissionOutcome first = pipeline.handle_submission(fixture_event());
    std::size_t objects = pipeline.store().object_count();
    for (int i = 0; i < 4; ++i) {
        SubmissionOutcome again = pipeline.handle_submission(fixture_event());
        CHECK(again.already_processed);
        CHECK(again.report_key == first.report_key);
        CHECK(again.assessment_key == first.assessment_key);
    }
    CHECK(pipeline.store().object_count() == objects);
    CHECK(pipeline.notifications().size() == 1);  // notified exactly once
}

TEST_CASE("same submission_id with a different payload is a conflict") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    pipeline.handle_submission(fixture_event());
    SubmissionEvent tampered = fixture_event();
    tampered.payload_ref = testutil::fixture_path("transcript-w2-plain.txt").string();
    tampered.format = TranscriptFormat::PlainTextExport;
    CHECK_THROWS_AS(pipeline.handle_submission(tampered), ConflictError);
}

TEST_CASE("unknown week dead-letters instead of dropping") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    SubmissionEvent event = fixture_event("sub-unknown-week");
    event.week_id = "w99";
    SubmissionOutcome outcome = pipeline.handle_submission(event);
    CHECK(outcome.dead_letter);
    CHECK(outcome.error.find("w99") != std::string::npos);
    REQUIRE(count_kind(pipeline.store(), ArtifactKind::DeadLetter) == 1);
    CHECK(count_kind(pipeline.store(), ArtifactKind::Report) == 0);
    json dl = json::parse(pipeline.store().get(outcome.dead_letter_key));
    CHECK(dl["submission_id"] == "sub-unknown-week");
}

TEST_CASE("parse failures dead-letter with the parser's message") {
    testutil::TempDir dir;
    std::filesystem::path bad = dir.path / "bad.jsonl";
    std::ofstream(bad) << "\n\n\n";
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    SubmissionEvent event = fixture_event("sub-bad");
    event.payload_ref = bad.string();
    SubmissionOutcome outcome = pipeline.handle_submission(event);
    CHECK(outcome.dead_letter);
    CHECK(outcome.error.find("zero turns") != std::string::npos);
}

TEST_CASE("submissions = reports + dead letters") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    pipeline.handle_submission(fixture_event("s1"));
    SubmissionEvent bad = fixture_event("s2");
    bad.week_id = "w99";
    pipeline.handle_submission(bad);
    SubmissionEvent other = fixture_event("s3");
    other.payload_ref = testutil::fixture_path("transcript-w2-plain.txt").string();
    other.format = TranscriptFormat::PlainTextExport;
    other.week_id = "w2";
    pipeline.handle_submission(other);
    CHECK(count_kind(pipeline.store(), ArtifactKind::Report) +
              count_kind(pipeline.store(), ArtifactKind::DeadLetter) ==
          3);
}

TEST_CASE("class aggregation over stored reports, deterministic re-run") {
    testutil::TempDir dir;
    Pipeline pipeline(fixture_curriculum(), test_config(dir.path / "store"));
    // three students, same transcript content shifted by pseudonym
    for (int i = 0; i < 3; ++i) {
        SubmissionEvent event = fixture_event("sub-agg-" + std::to_string(i));
        event.student_pseudonym = "anon-" + std::to_string(i);
        pipeline.handle_submission(event);
    }
    std::string key = pipeline.run_class_aggregation("w1");
    CHECK(pipeline.store().exists(key));
    auto meta = pipeline.store().meta(key);
    REQUIRE(meta);
    CHECK(meta->kind == ArtifactKind::ClassReport);
    CHECK(meta->acl == Acl::InstructorOnly);

    std::string again = pipeline.run_class_aggregation("w1");
    CHECK(again == key);  // content-addressed: identical inputs, identical hash

    CHECK_THROWS_AS(pipeline.run_class_aggregation("w4"), Error);
}

TEST_CASE("service: POST /submissions end to end with idempotent re-delivery") {
    testutil::TempDir dir;
    PipelineConfig cfg = test_config(dir.path / "store");
    Pipeline pipeline(fixture_curriculum(), cfg);
    Service service(pipeline, cfg);
    service.start();
    httplib::Client client("127.0.0.1", service.port());

    auto health = client.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);

    std::string payload = testutil::slurp(testutil::fixture_path("transcript-w1.jsonl"));
    httplib::MultipartFormDataItems form = {
        {"student_pseudonym", "anon-03", "", ""},
        {"week_id", "w1", "", ""},
        {"format", "canonical-jsonl", "", ""},
        {"file", payload, "transcript.jsonl", "application/jsonl"},
    };

    std::string report_key;
    std::size_t objects_after_first = 0;
    for (int i = 0; i < 5; ++i) {
        auto res = client.Post("/submissions", form);
        REQUIRE(res);
        REQUIRE(res->status == 200);
        json body = json::parse(res->body);
        CHECK(body["status"] == "ok");
        if (i == 0) {
            report_key = body["report_key"];
            objects_after_first = pipeline.store().object_count();
        } else {
            CHECK(body["report_key"] == report_key);
            CHECK(pipeline.store().object_count() == objects_after_first);
        }
    }
    CHECK(count_kind(pipeline.store(), ArtifactKind::Report) == 1);

    // fetch the rendered report through the service
    json body = json::parse(client.Post("/submissions", form)->body);
    std::string feedback_key = body["feedback_key"];
    auto doc = client.Get("/reports/" + feedback_key);
    REQUIRE(doc);
    CHECK(doc->status == 200);
    CHECK(doc->body.find("<!DOCTYPE html>") == 0);

    service.stop();
}

TEST_CASE("service: malformed uploads get 4xx with the reason") {
    testutil::TempDir dir;
    PipelineConfig cfg = test_config(dir.path / "store");
    Pipeline pipeline(fixture_curriculum(), cfg);
    Service service(pipeline, cfg);
    service.start();
    httplib::Client client("127.0.0.1", service.port());

    httplib::MultipartFormDataItems missing_week = {
        {"student_pseudonym", "anon-03", "", ""},
        {"format", "canonical-jsonl", "", ""},
        {"file", "{}", "t.jsonl", ""},
    };
    auto res = client.Post("/submissions", missing_week);
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["error"] == "missing field week_id");

    httplib::MultipartFormDataItems bad_format = {
        {"student_pseudonym", "anon-03", "", ""},
        {"week_id", "w1", "", ""},
        {"format", "carrier-pigeon", "", ""},
        {"file", "{}", "t.jsonl", ""},
    };
    res = client.Post("/submissions", bad_format);
    REQUIRE(res);
    CHECK(res->status == 400);

    // unknown week dead-letters and reports 422 with exactly one artifact
    std::string payload = testutil::slurp(testutil::fixture_path("transcript-w1.jsonl"));
    httplib::MultipartFormDataItems unknown_week = {
        {"student_pseudonym", "anon-03", "", ""},
        {"week_id", "w99", "", ""},
        {"format", "canonical-jsonl", "", ""},
        {"file", payload, "t.jsonl", ""},
    };
    res = client.Post("/submissions", unknown_week);
    REQUIRE(res);
    CHECK(res->status == 422);
    CHECK(count_kind(pipeline.store(), ArtifactKind::DeadLetter) == 1);

    service.stop();
}

TEST_CASE("service: ACL gates artifact reads by role") {
    testutil::TempDir dir;
    PipelineConfig cfg = test_config(dir.path / "store");
    Pipeline pipeline(fixture_curriculum(), cfg);
    pipeline.handle_submission(fixture_event());
    std::string class_key = pipeline.run_class_aggregation("w1");

    Service service(pipeline, cfg);
    service.start();
    httplib::Client client("127.0.0.1", service.port());

    auto forbidden = client.Get("/reports/" + class_key);  // default role=student
    REQUIRE(forbidden);
    CHECK(forbidden->status == 403);
    auto allowed = client.Get("/reports/" + class_key + "?role=instructor");
    REQUIRE(allowed);
    CHECK(allowed->status == 200);
    auto missing = client.Get("/reports/" + std::string(64, 'e'));
    REQUIRE(missing);
    CHECK(missing->status == 404);

    service.stop();
}

TEST_CASE("service: watch folder ingests submission pairs") {
    testutil::TempDir dir;
    PipelineConfig cfg = test_config(dir.path / "store");
    cfg.watch_dir = dir.path / "inbox";
    std::filesystem::create_directories(*cfg.watch_dir);
    Pipeline pipeline(fixture_curriculum(), cfg);
    Service service(pipeline, cfg);
    service.start();

    std::ofstream(*cfg.watch_dir / "sub-watch-1.txt")
        << testutil::slurp(testutil::fixture_path("transcript-w1.jsonl"));
    std::ofstream(*cfg.watch_dir / "sub-watch-1.meta") << R"({
        "submission_id": "sub-watch-1",
        "student_pseudonym": "anon-11",
        "week_id": "w1",
        "submitted_at": 1758000300,
        "format": "canonical-jsonl"
    })";

    bool processed = false;
    for (int i = 0; i < 100 && !processed; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        processed = count_kind(pipeline.store(), ArtifactKind::Report) == 1;
    }
    CHECK(processed);
    CHECK(std::filesystem::exists(*cfg.watch_dir / "processed" / "sub-watch-1.meta"));
    CHECK(!std::filesystem::exists(*cfg.watch_dir / "sub-watch-1.meta"));

    service.stop();
}

TEST_CASE("pipeline config parses and validates") {
    std::string doc = R"({
        "curriculum": "curriculum.json",
        "store_root": "store",
        "backend": "heuristic",
        "port": 9090,
        "worker_limit": 3,
        "poll_interval_ms": 100,
        "rubric": {"deep_turn_words": 30, "comparison_markers": ["contrast"]},
        "remote": {"endpoint_url": "http://x/v1", "model_name": "m",
                    "auth_token_env_var": "TOK", "max_retries": 1, "timeout_seconds": 2.5}
    })";
    PipelineConfig cfg = parse_pipeline_config(doc, "/base");
    CHECK(cfg.curriculum_path == std::filesystem::path("/base/curriculum.json"));
    CHECK(cfg.port == 9090);
    CHECK(cfg.worker_limit == 3);
    CHECK(cfg.rubric.deep_turn_words == 30);
    CHECK(cfg.rubric.comparison_markers == std::vector<std::string>{"contrast"});
    CHECK(cfg.rubric.brief_word_limit == 8);  // untouched default
    CHECK(cfg.remote.max_retries == 1);
    CHECK(cfg.remote.timeout_seconds == 2.5);
    CHECK_THROWS_AS(parse_pipeline_config("{}", "."), SchemaError);
    CHECK_THROWS_AS(parse_pipeline_config(R"({"curriculum":"c","worker_limit":0})", "."),
                    SchemaError);
}

}  // TEST_SUITE
