#include <doctest.h>

#include "engagekit/errors.hpp"
#include "engagekit/transcript.hpp"
#include "test_util.hpp"

using namespace engagekit;

namespace {

SubmissionMeta meta(const std::string& week = "w1") {
    SubmissionMeta m;
    m.submission_id = "sub-test";
    m.student_pseudonym = "anon-01";
    m.week_id = week;
    m.submitted_at = 100;
    return m;
}

}  // namespace

TEST_SUITE("transcript") {

TEST_CASE("canonical jsonl: three turns, contiguous indices") {
    std::string raw =
        "{\"index\":0,\"role\":\"student\",\"text\":\"hi\"}\n"
        "{\"index\":1,\"role\":\"agent\",\"text\":\"hello\"}\n"
        "{\"index\":2,\"role\":\"student\",\"text\":\"what is a vm?\"}\n";
    Transcript t = parse_transcript(raw, TranscriptFormat::CanonicalJsonLines, meta());
    REQUIRE(t.turns.size() == 3);
    CHECK(t.turns[0].role == Role::Student);
    CHECK(t.turns[1].role == Role::Agent);
    for (int i = 0; i < 3; ++i) CHECK(t.turns[i].index == i);
    CHECK(t.turns[2].word_count == 4);
}

TEST_CASE("plain text export: role prefixes and continuations") {
    std::string raw =
        "Student: what is IaaS\n"
        "Agent: IaaS is infrastructure\n"
        "offered on demand.\n"
        "agent: another agent turn\n";
    Transcript t = parse_transcript(raw, TranscriptFormat::PlainTextExport, meta());
    REQUIRE(t.turns.size() == 3);
    CHECK(t.turns[0].role == Role::Student);
    CHECK(t.turns[0].text == "what is IaaS");
    CHECK(t.turns[1].text == "IaaS is infrastructure\noffered on demand.");
    CHECK(t.turns[2].role == Role::Agent);  // case-insensitive prefix
}

TEST_CASE("normalization trims, drops blank turns and re-indexes") {
    std::string raw =
        "{\"index\":0,\"role\":\"student\",\"text\":\"  padded  \"}\n"
        "{\"index\":1,\"role\":\"agent\",\"text\":\"   \"}\n"
        "{\"index\":2,\"role\":\"student\",\"text\":\"next\"}\n";
    Transcript t = parse_transcript(raw, TranscriptFormat::CanonicalJsonLines, meta());
    REQUIRE(t.turns.size() == 2);
    CHECK(t.turns[0].text == "padded");
    CHECK(t.turns[1].index == 1);
}

TEST_CASE("consecutive same-role turns stay separate") {
    std::string raw =
        "Student: first thought\n"
        "Student: second thought\n";
    Transcript t = parse_transcript(raw, TranscriptFormat::PlainTextExport, meta());
    REQUIRE(t.turns.size() == 2);
    CHECK(t.turns[0].word_count == 2);
    CHECK(t.turns[1].word_count == 2);
}

TEST_CASE("blank input is a zero-turns error") {
    CHECK_THROWS_AS(parse_transcript("\n  \n\n", TranscriptFormat::PlainTextExport, meta()),
                    SyntaxError);
    CHECK_THROWS_AS(parse_transcript("", TranscriptFormat::CanonicalJsonLines, meta()),
                    SyntaxError);
}

TEST_CASE("continuation before any turn reports the line number") {
    try {
        parse_transcript("dangling line\nStudent: hi\n", TranscriptFormat::PlainTextExport,
                         meta());
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line_based);
        CHECK(e.offset == 1);
    }
}

TEST_CASE("undecodable bytes are rejected with the byte offset") {
    std::string raw = "Student: ok\xFF\n";
    try {
        parse_transcript(raw, TranscriptFormat::PlainTextExport, meta());
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 11);
    }
}

TEST_CASE("fixture transcript parses and partitions by role") {
    Transcript t = parse_transcript(testutil::slurp(testutil::fixture_path("transcript-w1.jsonl")),
                                    TranscriptFormat::CanonicalJsonLines,
                                    parse_submission_meta(testutil::slurp(
                                        testutil::fixture_path("transcript-w1.meta"))));
    REQUIRE(t.turns.size() == 12);
    auto students = student_turns(t);
    CHECK(students.size() == 6);
    int agents = 0;
    for (const auto& turn : t.turns) agents += turn.role == Role::Agent ? 1 : 0;
    CHECK(students.size() + agents == t.turns.size());
    CHECK(t.submission_id == "sub-0001");
}

TEST_CASE("normalization is idempotent through serialize_canonical") {
    Transcript t = parse_transcript(testutil::slurp(testutil::fixture_path("transcript-w1.jsonl")),
                                    TranscriptFormat::CanonicalJsonLines, meta());
    std::string once = serialize_canonical(t);
    Transcript t2 = parse_transcript(once, TranscriptFormat::CanonicalJsonLines, meta());
    CHECK(serialize_canonical(t2) == once);
}

TEST_CASE("metadata sidecar round-trips and rejects emails") {
    SubmissionMeta m = meta("w2");
    SubmissionMeta again = parse_submission_meta(serialize_submission_meta(m));
    CHECK(again.submission_id == m.submission_id);
    CHECK(again.submitted_at == 100);
    CHECK_THROWS_AS(
        parse_submission_meta(R"({"submission_id":"s","student_pseudonym":"a@b.edu","week_id":"w1"})"),
        SchemaError);
}

TEST_CASE("all-agent transcript has no student turns") {
    Transcript t = parse_transcript("Agent: a\nAgent: b\n", TranscriptFormat::PlainTextExport,
                                    meta());
    CHECK(student_turns(t).empty());
}

}  // TEST_SUITE
