#include <doctest.h>

#include <set>

#include "engagekit/errors.hpp"
#include "engagekit/evaluator.hpp"
#include "test_util.hpp"

using namespace engagekit;
using testutil::fixture_curriculum;

namespace {

Turn student_turn(int index, const std::string& text) {
    Turn t;
    t.index = index;
    t.role = Role::Student;
    t.text = text;
    t.word_count = word_count(text);
    return t;
}

Subtopic subtopic(const std::string& id, std::vector<std::string> keywords) {
    Subtopic s;
    s.subtopic_id = id;
    s.title = id;
    s.keywords = std::move(keywords);
    s.learning_outcome = "o";
    s.bloom_level = BloomLevel::Understand;
    return s;
}

Transcript transcript_from(const std::vector<std::pair<Role, std::string>>& turns,
                           const std::string& week = "w1") {
    Transcript t;
    t.submission_id = "sub-test";
    t.student_pseudonym = "anon-01";
    t.week_id = week;
    for (const auto& [role, text] : turns) {
        Turn turn;
        turn.index = static_cast<int>(t.turns.size());
        turn.role = role;
        turn.text = text;
        turn.word_count = word_count(text);
        t.turns.push_back(turn);
    }
    return t;
}

}  // namespace

TEST_SUITE("evaluator") {

TEST_CASE("attribute_turn: max keyword hits wins") {
    std::vector<Subtopic> subs = {
        subtopic("vm-hypervisors", {"hypervisor", "type-1", "type-2"}),
        subtopic("containers", {"container"}),
    };
    auto got = attribute_turn(
        student_turn(0, "how does a type-1 hypervisor differ from type-2"), subs);
    CHECK(got == std::optional<std::string>("vm-hypervisors"));
}

TEST_CASE("attribute_turn: continuation inherits previous attribution") {
    std::vector<Subtopic> subs = {subtopic("containers", {"container"})};
    auto got = attribute_turn(student_turn(2, "thanks, continue"), subs,
                              std::optional<std::string>("containers"));
    CHECK(got == std::optional<std::string>("containers"));
}

TEST_CASE("attribute_turn: zero hits and no prior stays unattributed") {
    std::vector<Subtopic> subs = {subtopic("containers", {"container"})};
    CHECK(!attribute_turn(student_turn(0, "hello"), subs));
}

TEST_CASE("attribute_turn: ties break to the lexicographically smallest id") {
    std::vector<Subtopic> subs = {
        subtopic("zeta", {"shared"}),
        subtopic("alpha", {"shared"}),
    };
    CHECK(attribute_turn(student_turn(0, "tell me about shared"), subs) ==
          std::optional<std::string>("alpha"));
}

TEST_CASE("rate_depth: single basic question is depth 1") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::vector<Turn> turns = {student_turn(0, "what is IaaS")};
    CHECK(rate_depth(turns, s) == 1);
}

TEST_CASE("rate_depth: follow-up plus comparison marker is depth 2") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::vector<Turn> turns = {student_turn(0, "what is IaaS"),
                               student_turn(2, "how does IaaS differ vs PaaS")};
    CHECK(rate_depth(turns, s) == 2);
}

TEST_CASE("rate_depth: continuation-only three-word mention is depth 0") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::vector<Turn> turns = {student_turn(4, "go on please")};
    CHECK(rate_depth(turns, s) == 0);
}

TEST_CASE("rate_depth: reasoning marker upgrades to depth 3") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::vector<Turn> turns = {student_turn(0, "what is IaaS"),
                               student_turn(2, "why would IaaS cost less, explain the reason")};
    CHECK(rate_depth(turns, s) == 3);
}

TEST_CASE("rate_depth: a 25-word substantive turn upgrades an explored subtopic") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::string long_text = "iaas";
    for (int i = 0; i < 24; ++i) long_text += " more";
    std::vector<Turn> turns = {student_turn(0, "what is IaaS"), student_turn(2, long_text)};
    CHECK(word_count(long_text) == 25);
    CHECK(rate_depth(turns, s) == 3);
}

TEST_CASE("rate_depth: markers match whole tokens, not substrings") {
    Subtopic s = subtopic("x", {"versatile"});
    // "versatile" must not trigger the "vs" or "versus" markers
    std::vector<Turn> turns = {student_turn(0, "what makes versatile designs versatile")};
    CHECK(rate_depth(turns, s) == 1);
}

TEST_CASE("rate_depth: appending a substantive turn never lowers the rating") {
    Subtopic s = subtopic("iaas", {"iaas"});
    std::vector<std::string> texts = {"what is IaaS", "how is IaaS priced",
                                      "why is IaaS elastic", "compare IaaS again"};
    std::vector<Turn> turns;
    int prev = 0;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        turns.push_back(student_turn(static_cast<int>(2 * i), texts[i]));
        int depth = rate_depth(turns, s);
        CHECK(depth >= prev);
        prev = depth;
    }
}

TEST_CASE("evaluate_heuristic: six-turn fixture touches 2 of 20 subtopics") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = transcript_from({
        {Role::Student, "how does a type-1 hypervisor differ from type-2?"},
        {Role::Agent, "A type-1 hypervisor runs on bare metal."},
        {Role::Student, "and what is a container?"},
        {Role::Agent, "A container shares the host kernel."},
        {Role::Student, "nice, tell me more"},
        {Role::Agent, "Containers start quickly."},
    });
    AssessmentSet a = evaluate_heuristic(t, "w1", subs);
    REQUIRE(a.entries.size() == 2);
    CHECK(a.entries.count("hypervisors") == 1);
    CHECK(a.entries.count("containers-intro") == 1);
    // turn 4 is a continuation of the container thread
    CHECK(a.entries.at("containers-intro").attributed_student_turns ==
          std::vector<int>{2, 4});
    CHECK(a.unattributed_student_turns.empty());
}

TEST_CASE("evaluate_heuristic: empty student side yields empty entries") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = transcript_from({{Role::Agent, "welcome"}});
    AssessmentSet a = evaluate_heuristic(t, "w1", subs);
    CHECK(a.entries.empty());
    CHECK(a.unattributed_student_turns.empty());
}

TEST_CASE("evaluate_heuristic: every student turn lands in exactly one bucket") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = transcript_from({
        {Role::Student, "hello"},
        {Role::Student, "what is a virtual machine?"},
        {Role::Student, "what about a container?"},
        {Role::Student, "go on"},
        {Role::Student, "does docker use runc?"},
    });
    AssessmentSet a = evaluate_heuristic(t, "w1", subs);
    std::set<int> seen(a.unattributed_student_turns.begin(),
                       a.unattributed_student_turns.end());
    std::size_t attributed = 0;
    for (const auto& [id, entry] : a.entries) {
        for (int idx : entry.attributed_student_turns) {
            CHECK(seen.insert(idx).second);
            ++attributed;
        }
    }
    CHECK(seen.size() == a.unattributed_student_turns.size() + attributed);
    CHECK(seen.size() == student_turns(t).size());
}

TEST_CASE("evaluate_heuristic: week mismatch throws") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = transcript_from({{Role::Student, "hi"}}, "w2");
    CHECK_THROWS_AS(evaluate_heuristic(t, "w1", subs), WeekMismatchError);
}

TEST_CASE("evaluate_heuristic: byte-identical across repeated runs") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = transcript_from({
        {Role::Student, "what is a virtual machine?"},
        {Role::Agent, "an emulated computer"},
        {Role::Student, "why use ballooning for memory?"},
    });
    std::string first = serialize_assessment(evaluate_heuristic(t, "w1", subs));
    for (int i = 0; i < 3; ++i)
        CHECK(serialize_assessment(evaluate_heuristic(t, "w1", subs)) == first);
}

TEST_CASE("fixture transcript-w1 traces to depths 1, 2, 3") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    Transcript t = parse_transcript(
        testutil::slurp(testutil::fixture_path("transcript-w1.jsonl")),
        TranscriptFormat::CanonicalJsonLines,
        parse_submission_meta(testutil::slurp(testutil::fixture_path("transcript-w1.meta"))));
    AssessmentSet a = evaluate_heuristic(t, "w1", subs);
    REQUIRE(a.entries.size() == 3);
    CHECK(a.entries.at("vm-basics").depth == 1);
    CHECK(a.entries.at("hypervisors").depth == 2);
    CHECK(a.entries.at("live-migration").depth == 3);
    CHECK(a.unattributed_student_turns == std::vector<int>{0});
}

}  // TEST_SUITE
