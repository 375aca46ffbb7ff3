#include <doctest.h>

#include "engagekit/errors.hpp"
#include "engagekit/synth.hpp"
#include "engagekit/transcript.hpp"
#include "test_util.hpp"

using namespace engagekit;
using testutil::fixture_curriculum;

namespace {

SynthSpec spec_for(std::uint64_t seed, const std::string& week, double coverage,
                   std::map<int, int> histogram) {
    SynthSpec spec;
    spec.seed = seed;
    spec.week_id = week;
    spec.target_coverage = coverage;
    spec.depth_histogram = std::move(histogram);
    return spec;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("planted report matches the spec by construction") {
    // 20 subtopics, coverage 0.15, one subtopic each at depths 1..3
    auto spec = spec_for(42, "w1", 0.15, {{1, 1}, {2, 1}, {3, 1}});
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    SynthResult result = generate_transcript(spec, subs);
    CHECK(result.planted.topic_coverage == 0.15);
    CHECK(result.planted.engaged_subtopics == 3);
    CHECK(result.planted.avg_topic_depth == 2.0);
    CHECK(result.planted.per_subtopic.size() == 3);
}

TEST_CASE("same seed yields a byte-identical transcript") {
    auto spec = spec_for(7, "w2", 6.0 / 21, {{1, 2}, {2, 2}, {3, 2}});
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w2");
    std::string a = serialize_canonical(generate_transcript(spec, subs).transcript);
    std::string b = serialize_canonical(generate_transcript(spec, subs).transcript);
    CHECK(a == b);
    spec.seed = 8;
    std::string c = serialize_canonical(generate_transcript(spec, subs).transcript);
    CHECK(a != c);
}

TEST_CASE("histogram exceeding the subtopic count is infeasible") {
    auto spec = spec_for(1, "w1", 1.25, {{1, 25}});
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    CHECK_THROWS_AS(generate_transcript(spec, subs), InfeasibleSpecError);
}

TEST_CASE("coverage inconsistent with the histogram is infeasible") {
    auto spec = spec_for(1, "w1", 0.5, {{1, 3}});  // 0.5 * 20 = 10 != 3
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    CHECK_THROWS_AS(generate_transcript(spec, subs), InfeasibleSpecError);
}

TEST_CASE("rubric-inconsistent message counts are infeasible") {
    auto spec = spec_for(1, "w1", 0.05, {{2, 1}});
    spec.messages_per_engaged_subtopic[2] = 1;  // depth 2 needs two substantive turns
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    CHECK_THROWS_AS(generate_transcript(spec, subs), InfeasibleSpecError);
}

TEST_CASE("recovery is exact for a spread of specs") {
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    auto specs = {
        spec_for(1, "w1", 0.15, {{1, 1}, {2, 1}, {3, 1}}),
        spec_for(2, "w1", 0.10, {{3, 2}}),
        spec_for(3, "w1", 1.00, {{1, 7}, {2, 7}, {3, 6}}),
        spec_for(4, "w1", 0.50, {{2, 10}}),
        spec_for(5, "w1", 0.25, {{1, 5}}),
    };
    for (const auto& spec : specs) {
        RecoveryResult r = recovery_check(spec, subs);
        CAPTURE(spec.seed);
        CHECK(r.coverage_delta == 0.0);
        CHECK(r.max_depth_delta == 0);
        CHECK(r.avg_depth_delta == 0.0);
        CHECK(r.turn_length_delta <= 1.0);
        CHECK(r.turn_length_delta >= -1.0);
        CHECK(r.exact());
    }
}

TEST_CASE("all-depth-3 plant recovers average depth 3 exactly") {
    auto spec = spec_for(11, "w4", 0.4, {{3, 2}});
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w4");
    RecoveryResult r = recovery_check(spec, subs);
    CHECK(r.recovered.avg_topic_depth == 3.0);
    CHECK(r.exact());
}

TEST_CASE("extra messages arrive as continuation turns without changing depth") {
    auto spec = spec_for(13, "w1", 0.05, {{1, 1}});
    spec.messages_per_engaged_subtopic[1] = 3;
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    RecoveryResult r = recovery_check(spec, subs);
    CHECK(r.exact());
    REQUIRE(r.recovered.per_subtopic.size() == 1);
    CHECK(r.recovered.per_subtopic.begin()->second.message_count == 3);
    CHECK(r.recovered.per_subtopic.begin()->second.depth == 1);
}

TEST_CASE("words_per_message shifts the mean turn length") {
    auto spec = spec_for(17, "w1", 0.10, {{1, 2}});
    spec.words_mean = 18.0;
    spec.words_spread = 2.0;
    const auto& subs = subtopics_for_week(fixture_curriculum(), "w1");
    RecoveryResult r = recovery_check(spec, subs);
    CHECK(r.exact());
    CHECK(*r.recovered.avg_turn_length_per_topic >= 14.0);
    CHECK(*r.recovered.avg_turn_length_per_topic <= 22.0);
}

TEST_CASE("synth spec JSON round-trips") {
    auto spec = spec_for(99, "w2", 6.0 / 21, {{1, 2}, {2, 2}, {3, 2}});
    spec.words_mean = 14;
    spec.words_spread = 3;
    SynthSpec back = parse_synth_spec(serialize_synth_spec(spec));
    CHECK(back.seed == 99);
    CHECK(back.week_id == "w2");
    CHECK(back.depth_histogram == spec.depth_histogram);
    CHECK(back.messages_per_engaged_subtopic == spec.messages_per_engaged_subtopic);
    CHECK(back.words_mean == 14);
}

}  // TEST_SUITE
