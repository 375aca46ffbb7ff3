#include "engagekit/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "engagekit/errors.hpp"
#include "engagekit/evaluator.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

using nlohmann::json;

namespace {

// Deterministic xorshift-based generator; std::shuffle and the distribution
// classes are implementation-defined, and transcripts must be byte-identical
// for a seed regardless of toolchain.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed * 2654435761u + 1442695040888963407ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    // Uniform-ish integer in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    int in_range(int lo, int hi) {  // inclusive
        if (hi <= lo) return lo;
        return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1)));
    }
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

// Vocabulary pools; every word is checked against the week's keyword tokens
// and the rubric marker tokens before use.
const std::vector<std::string> kFillerPool = {
    "please", "tell",  "me",    "more",  "about", "this",  "topic", "also",
    "again",  "now",   "then",  "along", "today", "still", "next",  "part",
    "keep",   "going", "thanks", "okay", "sure",  "good",  "fine",  "right"};
const std::vector<std::string> kQuestionScaffold1 = {"what", "is"};
const std::vector<std::string> kQuestionScaffold2 = {"how", "does"};
const std::vector<std::string> kAgentReplies = {
    "Here is a short explanation of that concept.",
    "Good question. Let us unpack it step by step.",
    "That is an important idea for this week. Consider the following.",
    "Let me summarize the key points for you.",
};

struct SafeVocab {
    std::set<std::string> blocked;  // keyword tokens plus marker tokens

    bool safe_word(const std::string& w) const { return !blocked.count(w); }

    std::vector<std::string> filter(const std::vector<std::string>& words) const {
        std::vector<std::string> out;
        for (const auto& w : words)
            if (safe_word(w)) out.push_back(w);
        return out;
    }
};

SafeVocab build_vocab(std::span<const Subtopic> subtopics, const RubricConfig& rubric) {
    SafeVocab v;
    for (const auto& s : subtopics)
        for (const auto& kw : s.keywords)
            for (const auto& tok : tokenize_lower(kw)) v.blocked.insert(tok);
    // Single-token markers are blocked outright. For multi-token markers
    // ("what if") blocking every token but the first is enough to keep the
    // sequence from ever completing, and leaves "what is ..." usable.
    auto block_marker = [&](const std::string& m) {
        std::vector<std::string> tokens = tokenize_lower(m);
        if (tokens.size() == 1) v.blocked.insert(tokens[0]);
        for (std::size_t i = 1; i < tokens.size(); ++i) v.blocked.insert(tokens[i]);
    };
    for (const auto& m : rubric.comparison_markers) block_marker(m);
    for (const auto& m : rubric.reasoning_markers) block_marker(m);
    return v;
}

// Unintended marker sequences can still arise at a scaffold/keyword
// boundary; strip leading words until the composition is clean. The bare
// keyword is clean by construction.
void strip_unintended_markers(std::vector<std::string>& words, const RubricConfig& rubric) {
    auto dirty = [&] {
        std::string joined;
        for (const auto& w : words) {
            if (!joined.empty()) joined += " ";
            joined += w;
        }
        std::vector<std::string> tokens = tokenize_lower(joined);
        for (const auto& m : rubric.comparison_markers)
            if (contains_token_seq(tokens, m)) return true;
        for (const auto& m : rubric.reasoning_markers)
            if (contains_token_seq(tokens, m)) return true;
        return false;
    };
    while (words.size() > 1 && dirty()) words.erase(words.begin());
}

// A keyword of `s` usable as the sole topical anchor of a turn: no other
// subtopic's keyword may match inside it, and it must not contain rubric
// marker tokens.
std::optional<std::string> safe_keyword(const Subtopic& s, std::span<const Subtopic> subtopics,
                                        const RubricConfig& rubric) {
    for (const auto& kw : s.keywords) {
        std::vector<std::string> tokens = tokenize_lower(kw);
        if (tokens.empty()) continue;
        bool ok = true;
        for (const auto& other : subtopics) {
            if (other.subtopic_id == s.subtopic_id) continue;
            for (const auto& okw : other.keywords)
                if (contains_token_seq(tokens, okw)) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        for (const auto& m : rubric.comparison_markers)
            if (contains_token_seq(tokens, m)) ok = false;
        for (const auto& m : rubric.reasoning_markers)
            if (contains_token_seq(tokens, m)) ok = false;
        if (ok) return kw;
    }
    return std::nullopt;
}

// First reasoning marker that cannot collide with any other subtopic's
// keywords when emitted as plain tokens.
std::optional<std::string> safe_reasoning_marker(std::span<const Subtopic> subtopics,
                                                 const RubricConfig& rubric) {
    for (const auto& m : rubric.reasoning_markers) {
        std::vector<std::string> tokens = tokenize_lower(m);
        bool ok = !tokens.empty();
        for (const auto& s : subtopics) {
            for (const auto& kw : s.keywords) {
                std::vector<std::string> kw_tokens = tokenize_lower(kw);
                // Reject when the marker contains a keyword or shares any token
                // with one; shared tokens could complete a keyword run.
                for (const auto& t : tokens)
                    if (std::find(kw_tokens.begin(), kw_tokens.end(), t) != kw_tokens.end())
                        ok = false;
            }
        }
        if (ok) return m;
    }
    return std::nullopt;
}

std::string join_words(const std::vector<std::string>& words, const char* terminal) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += " ";
        out += words[i];
    }
    out += terminal;
    return out;
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    if (j.value("schema", "") != kSynthSchema)
        throw SchemaError("expected schema synth/v1", "$.schema");
    SynthSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.week_id = j.at("week_id").get<std::string>();
    spec.target_coverage = j.at("target_coverage").get<double>();
    for (const auto& [k, v] : j.at("depth_histogram").items()) {
        int depth = std::stoi(k);
        if (depth < 1 || depth > 3)
            throw SchemaError("depth_histogram keys must be 1..3", "$.depth_histogram");
        spec.depth_histogram[depth] = v.get<int>();
    }
    if (j.contains("words_per_message")) {
        spec.words_mean = j["words_per_message"].value("mean", spec.words_mean);
        spec.words_spread = j["words_per_message"].value("spread", spec.words_spread);
    }
    if (j.contains("messages_per_engaged_subtopic"))
        for (const auto& [k, v] : j["messages_per_engaged_subtopic"].items())
            spec.messages_per_engaged_subtopic[std::stoi(k)] = v.get<int>();
    return spec;
}

std::string serialize_synth_spec(const SynthSpec& spec) {
    json j;
    j["schema"] = std::string(kSynthSchema);
    j["seed"] = spec.seed;
    j["week_id"] = spec.week_id;
    j["target_coverage"] = spec.target_coverage;
    j["depth_histogram"] = json::object();
    for (const auto& [depth, count] : spec.depth_histogram)
        j["depth_histogram"][std::to_string(depth)] = count;
    j["words_per_message"] = {{"mean", spec.words_mean}, {"spread", spec.words_spread}};
    j["messages_per_engaged_subtopic"] = json::object();
    for (const auto& [depth, count] : spec.messages_per_engaged_subtopic)
        j["messages_per_engaged_subtopic"][std::to_string(depth)] = count;
    return j.dump(2) + "\n";
}

SynthResult generate_transcript(const SynthSpec& spec, std::span<const Subtopic> subtopics) {
    const RubricConfig rubric;  // generator targets the default rubric
    const int total = static_cast<int>(subtopics.size());
    if (total == 0) throw InfeasibleSpecError("no subtopics for week " + spec.week_id);

    int engaged = 0;
    for (const auto& [depth, count] : spec.depth_histogram) {
        if (depth < 1 || depth > 3) throw InfeasibleSpecError("depth_histogram keys must be 1..3");
        if (count < 0) throw InfeasibleSpecError("depth_histogram counts must be >= 0");
        engaged += count;
    }
    if (engaged == 0) throw InfeasibleSpecError("depth_histogram plants no engagement");
    if (engaged > total)
        throw InfeasibleSpecError("depth_histogram totals " + std::to_string(engaged) +
                                  " on a " + std::to_string(total) + "-subtopic week");
    if (std::llround(spec.target_coverage * total) != engaged)
        throw InfeasibleSpecError(
            "target_coverage * total_subtopics does not round to the engaged count implied by "
            "depth_histogram");
    for (const auto& [depth, count] : spec.depth_histogram) {
        if (count == 0) continue;
        auto it = spec.messages_per_engaged_subtopic.find(depth);
        int messages = it == spec.messages_per_engaged_subtopic.end() ? 0 : it->second;
        int minimum = depth == 1 ? 1 : 2;
        if (messages < minimum)
            throw InfeasibleSpecError("messages_per_engaged_subtopic[" + std::to_string(depth) +
                                      "] must be >= " + std::to_string(minimum));
    }

    Rng rng(spec.seed);
    SafeVocab vocab = build_vocab(subtopics, rubric);
    std::vector<std::string> fillers = vocab.filter(kFillerPool);
    if (fillers.empty()) fillers = {"hmm"};  // degenerate curricula; still safe
    std::vector<std::string> scaffold1 = vocab.filter(kQuestionScaffold1);
    std::vector<std::string> scaffold2 = vocab.filter(kQuestionScaffold2);

    // Pick engaged subtopics among those with an unambiguous keyword.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < subtopics.size(); ++i)
        if (safe_keyword(subtopics[i], subtopics, rubric)) candidates.push_back(i);
    if (static_cast<int>(candidates.size()) < engaged)
        throw InfeasibleSpecError("only " + std::to_string(candidates.size()) +
                                  " subtopics have an unambiguous keyword; " +
                                  std::to_string(engaged) + " needed");
    rng.shuffle(candidates);
    candidates.resize(engaged);

    struct Plant {
        std::size_t subtopic_index;
        int depth;
        std::vector<std::string> texts;  // student turn texts, in order
    };
    std::vector<Plant> plants;
    {
        std::size_t at = 0;
        for (int depth = 3; depth >= 1; --depth) {
            auto it = spec.depth_histogram.find(depth);
            int count = it == spec.depth_histogram.end() ? 0 : it->second;
            for (int k = 0; k < count; ++k) plants.push_back({candidates[at++], depth, {}});
        }
    }
    rng.shuffle(plants);

    std::optional<std::string> reasoning = safe_reasoning_marker(subtopics, rubric);

    // Element counts and word counts differ when the keyword is a phrase;
    // padding targets are in words.
    auto words_in = [](const std::vector<std::string>& words) {
        int n = 0;
        for (const auto& w : words) n += word_count(w);
        return n;
    };
    auto pad_to = [&](std::vector<std::string>& words, int target) {
        while (words_in(words) < target) words.push_back(fillers[rng.below(fillers.size())]);
    };
    auto draw_len = [&](int floor_words, int cap_words) {
        int lo = static_cast<int>(std::lround(spec.words_mean - spec.words_spread));
        int hi = static_cast<int>(std::lround(spec.words_mean + spec.words_spread));
        int n = rng.in_range(lo, hi);
        n = std::max(n, floor_words);
        if (cap_words > 0) n = std::min(n, cap_words);
        return n;
    };

    for (auto& plant : plants) {
        const Subtopic& s = subtopics[plant.subtopic_index];
        std::string kw = *safe_keyword(s, subtopics, rubric);
        int kw_words = word_count(kw);
        // Substantive turns of a depth-2 plant must stay below the deep-turn
        // threshold or the rubric would promote them to depth 3.
        int cap = plant.depth == 2 ? rubric.deep_turn_words - 1 : 0;
        if (cap > 0 && kw_words + 2 > cap)
            throw InfeasibleSpecError("keyword \"" + kw +
                                      "\" is too long for a depth-2 plant");

        std::vector<std::string> words;
        auto question_turn = [&](const std::vector<std::string>& scaffold) {
            words.clear();
            words.insert(words.end(), scaffold.begin(), scaffold.end());
            words.push_back(kw);
            strip_unintended_markers(words, rubric);
            pad_to(words, draw_len(words_in(words), cap));
            plant.texts.push_back(join_words(words, "?"));
        };

        question_turn(scaffold1);
        if (plant.depth >= 2) {
            if (plant.depth == 3 && reasoning) {
                // Reasoning-marker turn, e.g. "why <kw> ... ?"
                words.clear();
                for (const auto& t : tokenize_lower(*reasoning)) words.push_back(t);
                words.push_back(kw);
                pad_to(words, draw_len(words_in(words), 0));
                plant.texts.push_back(join_words(words, "?"));
            } else if (plant.depth == 3) {
                // No safe reasoning marker: a long substantive question also
                // upgrades an explored subtopic to depth 3.
                question_turn(scaffold2);
                words = tokenize_lower(plant.texts.back());
                pad_to(words, rubric.deep_turn_words);
                plant.texts.back() = join_words(words, "?");
            } else {
                question_turn(scaffold2);
            }
        }
        int it_messages = spec.messages_per_engaged_subtopic.at(plant.depth);
        while (static_cast<int>(plant.texts.size()) < it_messages) {
            // Continuation turns: no keyword, no question mark, no markers.
            words.clear();
            pad_to(words, draw_len(2, 0));
            plant.texts.push_back(join_words(words, "."));
        }
    }

    // Assemble the transcript: greeting, then per-subtopic exchanges with
    // agent replies in between.
    Transcript t;
    t.submission_id = "synth-" + std::to_string(spec.seed);
    t.student_pseudonym = "synth-student-" + std::to_string(spec.seed);
    t.week_id = spec.week_id;
    t.submitted_at = 0;

    auto push_turn = [&](Role role, std::string text) {
        Turn turn;
        turn.index = static_cast<int>(t.turns.size());
        turn.role = role;
        turn.text = std::move(text);
        turn.word_count = word_count(turn.text);
        t.turns.push_back(std::move(turn));
    };

    if (vocab.safe_word("hello")) push_turn(Role::Student, "hello.");
    push_turn(Role::Agent, "Welcome back. Which subtopic shall we start with?");

    struct PlantedEntry {
        int depth;
        std::vector<int> words_per_message;
    };
    std::map<std::string, PlantedEntry> planted_entries;
    for (const auto& plant : plants) {
        const Subtopic& s = subtopics[plant.subtopic_index];
        PlantedEntry entry;
        entry.depth = plant.depth;
        for (const auto& text : plant.texts) {
            push_turn(Role::Student, text);
            entry.words_per_message.push_back(word_count(text));
            push_turn(Role::Agent, kAgentReplies[rng.below(kAgentReplies.size())]);
        }
        planted_entries[s.subtopic_id] = std::move(entry);
    }

    // Ground-truth report, straight-line from the plant (never through the
    // evaluator or the metrics module).
    EngagementReport planted;
    planted.submission_id = t.submission_id;
    planted.student_pseudonym = t.student_pseudonym;
    planted.week_id = t.week_id;
    planted.total_subtopics = total;
    planted.engaged_subtopics = engaged;
    planted.topic_coverage = static_cast<double>(engaged) / total;
    int depth_sum = 0;
    double sum_of_means = 0.0;
    long pooled_words = 0;
    long pooled_messages = 0;
    for (const auto& [sid, entry] : planted_entries) {
        depth_sum += entry.depth;
        long words = 0;
        for (int w : entry.words_per_message) words += w;
        double mean = static_cast<double>(words) / entry.words_per_message.size();
        sum_of_means += mean;
        pooled_words += words;
        pooled_messages += static_cast<long>(entry.words_per_message.size());
        SubtopicMetrics m;
        m.depth = entry.depth;
        m.message_count = static_cast<int>(entry.words_per_message.size());
        m.mean_student_words = mean;
        planted.per_subtopic[sid] = m;
    }
    planted.avg_topic_depth = static_cast<double>(depth_sum) / engaged;
    planted.avg_turn_length_per_topic = sum_of_means / engaged;
    planted.pooled_turn_length = static_cast<double>(pooled_words) / pooled_messages;

    return {std::move(t), std::move(planted)};
}

RecoveryResult recovery_check(const SynthSpec& spec, std::span<const Subtopic> subtopics) {
    SynthResult synth = generate_transcript(spec, subtopics);
    AssessmentSet assessment =
        evaluate_heuristic(synth.transcript, spec.week_id, subtopics, RubricConfig{});
    EngagementReport recovered =
        build_report(synth.transcript, assessment, static_cast<int>(subtopics.size()));

    RecoveryResult result;
    result.coverage_delta = recovered.topic_coverage - synth.planted.topic_coverage;
    int max_delta = 0;
    for (const auto& [sid, m] : synth.planted.per_subtopic) {
        auto it = recovered.per_subtopic.find(sid);
        int rec_depth = it == recovered.per_subtopic.end() ? -1 : it->second.depth;
        max_delta = std::max(max_delta, std::abs(m.depth - rec_depth));
    }
    for (const auto& [sid, m] : recovered.per_subtopic)
        if (!synth.planted.per_subtopic.count(sid)) max_delta = std::max(max_delta, m.depth + 1);
    result.max_depth_delta = max_delta;
    double planted_depth = synth.planted.avg_topic_depth.value_or(-1);
    double recovered_depth = recovered.avg_topic_depth.value_or(-2);
    result.avg_depth_delta = recovered_depth - planted_depth;
    double planted_turn = synth.planted.avg_turn_length_per_topic.value_or(-1);
    double recovered_turn = recovered.avg_turn_length_per_topic.value_or(-100);
    result.turn_length_delta = recovered_turn - planted_turn;
    result.planted = std::move(synth.planted);
    result.recovered = std::move(recovered);
    return result;
}

}  // namespace engagekit
