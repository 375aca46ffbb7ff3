#include "engagekit/transcript.hpp"

#include <json.hpp>

#include <cctype>

#include "engagekit/errors.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

using nlohmann::json;

namespace {

// Split into lines on '\n'; a trailing newline does not produce a final
// empty line. '\r' before the split point is stripped (CRLF input).
std::vector<std::string_view> split_lines(std::string_view raw) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t nl = raw.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < raw.size()) lines.push_back(raw.substr(start));
            break;
        }
        std::string_view line = raw.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

// "Student:" / "Agent:" prefix match, case-insensitive, with optional
// leading whitespace. Returns the role and the text after the colon.
std::optional<std::pair<Role, std::string_view>> match_role_prefix(std::string_view line) {
    std::string_view rest = line;
    std::size_t skip = 0;
    while (skip < rest.size() && (rest[skip] == ' ' || rest[skip] == '\t')) ++skip;
    rest.remove_prefix(skip);
    for (Role role : {Role::Student, Role::Agent}) {
        std::string_view name = to_string(role);
        if (rest.size() < name.size() + 1) continue;
        bool match = true;
        for (std::size_t i = 0; i < name.size(); ++i) {
            char a = static_cast<char>(std::tolower(static_cast<unsigned char>(rest[i])));
            char b = static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
            if (a != b) {
                match = false;
                break;
            }
        }
        if (match && rest[name.size()] == ':')
            return std::make_pair(role, rest.substr(name.size() + 1));
    }
    return std::nullopt;
}

struct RawTurn {
    Role role;
    std::string text;
};

std::vector<RawTurn> parse_canonical_lines(std::string_view raw) {
    std::vector<RawTurn> turns;
    auto lines = split_lines(raw);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SyntaxError("line " + std::to_string(li + 1) + ": " + e.what(), li + 1,
                              /*line_based=*/true);
        }
        if (!j.is_object() || !j.contains("role") || !j.contains("text"))
            throw SyntaxError("line " + std::to_string(li + 1) +
                                  ": expected object with keys index, role, text",
                              li + 1, /*line_based=*/true);
        auto role = role_from_string(j["role"].get<std::string>());
        if (!role)
            throw SyntaxError("line " + std::to_string(li + 1) + ": unknown role \"" +
                                  j["role"].get<std::string>() + "\"",
                              li + 1, /*line_based=*/true);
        turns.push_back({*role, j["text"].get<std::string>()});
    }
    return turns;
}

std::vector<RawTurn> parse_plain_text(std::string_view raw) {
    std::vector<RawTurn> turns;
    auto lines = split_lines(raw);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (auto prefixed = match_role_prefix(line)) {
            turns.push_back({prefixed->first, std::string(prefixed->second)});
        } else {
            if (trim(line).empty()) continue;
            if (turns.empty())
                throw SyntaxError("line " + std::to_string(li + 1) +
                                      ": continuation line before any turn",
                                  li + 1, /*line_based=*/true);
            turns.back().text += "\n";
            turns.back().text += line;
        }
    }
    return turns;
}

}  // namespace

std::string_view to_string(Role role) {
    return role == Role::Student ? "student" : "agent";
}

std::optional<Role> role_from_string(std::string_view name) {
    if (name == "student") return Role::Student;
    if (name == "agent") return Role::Agent;
    return std::nullopt;
}

std::string_view to_string(TranscriptFormat format) {
    return format == TranscriptFormat::CanonicalJsonLines ? "canonical-jsonl" : "plain-text";
}

std::optional<TranscriptFormat> transcript_format_from_string(std::string_view name) {
    if (name == "canonical-jsonl") return TranscriptFormat::CanonicalJsonLines;
    if (name == "plain-text") return TranscriptFormat::PlainTextExport;
    return std::nullopt;
}

SubmissionMeta parse_submission_meta(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    SubmissionMeta m;
    for (const char* key : {"submission_id", "student_pseudonym", "week_id"})
        if (!j.contains(key))
            throw SchemaError(std::string("missing field \"") + key + "\"", "$");
    m.submission_id = j["submission_id"].get<std::string>();
    m.student_pseudonym = j["student_pseudonym"].get<std::string>();
    m.week_id = j["week_id"].get<std::string>();
    m.submitted_at = j.value("submitted_at", std::int64_t{0});
    if (m.student_pseudonym.find('@') != std::string::npos)
        throw SchemaError("student_pseudonym looks like an email address; submissions must be "
                          "anonymized before ingestion",
                          "$.student_pseudonym");
    return m;
}

std::string serialize_submission_meta(const SubmissionMeta& meta) {
    json j;
    j["submission_id"] = meta.submission_id;
    j["student_pseudonym"] = meta.student_pseudonym;
    j["week_id"] = meta.week_id;
    j["submitted_at"] = meta.submitted_at;
    return j.dump(2) + "\n";
}

Transcript parse_transcript(std::string_view raw, TranscriptFormat format,
                            const SubmissionMeta& meta) {
    if (auto bad = utf8_invalid_at(raw))
        throw SyntaxError("invalid UTF-8 byte", *bad);
    std::vector<RawTurn> raw_turns = format == TranscriptFormat::CanonicalJsonLines
                                         ? parse_canonical_lines(raw)
                                         : parse_plain_text(raw);
    Transcript t;
    t.submission_id = meta.submission_id;
    t.student_pseudonym = meta.student_pseudonym;
    t.week_id = meta.week_id;
    t.submitted_at = meta.submitted_at;
    for (auto& rt : raw_turns) {
        std::string_view text = trim(rt.text);
        if (text.empty()) continue;  // normalization drops blank turns
        Turn turn;
        turn.index = static_cast<int>(t.turns.size());
        turn.role = rt.role;
        turn.text = std::string(text);
        turn.word_count = word_count(turn.text);
        t.turns.push_back(std::move(turn));
    }
    if (t.turns.empty())
        throw SyntaxError("transcript has zero turns after normalization", 0);
    return t;
}

std::string serialize_canonical(const Transcript& t) {
    std::string out;
    for (const auto& turn : t.turns) {
        json j;
        j["index"] = turn.index;
        j["role"] = std::string(to_string(turn.role));
        j["text"] = turn.text;
        out += j.dump();
        out += "\n";
    }
    return out;
}

std::vector<Turn> student_turns(const Transcript& t) {
    std::vector<Turn> out;
    for (const auto& turn : t.turns)
        if (turn.role == Role::Student) out.push_back(turn);
    return out;
}

}  // namespace engagekit
