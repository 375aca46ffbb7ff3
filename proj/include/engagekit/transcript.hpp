#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace engagekit {

enum class Role { Student, Agent };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view name);

struct Turn {
    int index = 0;
    Role role = Role::Student;
    std::string text;       // non-blank after normalization
    int word_count = 0;     // word_count(text), cached at parse time
};

enum class TranscriptFormat { CanonicalJsonLines, PlainTextExport };

std::string_view to_string(TranscriptFormat format);
std::optional<TranscriptFormat> transcript_format_from_string(std::string_view name);

// Submission metadata sidecar accompanying a raw transcript.
struct SubmissionMeta {
    std::string submission_id;
    std::string student_pseudonym;  // opaque identifier, never an email
    std::string week_id;
    std::int64_t submitted_at = 0;  // UTC seconds
};

SubmissionMeta parse_submission_meta(std::string_view document);
std::string serialize_submission_meta(const SubmissionMeta& meta);

// One student-week chat session, normalized: turns trimmed, blank turns
// dropped, indices re-assigned 0..n-1. Consecutive same-role turns are never
// merged (the turn-length metric is defined per message).
struct Transcript {
    std::string submission_id;
    std::string student_pseudonym;
    std::string week_id;
    std::int64_t submitted_at = 0;
    std::vector<Turn> turns;
};

// Ingest a raw transcript with no semantic curation. Throws SyntaxError on
// undecodable bytes, on an unrecognizable PlainTextExport line (line number
// reported), and on zero turns after normalization.
Transcript parse_transcript(std::string_view raw, TranscriptFormat format,
                            const SubmissionMeta& meta);

// Canonical JSON-lines form of the turn sequence: one object per line with
// keys index, role, text. parse(serialize(t)) == t for normalized values.
std::string serialize_canonical(const Transcript& t);

std::vector<Turn> student_turns(const Transcript& t);

}  // namespace engagekit
