#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace engagekit {

// Base class for all engagekit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input bytes (bad UTF-8, broken JSON, unparseable line).
// `offset` is a byte offset for whole-document formats and a 1-based line
// number for line-oriented formats; `line_based` tells which.
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t offset, bool line_based = false)
        : Error(msg), offset(offset), line_based(line_based) {}
    std::size_t offset;
    bool line_based;
};

// Structurally valid input that violates the document schema
// (missing field, duplicate id, unknown enum value). `path` names the
// offending location, e.g. "modules[0].weeks[1].subtopics[3].bloom_level".
struct SchemaError : Error {
    SchemaError(const std::string& msg, std::string path)
        : Error(msg + " (at " + path + ")"), path(std::move(path)) {}
    std::string path;
};

struct UnknownWeekError : Error {
    explicit UnknownWeekError(const std::string& week_id)
        : Error("unknown week_id \"" + week_id + "\""), week_id(week_id) {}
    std::string week_id;
};

struct WeekMismatchError : Error {
    WeekMismatchError(const std::string& transcript_week, const std::string& subtopic_week)
        : Error("transcript week \"" + transcript_week + "\" does not match subtopic week \"" +
                subtopic_week + "\"") {}
};

// Remote backend failures.
struct NetworkError : Error {
    using Error::Error;
};
struct AuthError : Error {
    using Error::Error;
};

// Remote response still violates the output schema after all retries.
// Carries the last raw response body for audit.
struct SchemaInvalidError : Error {
    SchemaInvalidError(const std::string& msg, std::string last_response)
        : Error(msg), last_response(std::move(last_response)) {}
    std::string last_response;
};

// SynthSpec whose parameters cannot be realized on the given subtopic list.
struct InfeasibleSpecError : Error {
    using Error::Error;
};

// Re-delivery of a submission_id with a different payload.
struct ConflictError : Error {
    using Error::Error;
};

struct StoreError : Error {
    using Error::Error;
};

}  // namespace engagekit
