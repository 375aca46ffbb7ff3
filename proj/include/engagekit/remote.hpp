#pragma once

#include <span>
#include <string>

#include "engagekit/assessment.hpp"
#include "engagekit/curriculum.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

// A chat-completion-style evaluation endpoint. The auth token is read from
// the named environment variable at call time, never stored.
struct RemoteBackendConfig {
    std::string endpoint_url;  // e.g. "http://host:port/v1/chat/completions"
    std::string model_name;
    std::string auth_token_env_var;
    int max_retries = 2;       // corrective re-prompts after a schema-invalid reply
    double timeout_seconds = 30.0;
};

// Default rubric prompt sent as the system message. Spells out the
// attribution rules, the four-level depth scale and the assessment/v1
// output contract.
std::string default_rubric_prompt();

// The user message: the subtopic list and the serialized transcript.
std::string remote_user_message(const Transcript& t, std::span<const Subtopic> subtopics);

// Send one evaluation request and validate the reply strictly against the
// assessment/v1 schema. Invalid replies are never coerced: each triggers a
// corrective re-prompt, up to cfg.max_retries, after which
// SchemaInvalidError carries the last raw response for audit. Also throws
// NetworkError and AuthError.
AssessmentSet evaluate_remote(const Transcript& t, std::span<const Subtopic> subtopics,
                              const RemoteBackendConfig& cfg, const std::string& rubric_prompt);

}  // namespace engagekit
