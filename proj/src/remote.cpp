#include "engagekit/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>

#include "engagekit/errors.hpp"

namespace engagekit {

using nlohmann::json;

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) throw NetworkError("endpoint_url has no scheme: " + url);
    std::size_t path_at = url.find('/', scheme + 3);
    if (path_at == std::string::npos) return {url, "/"};
    return {url.substr(0, path_at), url.substr(path_at)};
}

std::string join_violations(const std::vector<std::string>& violations) {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i];
    }
    return out.str();
}

}  // namespace

std::string default_rubric_prompt() {
    std::ostringstream p;
    p << "You are an evaluation engine for student-tutor chat transcripts. Analyze the "
         "transcript against the week's subtopic list using these fixed rules, then answer "
         "with exactly one JSON object and nothing else.\n\n";
    p << "Attribution: assign each student turn to at most one subtopic. A follow-up turn "
         "that names no subtopic belongs to the subtopic of the nearest preceding attributed "
         "student turn. Turns that relate to no subtopic go to "
         "unattributed_student_turns. Every student turn index must appear exactly once, "
         "either in one entry's attributed_student_turns or in "
         "unattributed_student_turns.\n\n";
    p << "Depth: rate each subtopic the student touched on this ordinal scale:\n"
         "0 - Briefly mentioned\n"
         "1 - Basic question asked\n"
         "2 - Explored with follow-ups or comparisons\n"
         "3 - Examined in depth through reasoning or clarification\n\n";
    p << "Evidence: for each entry give up to three short verbatim quotes (at most 30 words "
         "each) copied exactly from the transcript.\n\n";
    p << "Output (assessment/v1): {\"schema\": \"assessment/v1\", \"week_id\": ..., "
         "\"submission_id\": ..., \"backend\": \"remote\", \"entries\": [{\"subtopic_id\": ..., "
         "\"depth\": 0-3, \"attributed_student_turns\": [...], \"evidence\": [...]}], "
         "\"unattributed_student_turns\": [...]}. Copy week_id and submission_id from the "
         "input. Use only subtopic ids from the given list. Do not invent turn indices.";
    return p.str();
}

std::string remote_user_message(const Transcript& t, std::span<const Subtopic> subtopics) {
    std::ostringstream m;
    m << "week_id: " << t.week_id << "\n";
    m << "submission_id: " << t.submission_id << "\n\n";
    m << "Subtopics:\n";
    for (const auto& s : subtopics) {
        m << "- " << s.subtopic_id << ": " << s.title << " (keywords:";
        for (const auto& kw : s.keywords) m << " " << kw;
        m << ")\n";
    }
    m << "\nTranscript (one JSON object per line):\n";
    m << serialize_canonical(t);
    return m.str();
}

AssessmentSet evaluate_remote(const Transcript& t, std::span<const Subtopic> subtopics,
                              const RemoteBackendConfig& cfg, const std::string& rubric_prompt) {
    const char* token = nullptr;
    if (!cfg.auth_token_env_var.empty()) {
        token = std::getenv(cfg.auth_token_env_var.c_str());
        if (!token || !*token)
            throw AuthError("auth token environment variable " + cfg.auth_token_env_var +
                            " is not set");
    }

    SplitUrl url = split_url(cfg.endpoint_url);
    httplib::Client client(url.base);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<int>(cfg.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<int>(cfg.timeout_seconds * 1000)));

    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", rubric_prompt}});
    messages.push_back({{"role", "user"}, {"content", remote_user_message(t, subtopics)}});

    std::string last_response;
    std::string last_violations;
    int attempts = cfg.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        json request;
        request["model"] = cfg.model_name;
        request["messages"] = messages;

        httplib::Headers headers;
        if (token) headers.emplace("Authorization", std::string("Bearer ") + token);
        auto res = client.Post(url.path, headers, request.dump(), "application/json");
        if (!res)
            throw NetworkError("request to " + cfg.endpoint_url + " failed: " +
                               httplib::to_string(res.error()));
        if (res->status == 401 || res->status == 403)
            throw AuthError("endpoint rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
        if (res->status != 200)
            throw NetworkError("endpoint returned HTTP " + std::to_string(res->status));

        // Unwrap the chat-completion envelope.
        json envelope = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
        std::string content;
        if (envelope.is_object() && envelope.contains("choices") &&
            envelope["choices"].is_array() && !envelope["choices"].empty() &&
            envelope["choices"][0].contains("message") &&
            envelope["choices"][0]["message"].contains("content") &&
            envelope["choices"][0]["message"]["content"].is_string()) {
            content = envelope["choices"][0]["message"]["content"].get<std::string>();
        } else {
            content = res->body;  // bare-object endpoints; validated below either way
        }
        last_response = content;

        std::vector<std::string> violations =
            validate_assessment_json(content, t, {subtopics.begin(), subtopics.end()});
        if (violations.empty()) return parse_assessment(content);
        last_violations = join_violations(violations);

        // Corrective re-prompt: echo the invalid reply, then restate the contract.
        messages.push_back({{"role", "assistant"}, {"content", content}});
        messages.push_back(
            {{"role", "user"},
             {"content", "Your previous response violated the assessment/v1 schema: " +
                             last_violations +
                             ". Respond again with exactly one conformant JSON object and "
                             "nothing else."}});
    }
    throw SchemaInvalidError("response still schema-invalid after " +
                                 std::to_string(cfg.max_retries) + " retries: " + last_violations,
                             last_response);
}

}  // namespace engagekit
