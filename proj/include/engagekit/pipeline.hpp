#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "engagekit/curriculum.hpp"
#include "engagekit/evaluator.hpp"
#include "engagekit/remote.hpp"
#include "engagekit/store.hpp"
#include "engagekit/transcript.hpp"

namespace engagekit {

// Service/pipeline configuration, loaded from a JSON file.
struct PipelineConfig {
    std::filesystem::path curriculum_path;
    std::filesystem::path store_root = "store";
    Backend backend = Backend::Heuristic;
    RemoteBackendConfig remote;       // used when backend == Remote
    std::string rubric_prompt;        // empty = default_rubric_prompt()
    RubricConfig rubric;
    int port = 8086;
    std::optional<std::filesystem::path> watch_dir;
    int poll_interval_ms = 500;
    int worker_limit = 4;
};

PipelineConfig parse_pipeline_config(const std::string& document,
                                     const std::filesystem::path& base_dir = ".");

// One transcript submission entering the pipeline. payload_ref is either a
// store key (uploaded payloads are stored first) or a filesystem path
// (watch-folder submissions).
struct SubmissionEvent {
    std::string submission_id;
    std::string student_pseudonym;
    std::string week_id;
    std::int64_t received_at = 0;
    std::string payload_ref;
    TranscriptFormat format = TranscriptFormat::CanonicalJsonLines;
};

struct SubmissionOutcome {
    std::string submission_id;
    bool dead_letter = false;
    bool already_processed = false;  // idempotent re-delivery hit
    std::string error;               // set when dead_letter
    std::string assessment_key;
    std::string report_key;          // report/v1 metrics document
    std::string feedback_key;        // rendered student feedback HTML
    std::string dead_letter_key;
};

// Logged stand-in for report delivery by email.
struct NotificationRecord {
    std::string submission_id;
    std::string recipient_pseudonym;
    std::string report_key;
    std::int64_t sent_at = 0;
    std::string channel = "log-only";
};

// Event-driven orchestration: parse -> evaluate -> metrics -> render ->
// store -> notify. Handlers are safe to run in parallel for distinct
// submission ids; idempotency is keyed on submission_id plus payload hash.
class Pipeline {
  public:
    Pipeline(Curriculum curriculum, PipelineConfig cfg);

    // Processes one submission end to end. Failures (unknown week, parse or
    // evaluation errors) are recorded as dead-letter artifacts and returned
    // in the outcome, never dropped or rethrown. Re-delivery of a processed
    // submission_id with identical payload returns the recorded outcome
    // without reprocessing; a different payload raises ConflictError.
    SubmissionOutcome handle_submission(const SubmissionEvent& event);

    // Aggregates every stored report/v1 document for the week, renders the
    // class report and stores it instructor-only. Returns the class report
    // key. Throws Error when the week has no stored reports.
    std::string run_class_aggregation(const std::string& week_id,
                                      const std::optional<std::string>& compare_to = std::nullopt);

    const Curriculum& curriculum() const { return curriculum_; }
    ArtifactStore& store() { return store_; }
    const PipelineConfig& config() const { return cfg_; }

    std::vector<NotificationRecord> notifications() const;

  private:
    SubmissionOutcome process(const SubmissionEvent& event, const std::string& payload,
                              const std::string& payload_hash);
    SubmissionOutcome dead_letter(const SubmissionEvent& event, const std::string& payload_hash,
                                  const std::string& error);
    void record_outcome(const SubmissionOutcome& outcome, const std::string& payload_hash);
    std::optional<SubmissionOutcome> recorded_outcome(const std::string& submission_id,
                                                      const std::string& payload_hash);
    void notify(const NotificationRecord& record);
    std::string resolve_payload(const std::string& payload_ref) const;

    Curriculum curriculum_;
    PipelineConfig cfg_;
    ArtifactStore store_;
    std::mutex index_mutex_;
};

}  // namespace engagekit
