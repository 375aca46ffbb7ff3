#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "engagekit/pipeline.hpp"

namespace engagekit {

// Webhook + watch-folder front end over the pipeline, standing in for the
// form-triggered FaaS workflow. Submissions are queued and processed by a
// bounded worker pool; shutdown drains the queue.
//
// HTTP surface:
//   POST /submissions   multipart fields: student_pseudonym, week_id,
//                       format, file (and optional submission_id)
//   GET  /reports/{key} stored artifact; ?role=student|instructor is
//                       checked against the artifact ACL
//   GET  /healthz
class Service {
  public:
    Service(Pipeline& pipeline, const PipelineConfig& cfg);
    ~Service();

    // Binds and serves on cfg.port (or an OS-assigned port when cfg.port is
    // 0), returns once the listener is accepting. Throws Error when the
    // port is taken.
    void start();

    // Stops accepting, drains queued submissions, joins all threads.
    void stop();

    int port() const { return port_; }

    // Enqueue a submission and obtain a future for its outcome. Used by the
    // HTTP handler and the watch-folder poller; tests may call it directly.
    std::future<SubmissionOutcome> enqueue(SubmissionEvent event);

  private:
    void worker_loop();
    void poll_loop();
    void poll_watch_dir();

    Pipeline& pipeline_;
    PipelineConfig cfg_;
    int port_ = 0;

    struct Job {
        SubmissionEvent event;
        std::promise<SubmissionOutcome> promise;
    };
    std::deque<Job> queue_;
    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::atomic<bool> stopping_{false};

    std::vector<std::thread> workers_;
    std::thread poller_;
    std::thread server_thread_;
    struct Impl;  // hides httplib from the header
    std::unique_ptr<Impl> impl_;
};

}  // namespace engagekit
