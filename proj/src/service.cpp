#include "engagekit/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "engagekit/errors.hpp"
#include "engagekit/sha256.hpp"

namespace engagekit {

namespace fs = std::filesystem;
using nlohmann::json;

struct Service::Impl {
    httplib::Server server;
};

namespace {

std::int64_t now_utc() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void respond_error(httplib::Response& res, int status, const std::string& reason) {
    json j;
    j["error"] = reason;
    res.status = status;
    res.set_content(j.dump() + "\n", "application/json");
}

const char* content_type_for(ArtifactKind kind) {
    switch (kind) {
        case ArtifactKind::RenderedReport:
        case ArtifactKind::ClassReport:
            return "text/html; charset=utf-8";
        case ArtifactKind::RawTranscript:
            return "text/plain; charset=utf-8";
        default:
            return "application/json";
    }
}

bool acl_allows(Acl acl, const std::string& role) {
    if (acl == Acl::Both) return true;
    if (acl == Acl::StudentOnly) return role == "student";
    return role == "instructor";
}

}  // namespace

Service::Service(Pipeline& pipeline, const PipelineConfig& cfg)
    : pipeline_(pipeline), cfg_(cfg), impl_(std::make_unique<Impl>()) {}

Service::~Service() { stop(); }

std::future<SubmissionOutcome> Service::enqueue(SubmissionEvent event) {
    Job job;
    job.event = std::move(event);
    std::future<SubmissionOutcome> fut = job.promise.get_future();
    {
        std::lock_guard lock(queue_mutex_);
        queue_.push_back(std::move(job));
    }
    queue_cv_.notify_one();
    return fut;
}

void Service::worker_loop() {
    for (;;) {
        Job job;
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) {
                if (stopping_) return;
                continue;
            }
            job = std::move(queue_.front());
            queue_.pop_front();
        }
        try {
            job.promise.set_value(pipeline_.handle_submission(job.event));
        } catch (...) {
            job.promise.set_exception(std::current_exception());
        }
    }
}

void Service::poll_watch_dir() {
    if (!cfg_.watch_dir || !fs::exists(*cfg_.watch_dir)) return;
    fs::path done_dir = *cfg_.watch_dir / "processed";
    std::vector<fs::path> metas;
    for (const auto& entry : fs::directory_iterator(*cfg_.watch_dir)) {
        if (entry.path().extension() == ".meta") metas.push_back(entry.path());
    }
    for (const auto& meta_path : metas) {
        fs::path txt_path = meta_path;
        txt_path.replace_extension(".txt");
        if (!fs::exists(txt_path)) continue;  // wait for the pair to complete
        try {
            std::ifstream in(meta_path, std::ios::binary);
            std::string meta_doc((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
            json jm = json::parse(meta_doc);
            SubmissionEvent event;
            event.submission_id = jm.value("submission_id", meta_path.stem().string());
            event.student_pseudonym = jm.value("student_pseudonym", "anonymous");
            event.week_id = jm.value("week_id", "");
            event.received_at = jm.value("submitted_at", now_utc());
            auto format = transcript_format_from_string(
                jm.value("format", std::string("canonical-jsonl")));
            event.format = format.value_or(TranscriptFormat::CanonicalJsonLines);
            event.payload_ref = txt_path.string();
            enqueue(std::move(event)).get();  // sequential: keep pair files until done
            fs::create_directories(done_dir);
            fs::rename(meta_path, done_dir / meta_path.filename());
            fs::rename(txt_path, done_dir / txt_path.filename());
        } catch (const std::exception& e) {
            std::cerr << "[watch] failed to ingest " << meta_path << ": " << e.what() << "\n";
            fs::create_directories(done_dir);
            fs::rename(meta_path, done_dir / meta_path.filename());
            if (fs::exists(txt_path)) fs::rename(txt_path, done_dir / txt_path.filename());
        }
    }
}

void Service::poll_loop() {
    while (!stopping_) {
        poll_watch_dir();
        std::unique_lock lock(queue_mutex_);
        queue_cv_.wait_for(lock, std::chrono::milliseconds(cfg_.poll_interval_ms),
                           [&] { return stopping_.load(); });
    }
}

void Service::start() {
    auto& server = impl_->server;

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}\n", "application/json");
    });

    server.Post("/submissions", [this](const httplib::Request& req, httplib::Response& res) {
        for (const char* field : {"student_pseudonym", "week_id", "format"}) {
            if (!req.has_file(field)) {
                respond_error(res, 400, std::string("missing field ") + field);
                return;
            }
        }
        if (!req.has_file("file")) {
            respond_error(res, 400, "missing field file");
            return;
        }
        auto format = transcript_format_from_string(req.get_file_value("format").content);
        if (!format) {
            respond_error(res, 400, "format must be canonical-jsonl or plain-text");
            return;
        }
        const std::string& payload = req.get_file_value("file").content;
        std::string pseudonym = req.get_file_value("student_pseudonym").content;
        if (pseudonym.empty() || pseudonym.find('@') != std::string::npos) {
            respond_error(res, 400, "student_pseudonym must be a nonempty anonymized id");
            return;
        }

        SubmissionEvent event;
        event.student_pseudonym = pseudonym;
        event.week_id = req.get_file_value("week_id").content;
        event.format = *format;
        // Uploads without an explicit submission_id get one derived from the
        // content, so re-delivery of the same upload is idempotent.
        if (req.has_file("submission_id")) {
            event.submission_id = req.get_file_value("submission_id").content;
        } else {
            event.submission_id =
                "sub-" +
                sha256_hex(pseudonym + "|" + event.week_id + "|" + payload).substr(0, 16);
        }
        if (req.has_file("submitted_at")) {
            event.received_at = std::atoll(req.get_file_value("submitted_at").content.c_str());
        } else {
            event.received_at = 0;  // deterministic artifacts; wall clock only in logs
        }
        event.payload_ref = pipeline_.store().put(payload, ArtifactKind::RawTranscript,
                                                  Acl::InstructorOnly, event.received_at);

        try {
            SubmissionOutcome outcome = enqueue(std::move(event)).get();
            json j;
            j["submission_id"] = outcome.submission_id;
            if (outcome.dead_letter) {
                j["status"] = "dead-letter";
                j["error"] = outcome.error;
                j["dead_letter_key"] = outcome.dead_letter_key;
                res.status = 422;
                res.set_content(j.dump(2) + "\n", "application/json");
                return;
            }
            j["status"] = "ok";
            j["report_key"] = outcome.report_key;
            j["assessment_key"] = outcome.assessment_key;
            j["feedback_key"] = outcome.feedback_key;
            res.set_content(j.dump(2) + "\n", "application/json");
        } catch (const ConflictError& e) {
            respond_error(res, 409, e.what());
        } catch (const std::exception& e) {
            respond_error(res, 500, e.what());
        }
    });

    server.Get(R"(/reports/([0-9a-f]{64}))",
               [this](const httplib::Request& req, httplib::Response& res) {
                   std::string key = req.matches[1];
                   auto meta = pipeline_.store().meta(key);
                   if (!meta) {
                       respond_error(res, 404, "no artifact with key " + key);
                       return;
                   }
                   std::string role = req.get_param_value("role");
                   if (role.empty()) role = "student";
                   if (!acl_allows(meta->acl, role)) {
                       respond_error(res, 403, "artifact is " +
                                                   std::string(to_string(meta->acl)) +
                                                   "; role " + role + " may not read it");
                       return;
                   }
                   res.set_content(pipeline_.store().get(key), content_type_for(meta->kind));
               });

    stopping_ = false;
    int workers = std::max(1, cfg_.worker_limit);
    for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
    poller_ = std::thread([this] { poll_loop(); });

    if (cfg_.port == 0) {
        port_ = server.bind_to_any_port("0.0.0.0");
        if (port_ < 0) throw Error("failed to bind to an ephemeral port");
    } else {
        if (!server.bind_to_port("0.0.0.0", cfg_.port))
            throw Error("failed to bind to port " + std::to_string(cfg_.port));
        port_ = cfg_.port;
    }
    server_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    server.wait_until_ready();
}

void Service::stop() {
    if (stopping_.exchange(true)) {
        if (server_thread_.joinable()) server_thread_.join();
        return;
    }
    impl_->server.stop();
    queue_cv_.notify_all();
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
    workers_.clear();
    if (poller_.joinable()) poller_.join();
    if (server_thread_.joinable()) server_thread_.join();
}

}  // namespace engagekit
