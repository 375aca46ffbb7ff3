// engagekit command line: compile weekly agent configs from a curriculum and
// evaluate student-agent chat transcripts into engagement reports.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "engagekit/curriculum.hpp"
#include "engagekit/errors.hpp"
#include "engagekit/evaluator.hpp"
#include "engagekit/metrics.hpp"
#include "engagekit/pipeline.hpp"
#include "engagekit/promptgen.hpp"
#include "engagekit/remote.hpp"
#include "engagekit/report.hpp"
#include "engagekit/service.hpp"
#include "engagekit/sha256.hpp"
#include "engagekit/synth.hpp"

namespace fs = std::filesystem;
using namespace engagekit;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, std::string_view content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

Curriculum load_curriculum(const fs::path& path) { return parse_curriculum(slurp(path)); }

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

int cmd_validate(const fs::path& curriculum_path) {
    Curriculum c;
    try {
        c = load_curriculum(curriculum_path);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 1;
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at " << (e.line_based ? "line " : "offset ") << e.offset
                  << ": " << e.what() << "\n";
        return 1;
    }
    ValidationReport report = validate_curriculum(c);
    if (!report.empty()) {
        for (const auto& v : report) std::cerr << v.path << ": " << v.message << "\n";
        return 1;
    }
    int weeks = 0, subtopics = 0;
    for (const auto& m : c.modules)
        for (const auto& w : m.weeks) {
            ++weeks;
            subtopics += static_cast<int>(w.subtopics.size());
        }
    std::cout << "valid: " << c.modules.size() << " modules, " << weeks << " weeks, "
              << subtopics << " subtopics\n";
    return 0;
}

int cmd_evaluate(const fs::path& curriculum_path, const std::string& week_id,
                 const fs::path& transcript_path, const std::optional<fs::path>& meta_path,
                 const std::string& format_name, const fs::path& out_dir,
                 const std::string& backend_name, const std::optional<fs::path>& config_path) {
    Curriculum c = load_curriculum(curriculum_path);
    const WeekSpec* week = c.find_week(week_id);
    if (!week) throw UnknownWeekError(week_id);

    auto format = transcript_format_from_string(format_name);
    if (!format) throw Error("format must be canonical-jsonl or plain-text");

    std::string raw = slurp(transcript_path);
    SubmissionMeta meta;
    if (meta_path) {
        meta = parse_submission_meta(slurp(*meta_path));
    } else {
        meta.submission_id = "sub-" + sha256_hex(raw).substr(0, 16);
        meta.student_pseudonym = "anonymous";
        meta.week_id = week_id;
        meta.submitted_at = 0;
    }
    if (meta.week_id != week_id)
        throw Error("metadata week_id " + meta.week_id + " does not match --week " + week_id);

    Transcript t = parse_transcript(raw, *format, meta);

    RubricConfig rubric;
    RemoteBackendConfig remote;
    std::string rubric_prompt;
    if (config_path) {
        PipelineConfig cfg = parse_pipeline_config(slurp(*config_path),
                                                   config_path->parent_path());
        rubric = cfg.rubric;
        remote = cfg.remote;
        rubric_prompt = cfg.rubric_prompt;
    }

    AssessmentSet assessment;
    if (backend_name == "heuristic") {
        assessment = evaluate_heuristic(t, week_id, week->subtopics, rubric);
    } else if (backend_name == "remote") {
        if (remote.endpoint_url.empty())
            throw Error("remote backend needs a config file with a remote.endpoint_url");
        assessment = evaluate_remote(t, week->subtopics, remote,
                                     rubric_prompt.empty() ? default_rubric_prompt()
                                                           : rubric_prompt);
    } else {
        throw Error("backend must be heuristic or remote");
    }

    EngagementReport report =
        build_report(t, assessment, static_cast<int>(week->subtopics.size()));
    std::optional<std::int64_t> ts;
    if (meta.submitted_at > 0) ts = meta.submitted_at;
    RenderedDocument feedback = render_student_report(report, *week, ts);

    fs::path assessment_file = out_dir / (meta.submission_id + "-assessment.json");
    fs::path report_file = out_dir / (meta.submission_id + "-report.json");
    fs::path feedback_file = out_dir / feedback.filename();
    spit(assessment_file, serialize_assessment(assessment));
    spit(report_file, serialize_report(report));
    spit(feedback_file, feedback.body);
    std::cout << assessment_file.string() << "\n"
              << report_file.string() << "\n"
              << feedback_file.string() << "\n";
    return 0;
}

int cmd_aggregate(const fs::path& curriculum_path, const fs::path& store_root,
                  const std::string& week_id, const std::optional<std::string>& compare_to) {
    PipelineConfig cfg;
    cfg.curriculum_path = curriculum_path;
    cfg.store_root = store_root;
    Pipeline pipeline(load_curriculum(curriculum_path), cfg);
    std::string key = pipeline.run_class_aggregation(week_id, compare_to);
    std::cout << key << "\n";
    return 0;
}

int cmd_promptgen(const fs::path& curriculum_path, const std::string& week_id,
                  const fs::path& out_dir, const std::optional<fs::path>& persona_path,
                  const std::optional<fs::path>& pedagogy_path) {
    Curriculum c = load_curriculum(curriculum_path);
    std::string persona = persona_path ? slurp(*persona_path) : kDefaultPersonaTemplate;
    std::string pedagogy = pedagogy_path ? slurp(*pedagogy_path) : kDefaultPedagogyTemplate;
    AgentConfig config = assemble_agent_config(c, week_id, persona, pedagogy);

    fs::path config_file = out_dir / ("agent-config-" + week_id + ".txt");
    fs::path prompts_file = out_dir / ("starter-prompts-" + week_id + ".txt");
    spit(config_file, config.assembled);
    std::string prompts;
    for (const auto& p : config.starter_prompts) prompts += p + "\n";
    spit(prompts_file, prompts);
    std::cout << config_file.string() << "\n" << prompts_file.string() << "\n";
    return 0;
}

int cmd_serve(const fs::path& config_path) {
    PipelineConfig cfg = parse_pipeline_config(slurp(config_path), config_path.parent_path());
    Pipeline pipeline(load_curriculum(cfg.curriculum_path), cfg);
    Service service(pipeline, cfg);
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    service.start();
    std::cout << "listening on port " << service.port() << " (store: "
              << cfg.store_root.string() << ")\n";
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    std::cout << "draining queue and shutting down\n";
    service.stop();
    return 0;
}

int cmd_synth(const fs::path& curriculum_path, const fs::path& spec_path,
              const fs::path& out_dir) {
    Curriculum c = load_curriculum(curriculum_path);
    SynthSpec spec = parse_synth_spec(slurp(spec_path));
    const auto& subtopics = subtopics_for_week(c, spec.week_id);
    SynthResult result = generate_transcript(spec, subtopics);

    std::string stem = result.transcript.submission_id;
    fs::path transcript_file = out_dir / (stem + ".jsonl");
    fs::path meta_file = out_dir / (stem + ".meta");
    fs::path planted_file = out_dir / (stem + "-planted-report.json");
    SubmissionMeta meta;
    meta.submission_id = result.transcript.submission_id;
    meta.student_pseudonym = result.transcript.student_pseudonym;
    meta.week_id = result.transcript.week_id;
    meta.submitted_at = result.transcript.submitted_at;
    spit(transcript_file, serialize_canonical(result.transcript));
    spit(meta_file, serialize_submission_meta(meta));
    spit(planted_file, serialize_report(result.planted));
    std::cout << transcript_file.string() << "\n"
              << meta_file.string() << "\n"
              << planted_file.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instructor-agent configuration compiler and engagement analytics pipeline"};
    app.require_subcommand(1);

    std::string curriculum, week, format = "canonical-jsonl", backend = "heuristic";
    std::string transcript, out = "out", store = "store", spec, config;
    std::string meta, persona, pedagogy, compare_to;

    auto* validate = app.add_subcommand("validate", "Check a curriculum file");
    validate->add_option("--curriculum", curriculum, "curriculum JSON file")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate one transcript into report files");
    evaluate->add_option("--curriculum", curriculum)->required();
    evaluate->add_option("--week", week)->required();
    evaluate->add_option("--transcript", transcript)->required();
    evaluate->add_option("--meta", meta, "submission metadata sidecar JSON");
    evaluate->add_option("--format", format, "canonical-jsonl | plain-text");
    evaluate->add_option("--out", out, "output directory");
    evaluate->add_option("--backend", backend, "heuristic | remote");
    evaluate->add_option("--config", config, "pipeline config (rubric/remote settings)");

    auto* aggregate = app.add_subcommand("aggregate", "Aggregate stored reports for a week");
    aggregate->add_option("--curriculum", curriculum)->required();
    aggregate->add_option("--store", store, "store root directory");
    aggregate->add_option("--week", week)->required();
    aggregate->add_option("--compare-to", compare_to, "baseline week for percent changes");

    auto* promptgen = app.add_subcommand("promptgen", "Compile a weekly agent configuration");
    promptgen->add_option("--curriculum", curriculum)->required();
    promptgen->add_option("--week", week)->required();
    promptgen->add_option("--out", out);
    promptgen->add_option("--persona-template", persona);
    promptgen->add_option("--pedagogy-template", pedagogy);

    auto* serve = app.add_subcommand("serve", "Run the submission webhook service");
    serve->add_option("--config", config, "pipeline config JSON")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic transcript with ground truth");
    synth->add_option("--curriculum", curriculum)->required();
    synth->add_option("--spec", spec, "synth/v1 spec JSON")->required();
    synth->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    auto opt_path = [](const std::string& s) {
        return s.empty() ? std::optional<fs::path>{} : std::optional<fs::path>{s};
    };

    try {
        if (validate->parsed()) return cmd_validate(curriculum);
        if (evaluate->parsed())
            return cmd_evaluate(curriculum, week, transcript, opt_path(meta), format, out,
                                backend, opt_path(config));
        if (aggregate->parsed())
            return cmd_aggregate(curriculum, store, week,
                                 compare_to.empty() ? std::optional<std::string>{}
                                                    : std::optional<std::string>{compare_to});
        if (promptgen->parsed())
            return cmd_promptgen(curriculum, week, out, opt_path(persona), opt_path(pedagogy));
        if (serve->parsed()) return cmd_serve(config);
        if (synth->parsed()) return cmd_synth(curriculum, spec, out);
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at " << (e.line_based ? "line " : "offset ") << e.offset
                  << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
