#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "engagekit/curriculum.hpp"
#include "engagekit/errors.hpp"
#include "engagekit/evaluator.hpp"
#include "engagekit/text.hpp"
#include "engagekit/metrics.hpp"
#include "engagekit/pipeline.hpp"
#include "engagekit/promptgen.hpp"
#include "engagekit/remote.hpp"
#include "engagekit/report.hpp"
#include "engagekit/synth.hpp"

namespace py = pybind11;
using namespace engagekit;

namespace {

// std::span is awkward across the boundary; bind vector-taking wrappers.
AssessmentSet py_evaluate_heuristic(const Transcript& t, const std::string& week_id,
                                    const std::vector<Subtopic>& subtopics,
                                    const RubricConfig& rubric) {
    return evaluate_heuristic(t, week_id, subtopics, rubric);
}

SynthResult py_generate_transcript(const SynthSpec& spec,
                                   const std::vector<Subtopic>& subtopics) {
    return generate_transcript(spec, subtopics);
}

RecoveryResult py_recovery_check(const SynthSpec& spec, const std::vector<Subtopic>& subtopics) {
    return recovery_check(spec, subtopics);
}

AssessmentSet py_evaluate_remote(const Transcript& t, const std::vector<Subtopic>& subtopics,
                                 const RemoteBackendConfig& cfg, const std::string& prompt) {
    return evaluate_remote(t, subtopics, cfg, prompt);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Curriculum-driven instructor-agent configuration and chat-transcript "
              "engagement analytics";

    py::register_exception<Error>(m, "EngagekitError");

    py::enum_<BloomLevel>(m, "BloomLevel")
        .value("Remember", BloomLevel::Remember)
        .value("Understand", BloomLevel::Understand)
        .value("Apply", BloomLevel::Apply)
        .value("Analyze", BloomLevel::Analyze)
        .value("Evaluate", BloomLevel::Evaluate)
        .value("Create", BloomLevel::Create);

    py::class_<Subtopic>(m, "Subtopic")
        .def(py::init<>())
        .def_readwrite("subtopic_id", &Subtopic::subtopic_id)
        .def_readwrite("title", &Subtopic::title)
        .def_readwrite("keywords", &Subtopic::keywords)
        .def_readwrite("learning_outcome", &Subtopic::learning_outcome)
        .def_readwrite("bloom_level", &Subtopic::bloom_level)
        .def_readwrite("tutorial_only", &Subtopic::tutorial_only);

    py::class_<WeekSpec>(m, "WeekSpec")
        .def_readonly("week_id", &WeekSpec::week_id)
        .def_readonly("topic_title", &WeekSpec::topic_title)
        .def_readonly("subtopics", &WeekSpec::subtopics)
        .def_readonly("starter_prompts", &WeekSpec::starter_prompts);

    py::class_<ModuleSpec>(m, "ModuleSpec")
        .def_readonly("module_id", &ModuleSpec::module_id)
        .def_readonly("title", &ModuleSpec::title)
        .def_readonly("weeks", &ModuleSpec::weeks);

    py::class_<Curriculum>(m, "Curriculum")
        .def_readonly("course_id", &Curriculum::course_id)
        .def_readonly("title", &Curriculum::title)
        .def_readonly("modules", &Curriculum::modules);

    py::class_<Violation>(m, "Violation")
        .def_readonly("path", &Violation::path)
        .def_readonly("message", &Violation::message)
        .def("__repr__", [](const Violation& v) { return v.path + ": " + v.message; });

    m.def("parse_curriculum", [](const std::string& doc) { return parse_curriculum(doc); },
          py::arg("document"));
    m.def("serialize_curriculum", &serialize_curriculum);
    m.def("validate_curriculum", &validate_curriculum);
    m.def("subtopics_for_week",
          [](const Curriculum& c, const std::string& week_id) {
              return subtopics_for_week(c, week_id);
          },
          py::arg("curriculum"), py::arg("week_id"));

    py::enum_<Role>(m, "Role").value("Student", Role::Student).value("Agent", Role::Agent);

    py::enum_<TranscriptFormat>(m, "TranscriptFormat")
        .value("CanonicalJsonLines", TranscriptFormat::CanonicalJsonLines)
        .value("PlainTextExport", TranscriptFormat::PlainTextExport);

    py::class_<Turn>(m, "Turn")
        .def_readonly("index", &Turn::index)
        .def_readonly("role", &Turn::role)
        .def_readonly("text", &Turn::text)
        .def_readonly("word_count", &Turn::word_count);

    py::class_<SubmissionMeta>(m, "SubmissionMeta")
        .def(py::init<>())
        .def_readwrite("submission_id", &SubmissionMeta::submission_id)
        .def_readwrite("student_pseudonym", &SubmissionMeta::student_pseudonym)
        .def_readwrite("week_id", &SubmissionMeta::week_id)
        .def_readwrite("submitted_at", &SubmissionMeta::submitted_at);

    py::class_<Transcript>(m, "Transcript")
        .def_readonly("submission_id", &Transcript::submission_id)
        .def_readonly("student_pseudonym", &Transcript::student_pseudonym)
        .def_readonly("week_id", &Transcript::week_id)
        .def_readonly("submitted_at", &Transcript::submitted_at)
        .def_readonly("turns", &Transcript::turns);

    m.def("parse_transcript",
          [](const std::string& raw, TranscriptFormat format, const SubmissionMeta& meta) {
              return parse_transcript(raw, format, meta);
          },
          py::arg("raw"), py::arg("format"), py::arg("meta"));
    m.def("serialize_canonical", &serialize_canonical);
    m.def("word_count", [](const std::string& text) { return word_count(text); },
          py::arg("text"));
    m.def("student_turns", &student_turns);

    py::enum_<Backend>(m, "Backend")
        .value("Heuristic", Backend::Heuristic)
        .value("Remote", Backend::Remote);

    py::class_<SubtopicAssessment>(m, "SubtopicAssessment")
        .def_readonly("subtopic_id", &SubtopicAssessment::subtopic_id)
        .def_readonly("depth", &SubtopicAssessment::depth)
        .def_readonly("attributed_student_turns", &SubtopicAssessment::attributed_student_turns)
        .def_readonly("evidence", &SubtopicAssessment::evidence);

    py::class_<AssessmentSet>(m, "AssessmentSet")
        .def_readonly("week_id", &AssessmentSet::week_id)
        .def_readonly("submission_id", &AssessmentSet::submission_id)
        .def_readonly("backend", &AssessmentSet::backend)
        .def_readonly("entries", &AssessmentSet::entries)
        .def_readonly("unattributed_student_turns", &AssessmentSet::unattributed_student_turns)
        .def("engaged_count", &AssessmentSet::engaged_count);

    py::class_<RubricConfig>(m, "RubricConfig")
        .def(py::init<>())
        .def_readwrite("brief_word_limit", &RubricConfig::brief_word_limit)
        .def_readwrite("deep_turn_words", &RubricConfig::deep_turn_words)
        .def_readwrite("comparison_markers", &RubricConfig::comparison_markers)
        .def_readwrite("reasoning_markers", &RubricConfig::reasoning_markers);

    m.def("evaluate_heuristic", &py_evaluate_heuristic, py::arg("transcript"), py::arg("week_id"),
          py::arg("subtopics"), py::arg("rubric") = RubricConfig{});
    m.def("serialize_assessment", &serialize_assessment);
    m.def("depth_label", [](int depth) { return std::string(depth_label(depth)); });

    py::class_<RemoteBackendConfig>(m, "RemoteBackendConfig")
        .def(py::init<>())
        .def_readwrite("endpoint_url", &RemoteBackendConfig::endpoint_url)
        .def_readwrite("model_name", &RemoteBackendConfig::model_name)
        .def_readwrite("auth_token_env_var", &RemoteBackendConfig::auth_token_env_var)
        .def_readwrite("max_retries", &RemoteBackendConfig::max_retries)
        .def_readwrite("timeout_seconds", &RemoteBackendConfig::timeout_seconds);

    m.def("evaluate_remote", &py_evaluate_remote, py::arg("transcript"), py::arg("subtopics"),
          py::arg("config"), py::arg("rubric_prompt"));
    m.def("default_rubric_prompt", &default_rubric_prompt);

    py::class_<SubtopicMetrics>(m, "SubtopicMetrics")
        .def_readonly("depth", &SubtopicMetrics::depth)
        .def_readonly("mean_student_words", &SubtopicMetrics::mean_student_words)
        .def_readonly("message_count", &SubtopicMetrics::message_count);

    py::class_<EngagementReport>(m, "EngagementReport")
        .def(py::init<>())
        .def_readwrite("submission_id", &EngagementReport::submission_id)
        .def_readwrite("student_pseudonym", &EngagementReport::student_pseudonym)
        .def_readwrite("week_id", &EngagementReport::week_id)
        .def_readwrite("total_subtopics", &EngagementReport::total_subtopics)
        .def_readwrite("engaged_subtopics", &EngagementReport::engaged_subtopics)
        .def_readwrite("topic_coverage", &EngagementReport::topic_coverage)
        .def_readwrite("avg_topic_depth", &EngagementReport::avg_topic_depth)
        .def_readwrite("avg_turn_length_per_topic",
                       &EngagementReport::avg_turn_length_per_topic)
        .def_readwrite("pooled_turn_length", &EngagementReport::pooled_turn_length)
        .def_readonly("per_subtopic", &EngagementReport::per_subtopic);

    py::class_<MetricStats>(m, "MetricStats")
        .def_readonly("median", &MetricStats::median)
        .def_readonly("min", &MetricStats::min)
        .def_readonly("max", &MetricStats::max)
        .def_readonly("q1", &MetricStats::q1)
        .def_readonly("q3", &MetricStats::q3);

    py::class_<ClassAggregate>(m, "ClassAggregate")
        .def_readonly("week_id", &ClassAggregate::week_id)
        .def_readonly("n_students", &ClassAggregate::n_students)
        .def_readonly("coverage", &ClassAggregate::coverage)
        .def_readonly("avg_depth", &ClassAggregate::avg_depth)
        .def_readonly("avg_turn_length", &ClassAggregate::avg_turn_length);

    py::class_<WeekComparison>(m, "WeekComparison")
        .def_readonly("week_a", &WeekComparison::week_a)
        .def_readonly("week_b", &WeekComparison::week_b)
        .def_readonly("pct_change_coverage", &WeekComparison::pct_change_coverage)
        .def_readonly("pct_change_depth", &WeekComparison::pct_change_depth)
        .def_readonly("pct_change_turn_length", &WeekComparison::pct_change_turn_length);

    m.def("topic_coverage", &topic_coverage, py::arg("assessment"), py::arg("total_subtopics"));
    m.def("avg_topic_depth", &avg_topic_depth);
    m.def("avg_turn_length_per_topic", &avg_turn_length_per_topic);
    m.def("build_report", &build_report, py::arg("transcript"), py::arg("assessment"),
          py::arg("total_subtopics"));
    m.def("aggregate_class", &aggregate_class);
    m.def("compare_weeks", &compare_weeks);
    m.def("format_pct_change", &format_pct_change);
    m.def("serialize_report", &serialize_report);
    m.def("parse_report", &parse_report);
    m.def("serialize_aggregate", &serialize_aggregate);

    py::class_<RenderedDocument>(m, "RenderedDocument")
        .def_readonly("doc_id", &RenderedDocument::doc_id)
        .def_readonly("body", &RenderedDocument::body)
        .def_readonly("charts", &RenderedDocument::charts)
        .def("filename", &RenderedDocument::filename);

    m.def("chart_bars", &chart_bars, py::arg("labels"), py::arg("values"), py::arg("axis_title"));
    m.def("render_student_report", &render_student_report, py::arg("report"), py::arg("week"),
          py::arg("created_at") = std::nullopt);
    m.def("render_class_report", &render_class_report, py::arg("aggregates"),
          py::arg("comparison") = std::nullopt, py::arg("created_at") = std::nullopt);

    py::class_<AgentConfig>(m, "AgentConfig")
        .def_readonly("week_id", &AgentConfig::week_id)
        .def_readonly("persona_layer", &AgentConfig::persona_layer)
        .def_readonly("pedagogy_layer", &AgentConfig::pedagogy_layer)
        .def_readonly("knowledge_layer", &AgentConfig::knowledge_layer)
        .def_readonly("starter_prompts", &AgentConfig::starter_prompts)
        .def_readonly("assembled", &AgentConfig::assembled);

    m.def("assemble_agent_config", &assemble_agent_config, py::arg("curriculum"),
          py::arg("week_id"), py::arg("persona_template") = kDefaultPersonaTemplate,
          py::arg("pedagogy_template") = kDefaultPedagogyTemplate);
    m.def("serialize_agent_config", &serialize_agent_config);
    m.def("parse_agent_config", &parse_agent_config);

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("seed", &SynthSpec::seed)
        .def_readwrite("week_id", &SynthSpec::week_id)
        .def_readwrite("target_coverage", &SynthSpec::target_coverage)
        .def_readwrite("depth_histogram", &SynthSpec::depth_histogram)
        .def_readwrite("words_mean", &SynthSpec::words_mean)
        .def_readwrite("words_spread", &SynthSpec::words_spread)
        .def_readwrite("messages_per_engaged_subtopic",
                       &SynthSpec::messages_per_engaged_subtopic);

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("transcript", &SynthResult::transcript)
        .def_readonly("planted", &SynthResult::planted);

    py::class_<RecoveryResult>(m, "RecoveryResult")
        .def_readonly("planted", &RecoveryResult::planted)
        .def_readonly("recovered", &RecoveryResult::recovered)
        .def_readonly("coverage_delta", &RecoveryResult::coverage_delta)
        .def_readonly("max_depth_delta", &RecoveryResult::max_depth_delta)
        .def_readonly("avg_depth_delta", &RecoveryResult::avg_depth_delta)
        .def_readonly("turn_length_delta", &RecoveryResult::turn_length_delta)
        .def("exact", &RecoveryResult::exact);

    m.def("parse_synth_spec", &parse_synth_spec);
    m.def("serialize_synth_spec", &serialize_synth_spec);
    m.def("generate_transcript", &py_generate_transcript, py::arg("spec"), py::arg("subtopics"));
    m.def("recovery_check", &py_recovery_check, py::arg("spec"), py::arg("subtopics"));

    m.attr("GUARDRAIL_SCOPE_CLAUSE") = std::string(kGuardrailScopeClause);
    m.attr("GUARDRAIL_ACCURACY_CLAUSE") = std::string(kGuardrailAccuracyClause);
    m.attr("STARTER_PROMPT_PROGRESS") = std::string(kStarterPromptProgress);
    m.attr("STARTER_PROMPT_QUIZ") = std::string(kStarterPromptQuiz);
    m.attr("__version__") = "0.1.0";
}
