"""Smoke tests for the python bindings: end-to-end over the bundled fixtures."""

import os
from pathlib import Path

import pytest

import engagekit as ek

FIXTURES = Path(os.environ.get("ENGAGEKIT_FIXTURES", Path(__file__).parent.parent / "fixtures"))


@pytest.fixture(scope="module")
def curriculum():
    return ek.parse_curriculum(FIXTURES.joinpath("curriculum.json").read_text())


def test_curriculum_shape(curriculum):
    assert curriculum.course_id == "cloud-101"
    assert [len(w.subtopics) for m in curriculum.modules for w in m.weeks] == [20, 21, 6, 5]
    assert ek.validate_curriculum(curriculum) == []


def test_word_count():
    assert ek.word_count("what is a hypervisor") == 4
    assert ek.word_count("") == 0
    assert ek.word_count("  VM  vs.  container  ") == 3


def test_transcript_to_report(curriculum):
    meta = ek.SubmissionMeta()
    meta.submission_id = "sub-0001"
    meta.student_pseudonym = "anon-03"
    meta.week_id = "w1"
    meta.submitted_at = 1758000000
    transcript = ek.parse_transcript(
        FIXTURES.joinpath("transcript-w1.jsonl").read_text(),
        ek.TranscriptFormat.CanonicalJsonLines,
        meta,
    )
    assert len(transcript.turns) == 12

    subtopics = ek.subtopics_for_week(curriculum, "w1")
    assessment = ek.evaluate_heuristic(transcript, "w1", subtopics)
    assert assessment.engaged_count() == 3

    report = ek.build_report(transcript, assessment, len(subtopics))
    assert report.topic_coverage == pytest.approx(0.15)
    assert report.avg_topic_depth == pytest.approx(2.0)

    doc = ek.render_student_report(report, curriculum.modules[0].weeks[0], 1758000000)
    assert "15%" in doc.body
    assert doc.body.startswith("<!DOCTYPE html>")


def test_aggregation_matches_published_changes():
    def make_report(week, engaged, total, depth, turn_length, i):
        r = ek.EngagementReport()
        r.submission_id = f"{week}-{i}"
        r.student_pseudonym = f"anon-{i}"
        r.week_id = week
        r.total_subtopics = total
        r.engaged_subtopics = engaged
        r.topic_coverage = engaged / total
        r.avg_topic_depth = depth
        r.avg_turn_length_per_topic = turn_length
        return r

    week1 = [make_report("w1", 21 + i - 8, 40, 1.33 + 0.05 * (i - 8), 48.2 + 2 * (i - 8), i)
             for i in range(17)]
    week2 = [make_report("w2", 31 + i - 8, 100, 2.06 + 0.05 * (i - 8), 54.4 + 1.5 * (i - 8), i)
             for i in range(17)]
    cmp = ek.compare_weeks(ek.aggregate_class(week1), ek.aggregate_class(week2))
    assert ek.format_pct_change(cmp.pct_change_coverage) == "-41%"
    assert ek.format_pct_change(cmp.pct_change_depth) == "+55%"
    assert ek.format_pct_change(cmp.pct_change_turn_length) == "+13%"


def test_promptgen_guardrails(curriculum):
    config = ek.assemble_agent_config(curriculum, "w1")
    assert ek.GUARDRAIL_SCOPE_CLAUSE in config.assembled
    assert ek.GUARDRAIL_ACCURACY_CLAUSE in config.assembled
    assert ek.STARTER_PROMPT_PROGRESS in config.starter_prompts
    assert ek.STARTER_PROMPT_QUIZ in config.starter_prompts


def test_synth_recovery(curriculum):
    spec = ek.SynthSpec()
    spec.seed = 5
    spec.week_id = "w1"
    spec.target_coverage = 0.15
    spec.depth_histogram = {1: 1, 2: 1, 3: 1}
    subtopics = ek.subtopics_for_week(curriculum, "w1")
    result = ek.recovery_check(spec, subtopics)
    assert result.exact()
    assert result.recovered.topic_coverage == pytest.approx(0.15)


def test_errors_surface_as_python_exceptions(curriculum):
    with pytest.raises(ek.EngagekitError):
        ek.subtopics_for_week(curriculum, "w99")
