#!/usr/bin/env python3
"""Regenerate the golden documents under tests/fixtures/golden/.

Run after an intentional renderer change, review the diff, commit the result:

    PYTHONPATH=build/python python3 scripts/generate_goldens.py
"""

from pathlib import Path

import engagekit as ek

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"

STUDENT_TS = 1758000000
CLASS_TS = 1758700000


def make_report(week, engaged, total, depth, turn_length, i):
    r = ek.EngagementReport()
    r.submission_id = f"{week}-sub-{i}"
    r.student_pseudonym = f"anon-{i}"
    r.week_id = week
    r.total_subtopics = total
    r.engaged_subtopics = engaged
    r.topic_coverage = engaged / total
    r.avg_topic_depth = depth
    r.avg_turn_length_per_topic = turn_length
    return r


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    curriculum = ek.parse_curriculum((FIXTURES / "curriculum.json").read_text())

    # Student feedback for the week-1 fixture submission.
    meta = ek.SubmissionMeta()
    meta.submission_id = "sub-0001"
    meta.student_pseudonym = "anon-03"
    meta.week_id = "w1"
    meta.submitted_at = STUDENT_TS
    transcript = ek.parse_transcript(
        (FIXTURES / "transcript-w1.jsonl").read_text(),
        ek.TranscriptFormat.CanonicalJsonLines,
        meta,
    )
    subtopics = ek.subtopics_for_week(curriculum, "w1")
    assessment = ek.evaluate_heuristic(transcript, "w1", subtopics)
    report = ek.build_report(transcript, assessment, len(subtopics))
    week = curriculum.modules[0].weeks[0]
    doc = ek.render_student_report(report, week, STUDENT_TS)
    (GOLDEN / doc.filename()).write_text(doc.body)
    print("wrote", GOLDEN / doc.filename())

    # Class comparison document over the acceptance fixture report sets.
    week1 = [make_report("w1", 21 + i - 8, 40, 1.33 + 0.05 * (i - 8), 48.2 + 2.0 * (i - 8), i)
             for i in range(17)]
    week2 = [make_report("w2", 31 + i - 8, 100, 2.06 + 0.05 * (i - 8), 54.4 + 1.5 * (i - 8), i)
             for i in range(17)]
    agg1 = ek.aggregate_class(week1)
    agg2 = ek.aggregate_class(week2)
    cmp = ek.compare_weeks(agg1, agg2)
    class_doc = ek.render_class_report([agg1, agg2], cmp, CLASS_TS)
    (GOLDEN / class_doc.filename()).write_text(class_doc.body)
    print("wrote", GOLDEN / class_doc.filename())


if __name__ == "__main__":
    main()
