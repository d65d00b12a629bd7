"""Tests for quality reports and curve files."""

from pathlib import Path

import pandas as pd
import pytest

from streamtl.backends import Fixture, ScriptedBackend
from streamtl.config import EvalMode, PolicyConfig
from streamtl.exceptions import MetricError
from streamtl.metrics import CURVE_COLUMNS, quality_report, write_report
from streamtl.models import ClosedSegment, RunSummary, TruncationRule
from streamtl.policy import run_stream, wait_k_policy

from .conftest import CHUNK_MS, build_fixture


@pytest.fixture
def ten_word_fixture() -> Fixture:
    return build_fixture("ten", tokens=[f"w{i}" for i in range(1, 11)])


def wait_k_summaries(fixtures: list[Fixture], k_values) -> list[RunSummary]:
    backend = ScriptedBackend(fixtures)
    summaries = []
    for k in k_values:
        config = PolicyConfig(k=k, chunk_ms=CHUNK_MS, policy_kind="wait_k")
        for fixture in fixtures:
            result = wait_k_policy(fixture.to_stream(CHUNK_MS), backend, config)
            summaries.append(result.summary())
    return summaries


class TestSentenceReport:
    """Tests for sentence-mode reports."""

    def test_one_row_per_k(self, ten_word_fixture: Fixture, six_word_fixture: Fixture):
        fixtures = [ten_word_fixture, six_word_fixture]
        summaries = wait_k_summaries(fixtures, [5, 1, 3])
        refs = {f.source_id: f for f in fixtures}

        report = quality_report(summaries, refs, "sentence")

        assert report.mode == EvalMode.SENTENCE
        assert [row.k for row in report.rows] == [1, 3, 5]
        for row in report.rows:
            assert row.policy == "wait_k"
            assert row.chunk_ms == CHUNK_MS
            assert row.bleu == pytest.approx(100.0)
            assert row.al_ms == pytest.approx(row.k * CHUNK_MS)
            assert row.streams == 2
            assert row.stream_laal_ms is None
            assert row.wer == 0.0

    def test_empty_hypothesis_is_skipped_for_latency(self):
        silent = build_fixture("silent", tokens=[], ends_at=[], total_chunks=2)
        clip = build_fixture("clip")
        summaries = wait_k_summaries([silent, clip], [1])
        refs = {"silent": silent, "clip": clip}

        row = quality_report(summaries, refs, EvalMode.SENTENCE).rows[0]

        assert row.skipped == 1
        assert row.al_ms == pytest.approx(CHUNK_MS)

    def test_transcript_errors(self, six_word_fixture: Fixture):
        (summary,) = wait_k_summaries([six_word_fixture], [1])
        misheard = ClosedSegment(
            a=6, b=6, rule=TruncationRule.END_OF_STREAM, transcript="w1 w2 x w4 w5"
        )
        summary = summary.model_copy(update={"segments": [misheard]})

        row = quality_report([summary], {"clip": six_word_fixture}, "sentence").rows[0]

        assert row.wer == pytest.approx(100.0 * 2 / 6)

    def test_no_transcripts_leaves_wer_empty(self, six_word_fixture: Fixture):
        (summary,) = wait_k_summaries([six_word_fixture], [1])
        summary = summary.model_copy(update={"segments": []})

        row = quality_report([summary], {"clip": six_word_fixture}, "sentence").rows[0]

        assert row.wer is None
        assert "wer" not in CURVE_COLUMNS

    def test_missing_reference(self, six_word_fixture: Fixture):
        summaries = wait_k_summaries([six_word_fixture], [1])
        with pytest.raises(MetricError, match="No reference for clip"):
            quality_report(summaries, {}, "sentence")

    def test_no_summaries(self):
        with pytest.raises(MetricError, match="No run summaries"):
            quality_report([], {}, "sentence")


class TestStreamReport:
    """Tests for stream-mode reports."""

    def test_document_row(self, document_fixture: Fixture):
        backend = ScriptedBackend([document_fixture])
        result = run_stream(
            document_fixture.to_stream(CHUNK_MS),
            backend,
            PolicyConfig(k=1, chunk_ms=CHUNK_MS),
        )

        report = quality_report(
            [result.summary()], {"doc": document_fixture}, EvalMode.STREAM
        )

        row = report.rows[0]
        assert row.policy == "streamuni"
        assert row.bleu == pytest.approx(100.0)
        assert row.doc_bleu == pytest.approx(100.0)
        assert row.stream_laal_ms == pytest.approx(1280.0)
        assert row.al_ms == pytest.approx(896.0)
        assert row.laal_ms == pytest.approx(896.0)
        assert row.skipped == 0
        assert row.wer == 0.0

    def test_requires_sentence_spans(self, six_word_fixture: Fixture):
        summaries = wait_k_summaries([six_word_fixture], [1])
        with pytest.raises(MetricError, match="has no sentence spans"):
            quality_report(summaries, {"clip": six_word_fixture}, "stream")


class TestCurveFiles:
    """Tests for to_frame and write_report."""

    def test_to_frame(self, ten_word_fixture: Fixture):
        summaries = wait_k_summaries([ten_word_fixture], [9, 1])
        report = quality_report(summaries, {"ten": ten_word_fixture}, "sentence")

        df = report.to_frame()

        assert list(df.columns) == CURVE_COLUMNS
        assert df["k"].tolist() == [1, 9]
        assert df["stream_laal_ms"].isna().all()

    def test_write_report(self, tmp_path: Path, ten_word_fixture: Fixture):
        summaries = wait_k_summaries([ten_word_fixture], [1, 3])
        report = quality_report(summaries, {"ten": ten_word_fixture}, "sentence")

        json_path, csv_path = write_report(report, tmp_path / "out")

        assert json_path == tmp_path / "out" / "report.json"
        curve = pd.read_csv(csv_path)
        assert list(curve.columns) == CURVE_COLUMNS
        assert curve["al_ms"].tolist() == pytest.approx([640.0, 1920.0])
