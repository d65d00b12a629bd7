"""Aggregation of run summaries into latency-quality curves."""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Mapping
from pathlib import Path

import pandas as pd
from pydantic import BaseModel, Field

from streamtl.backends.fixture import Fixture
from streamtl.config.schema import EvalMode
from streamtl.exceptions import MetricError
from streamtl.fileio import atomic_write_text, write_json
from streamtl.metrics.bleu import Tokenize, corpus_bleu, document_bleu
from streamtl.metrics.latency import average_lagging
from streamtl.metrics.stream import stream_laal
from streamtl.metrics.wer import word_error_rate
from streamtl.models import RunSummary

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    "policy",
    "k",
    "chunk_ms",
    "bleu",
    "al_ms",
    "laal_ms",
    "stream_laal_ms",
]


class CurveRow(BaseModel):
    """Corpus metrics of one (policy, k, chunk_ms) grid point."""

    policy: str
    k: int
    chunk_ms: int
    bleu: float
    al_ms: float | None = None
    laal_ms: float | None = None
    stream_laal_ms: float | None = None
    doc_bleu: float | None = None
    wer: float | None = None
    streams: int = 0
    skipped: int = Field(0, description="streams or sentences without output")


class QualityReport(BaseModel):
    """Curve rows of an evaluated run directory."""

    mode: EvalMode
    tokenize: str
    rows: list[CurveRow]

    def to_frame(self) -> pd.DataFrame:
        """Curve table with the fixed CSV columns, sorted by k."""
        df = pd.DataFrame(
            [row.model_dump(include=set(CURVE_COLUMNS)) for row in self.rows],
            columns=CURVE_COLUMNS,
        )
        df = df.sort_values(["k", "policy", "chunk_ms"], kind="stable")
        return df.reset_index(drop=True)


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def _transcript_wer(
    summaries: list[RunSummary], refs: Mapping[str, Fixture]
) -> float | None:
    """WER of the transcriptions segments were flushed with, if any were kept."""
    if not any(summary.transcript for summary in summaries):
        return None
    references = [refs[summary.source_id].transcript for summary in summaries]
    if not any(references):
        return None
    return word_error_rate([s.transcript for s in summaries], references)


def _sentence_row(
    key: tuple[str, int, int],
    summaries: list[RunSummary],
    refs: Mapping[str, Fixture],
    tokenize: Tokenize,
) -> CurveRow:
    al, laal = [], []
    skipped = 0
    for summary in summaries:
        log = summary.emission_log()
        if not len(log):
            skipped += 1
            continue
        fixture = refs[summary.source_id]
        report = average_lagging(log, ref_len=len(fixture.ref_translation_words))
        al.append(report.al_ms)
        laal.append(report.laal_ms)
    bleu = corpus_bleu(
        [summary.hypothesis for summary in summaries],
        [refs[summary.source_id].reference for summary in summaries],
        tokenize,
    )
    policy, k, chunk_ms = key
    return CurveRow(
        policy=policy,
        k=k,
        chunk_ms=chunk_ms,
        bleu=bleu,
        al_ms=_mean(al),
        laal_ms=_mean(laal),
        wer=_transcript_wer(summaries, refs),
        streams=len(summaries),
        skipped=skipped,
    )


def _stream_row(
    key: tuple[str, int, int],
    summaries: list[RunSummary],
    refs: Mapping[str, Fixture],
    tokenize: Tokenize,
) -> CurveRow:
    sentence_hyps: list[str] = []
    sentence_refs: list[str] = []
    doc_scores, stream_scores, al, laal = [], [], [], []
    skipped = 0
    for summary in summaries:
        fixture = refs[summary.source_id]
        if not fixture.sentence_spans:
            raise MetricError(f"{summary.source_id} has no sentence spans")
        spans = list(fixture.sentence_spans)
        log = summary.emission_log()
        report = stream_laal(log, spans)
        skipped += report.skipped
        pieces = report.segmentation.pieces(log.words)
        for span, piece in zip(spans, pieces, strict=True):
            sentence_hyps.append(" ".join(piece))
            sentence_refs.append(span.ref)
        if not math.isnan(report.stream_laal_ms):
            stream_scores.append(report.stream_laal_ms)
        doc_scores.append(
            document_bleu(summary.hypothesis, [span.ref for span in spans], tokenize)
        )
        if len(log):
            doc_report = average_lagging(
                log, ref_len=sum(len(span.ref.split()) for span in spans)
            )
            al.append(doc_report.al_ms)
            laal.append(doc_report.laal_ms)
    policy, k, chunk_ms = key
    return CurveRow(
        policy=policy,
        k=k,
        chunk_ms=chunk_ms,
        bleu=corpus_bleu(sentence_hyps, sentence_refs, tokenize),
        al_ms=_mean(al),
        laal_ms=_mean(laal),
        stream_laal_ms=_mean(stream_scores),
        doc_bleu=_mean(doc_scores),
        wer=_transcript_wer(summaries, refs),
        streams=len(summaries),
        skipped=skipped,
    )


def quality_report(
    run_summaries: Iterable[RunSummary],
    refs: Mapping[str, Fixture],
    mode: EvalMode | str,
    tokenize: Tokenize = "whitespace_punct",
) -> QualityReport:
    """Score run summaries, one curve row per (policy, k, chunk_ms).

    Sentence mode scores clips with corpus BLEU, AL and LAAL. Stream mode
    resegments each document against its sentence spans and reports
    sentence-level BLEU and StreamLAAL, plus document-level AL and LAAL.
    Both modes report the WER of the flushed transcriptions against the
    fixture transcripts; it stays out of the curve CSV.

    Raises:
        MetricError: If there are no summaries or a reference is missing
    """
    mode = EvalMode(mode)
    groups: dict[tuple[str, int, int], list[RunSummary]] = defaultdict(list)
    for summary in run_summaries:
        if summary.source_id not in refs:
            raise MetricError(f"No reference for {summary.source_id}")
        groups[summary.grid_key].append(summary)
    if not groups:
        raise MetricError("No run summaries to evaluate")

    build_row = _sentence_row if mode == EvalMode.SENTENCE else _stream_row
    rows = []
    for key in sorted(groups, key=lambda g: (g[1], g[0], g[2])):
        summaries = sorted(groups[key], key=lambda s: s.source_id)
        row = build_row(key, summaries, refs, tokenize)
        logger.info(
            "%s k=%d chunk=%dms: BLEU %.2f over %d streams",
            key[0],
            key[1],
            key[2],
            row.bleu,
            row.streams,
        )
        rows.append(row)
    return QualityReport(mode=mode, tokenize=tokenize, rows=rows)


def write_report(report: QualityReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``report.json`` and ``curve.csv`` to out_dir."""
    out_dir = Path(out_dir)
    json_path = write_json(out_dir / "report.json", report.model_dump(mode="json"))
    csv_path = atomic_write_text(
        out_dir / "curve.csv", report.to_frame().to_csv(index=False)
    )
    logger.info("Wrote %s and %s", json_path, csv_path)
    return json_path, csv_path
