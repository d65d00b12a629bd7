"""Latency and quality metrics for streaming translation runs."""

from streamtl.metrics.bleu import corpus_bleu, document_bleu, tokenize_text
from streamtl.metrics.latency import LatencyReport, average_lagging, lagging_from_delays
from streamtl.metrics.report import (
    CURVE_COLUMNS,
    CurveRow,
    QualityReport,
    quality_report,
    write_report,
)
from streamtl.metrics.segmentation import (
    Segmentation,
    mwer_segment,
    word_edit_distance,
)
from streamtl.metrics.stream import StreamLatencyReport, stream_laal
from streamtl.metrics.wer import word_error_rate

__all__ = [
    "CURVE_COLUMNS",
    "CurveRow",
    "LatencyReport",
    "QualityReport",
    "Segmentation",
    "StreamLatencyReport",
    "average_lagging",
    "corpus_bleu",
    "document_bleu",
    "lagging_from_delays",
    "mwer_segment",
    "quality_report",
    "stream_laal",
    "tokenize_text",
    "word_edit_distance",
    "word_error_rate",
    "write_report",
]
