"""StreamLAAL: per-sentence LAAL of a resegmented document hypothesis."""

import logging
import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from streamtl.exceptions import MetricError
from streamtl.metrics.latency import LatencyReport, lagging_from_delays
from streamtl.metrics.segmentation import Segmentation, mwer_segment
from streamtl.models import EmissionLog, SentenceSpan

logger = logging.getLogger(__name__)


class StreamLatencyReport(BaseModel):
    """Per-sentence latency of a document run.

    ``sentences[r]`` is None when the resegmented piece for sentence r is
    empty; such sentences are counted in ``skipped`` and left out of the mean.
    """

    model_config = ConfigDict(frozen=True)

    sentences: tuple[LatencyReport | None, ...]
    stream_laal_ms: float
    skipped: int
    segmentation: Segmentation


def stream_laal(
    doc_log: EmissionLog, sentence_spans: Sequence[SentenceSpan]
) -> StreamLatencyReport:
    """Resegment a document hypothesis and average per-sentence LAAL.

    Delays are measured from each sentence's start and may be negative when
    resegmentation assigns a word to a sentence that had not started yet.

    Raises:
        MetricError: If there are no sentence spans
    """
    if not sentence_spans:
        raise MetricError("StreamLAAL needs at least one sentence span")
    segmentation = mwer_segment(doc_log.words, [span.ref for span in sentence_spans])
    pieces = segmentation.pieces(doc_log.items)

    reports: list[LatencyReport | None] = []
    for span, piece in zip(sentence_spans, pieces, strict=True):
        if not piece:
            reports.append(None)
            continue
        delays = [item.ms - span.start_ms for item in piece]
        reports.append(
            lagging_from_delays(
                delays, span.end_ms - span.start_ms, ref_len=len(span.ref.split())
            )
        )

    scored = [report.laal_ms for report in reports if report is not None]
    skipped = len(reports) - len(scored)
    if skipped:
        logger.warning(
            "%d of %d sentences have no hypothesis words", skipped, len(reports)
        )
    mean = math.fsum(scored) / len(scored) if scored else math.nan
    return StreamLatencyReport(
        sentences=tuple(reports),
        stream_laal_ms=mean,
        skipped=skipped,
        segmentation=segmentation,
    )
