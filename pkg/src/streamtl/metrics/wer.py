"""Word error rate of transcriptions."""

import logging
from collections.abc import Sequence

from streamtl.exceptions import MetricError
from streamtl.metrics.segmentation import word_edit_distance

logger = logging.getLogger(__name__)


def word_error_rate(hypotheses: Sequence[str], references: Sequence[str]) -> float:
    """Corpus WER in percent: total word edits over total reference words.

    Words are whitespace tokens compared lowercased, as in resegmentation.

    Raises:
        MetricError: If the lists differ in length or the references are empty
    """
    if len(hypotheses) != len(references):
        raise MetricError(
            f"{len(hypotheses)} transcriptions for {len(references)} references"
        )
    edits = 0
    ref_words = 0
    for hyp, ref in zip(hypotheses, references, strict=True):
        ref_tokens = ref.split()
        edits += word_edit_distance(hyp.split(), ref_tokens)
        ref_words += len(ref_tokens)
    if ref_words == 0:
        raise MetricError("WER needs at least one reference word")
    logger.debug("WER: %d edits over %d reference words", edits, ref_words)
    return 100.0 * edits / ref_words
