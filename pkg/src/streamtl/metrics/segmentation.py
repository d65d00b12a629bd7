"""Edit-distance resegmentation of a document hypothesis into sentences."""

import logging
from collections.abc import Sequence
from typing import TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict

from streamtl.exceptions import MetricError

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Segmentation(BaseModel):
    """Split points of a hypothesis, one piece per reference sentence.

    ``boundaries`` holds ``len(refs) + 1`` word offsets running from 0 to the
    hypothesis length; piece r is ``hyp[boundaries[r]:boundaries[r + 1]]``.
    """

    model_config = ConfigDict(frozen=True)

    boundaries: tuple[int, ...]
    total_edit_distance: int

    def pieces(self, items: Sequence[T]) -> list[list[T]]:
        return [
            list(items[start:end])
            for start, end in zip(self.boundaries, self.boundaries[1:], strict=False)
        ]


def _distances_from(hyp: Sequence[str], start: int, ref: Sequence[str]) -> np.ndarray:
    """Word Levenshtein distance of ref against hyp[start:p] for every p >= start."""
    width = len(hyp) - start + 1
    offsets = np.arange(width, dtype=np.float64)
    row = offsets.copy()
    tail = np.asarray(hyp[start:], dtype=object)
    for i, word in enumerate(ref, start=1):
        mismatch = (tail != word).astype(np.float64)
        candidate = np.empty(width)
        candidate[0] = i
        candidate[1:] = np.minimum(row[1:] + 1, row[:-1] + mismatch)
        # insertions of hypothesis words: new[j] = min(candidate[j], new[j-1] + 1)
        row = np.minimum.accumulate(candidate - offsets) + offsets
    return row


def word_edit_distance(hyp_words: Sequence[str], ref_words: Sequence[str]) -> int:
    """Word Levenshtein distance, lowercased."""
    hyp = [word.lower() for word in hyp_words]
    ref = [word.lower() for word in ref_words]
    return int(round(_distances_from(hyp, 0, ref)[-1]))


def mwer_segment(
    hyp_words: Sequence[str], ref_sentences: Sequence[str]
) -> Segmentation:
    """Split a hypothesis into len(ref_sentences) pieces with minimum total
    word edit distance.

    Words are compared lowercased on whitespace tokens. Among optimal
    segmentations the one with the earliest boundaries is returned.

    Raises:
        MetricError: If there are no reference sentences
    """
    if not ref_sentences:
        raise MetricError("Resegmentation needs at least one reference sentence")
    hyp = [word.lower() for word in hyp_words]
    refs = [sentence.lower().split() for sentence in ref_sentences]
    size = len(hyp) + 1

    cost = np.full(size, np.inf)
    cost[0] = 0.0
    back: list[np.ndarray] = []
    for ref in refs:
        best = np.full(size, np.inf)
        arg = np.zeros(size, dtype=np.int64)
        for start in range(size):
            if not np.isfinite(cost[start]):
                continue
            candidate = cost[start] + _distances_from(hyp, start, ref)
            better = candidate < best[start:]
            best[start:][better] = candidate[better]
            arg[start:][better] = start
        cost = best
        back.append(arg)

    boundaries = [len(hyp)]
    for arg in reversed(back):
        boundaries.append(int(arg[boundaries[-1]]))
    boundaries.reverse()
    total = int(round(cost[len(hyp)]))
    logger.debug(
        "Resegmented %d words into %d sentences, distance %d",
        len(hyp),
        len(refs),
        total,
    )
    return Segmentation(boundaries=tuple(boundaries), total_edit_distance=total)
