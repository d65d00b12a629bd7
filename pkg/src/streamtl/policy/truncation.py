"""Segment truncation decision."""

from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from streamtl.config.schema import PolicyConfig
from streamtl.models import Transcription, TruncationRule


class TruncationDecision(BaseModel):
    """Whether and where chunk n closes the current segment."""

    model_config = ConfigDict(frozen=True)

    triggered: bool = False
    rule: TruncationRule | None = None
    a_new: int | None = None
    requires_retranscription: bool = False


NO_TRUNCATION = TruncationDecision()


def _is_stable(queue: Sequence[Transcription], current: str, window: int) -> bool:
    needed = window - 1
    if len(queue) < needed:
        return False
    return all(entry.normalized == current for entry in queue[-needed:])


def _completes_sentence(previous: str, current: str, terminal_punct: str) -> bool:
    """True if previous ends a sentence and current adds whitespace-separated
    words after it; a token continuing past the punctuation does not count.
    """
    if not previous or previous[-1] not in terminal_punct:
        return False
    if not current.startswith(previous):
        return False
    rest = current[len(previous) :]
    return rest[:1].isspace() and bool(rest.strip())


def check_truncation(
    queue: Sequence[Transcription],
    x_n: Transcription,
    n: int,
    a_m: int,
    config: PolicyConfig,
) -> TruncationDecision:
    """Decide whether chunk n truncates the segment started after chunk a_m.

    Rules, first match wins:
        stability: x_n equals the previous stability_window - 1 transcriptions
            (silence or exhausted input); the segment closes at n
        sentence: x^(l), l = n-1 then n-2, ends with terminal punctuation and
            x_n continues it with new words; the segment closes at l and the
            chunks after l must be re-transcribed
        forced: the segment reached max_segment_chunks; it closes at n

    Args:
        queue: Transcriptions of chunks a_m+1 .. n-1
        x_n: Transcription of chunks a_m+1 .. n
        n: Chunk being processed
        a_m: Chunk index of the last truncation
        config: Engine configuration
    """
    current = x_n.normalized

    if _is_stable(queue, current, config.stability_window):
        return TruncationDecision(
            triggered=True, rule=TruncationRule.STABILITY, a_new=n
        )

    for offset in (1, 2):
        l = n - offset  # noqa: E741
        if offset > len(queue) or l <= a_m:
            break
        if _completes_sentence(
            queue[-offset].normalized, current, config.terminal_punct
        ):
            return TruncationDecision(
                triggered=True,
                rule=TruncationRule.SENTENCE,
                a_new=l,
                requires_retranscription=True,
            )

    if n - a_m >= config.max_segment_chunks:
        return TruncationDecision(triggered=True, rule=TruncationRule.FORCED, a_new=n)

    return NO_TRUNCATION


def check_gold_truncation(n: int, a_m: int, config: PolicyConfig) -> TruncationDecision:
    """Truncate at annotated sentence ends instead of reading the transcriptions.

    The segment closes at n when chunk n holds the end of a sentence span
    (``config.sentence_boundaries``); the forced rule still caps its length.
    """
    if n in config.sentence_boundaries:
        return TruncationDecision(triggered=True, rule=TruncationRule.GOLD, a_new=n)
    if n - a_m >= config.max_segment_chunks:
        return TruncationDecision(triggered=True, rule=TruncationRule.FORCED, a_new=n)
    return NO_TRUNCATION
