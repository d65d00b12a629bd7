"""Lag-k generation decision."""

from pydantic import BaseModel, ConfigDict, Field


class GenerationDecision(BaseModel):
    """How many target words chunk n may emit, and from what."""

    model_config = ConfigDict(frozen=True)

    allowed: int = Field(..., ge=0)
    word_count: int
    k: int
    already_emitted: int


def allowed_output_count(word_count: int, k: int, already_emitted: int) -> int:
    """O = max(0, C - k - already_emitted).

    Clamped at zero: emitted words are never retracted when the
    transcription shrinks.
    """
    return max(0, word_count - k - already_emitted)


def decide_generation(
    word_count: int, k: int, already_emitted: int
) -> GenerationDecision:
    return GenerationDecision(
        allowed=allowed_output_count(word_count, k, already_emitted),
        word_count=word_count,
        k=k,
        already_emitted=already_emitted,
    )
