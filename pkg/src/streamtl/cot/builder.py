"""Streaming chain-of-thought training examples.

Each example pairs a prefix of a source stream, cut at a uniformly sampled
chunk, with the transcript of that prefix and the full translation of the
whole source.
"""

import hashlib
import logging
from collections.abc import Sequence
from enum import Enum
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from streamtl.backends.fixture import Fixture, load_manifest
from streamtl.backends.protocol import (
    COT_SEPARATOR,
    DEFAULT_COT_PROMPT,
    default_chunk_ms,
    parse_cot_output,
    render_prompt,
)
from streamtl.exceptions import ConfigurationError, ManifestError, StreamError
from streamtl.metrics.wer import word_error_rate

logger = logging.getLogger(__name__)


class ExampleKind(str, Enum):
    STREAMING = "streaming"
    NON_STREAMING = "non_streaming"


class CotExample(BaseModel):
    """One training example: partial speech, its transcript, full translation."""

    model_config = ConfigDict(frozen=True)

    source_id: str
    truncate_chunk: int = Field(..., ge=0)
    truncate_ms: int = Field(..., ge=0)
    partial_transcript: str
    full_translation: str
    prompt: str
    kind: ExampleKind

    def training_target(self) -> str:
        """Model output the example teaches: transcript, separator, translation."""
        return f"{self.partial_transcript} {COT_SEPARATOR} {self.full_translation}"


def derive_seed(seed: int, key: str) -> int:
    """Sub-seed for one component, stable across runs and platforms."""
    digest = int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "big")
    return int(np.random.SeedSequence([seed, digest]).generate_state(1)[0])


def sample_truncation(
    fixture: Fixture,
    rng_seed: int | np.random.Generator,
    chunk_ms: int | None = None,
) -> int:
    """Draw a truncation chunk uniformly from 1..N.

    Raises:
        StreamError: If the fixture has no chunks
    """
    total = fixture.total_chunks(chunk_ms)
    if total < 1:
        raise StreamError(f"{fixture.source_id} has no audio to truncate")
    rng = (
        rng_seed
        if isinstance(rng_seed, np.random.Generator)
        else np.random.default_rng(rng_seed)
    )
    return int(rng.integers(1, total + 1))


def partial_transcript(fixture: Fixture, t_ms: int | float) -> str:
    """Transcript of the source words that have ended by t_ms."""
    return fixture.transcript_until(t_ms)


def _choose_streaming(
    streaming_ms: int, total_ms: int, duration: int, ratio: float
) -> bool:
    new_total = total_ms + duration
    if new_total == 0:
        return False
    with_streaming = abs((streaming_ms + duration) / new_total - ratio)
    without = abs(streaming_ms / new_total - ratio)
    return with_streaming < without


def build_dataset(
    manifest: str | Path | Sequence[Fixture],
    streaming_ratio: float = 0.5,
    seed: int = 0,
    target_lang: str = "Chinese",
    chunk_ms: int | None = None,
    template: str = DEFAULT_COT_PROMPT,
) -> list[CotExample]:
    """Build one example per fixture, ordered by source id.

    The kind of each example is picked greedily so that the streaming share
    of cumulative audio duration tracks streaming_ratio; ties go to
    non-streaming. Truncation points come from per-fixture sub-seeds of
    ``seed``, so output does not depend on processing order.

    Args:
        manifest: JSONL manifest path, or already loaded fixtures
        streaming_ratio: Target share of streaming audio, in [0, 1]
        seed: Global seed
        target_lang: Default target language for the prompt
        chunk_ms: Chunk size; defaults by target language
        template: CoT instruction template with a ``{target_lang}`` field

    Raises:
        ConfigurationError: If streaming_ratio is outside [0, 1]
        ManifestError: If the manifest cannot be loaded or is empty
    """
    if not 0.0 <= streaming_ratio <= 1.0:
        raise ConfigurationError(
            f"streaming_ratio must be in [0, 1], got {streaming_ratio}"
        )
    if isinstance(manifest, str | Path):
        fixtures = load_manifest(manifest)
    else:
        fixtures = list(manifest)
    if not fixtures:
        raise ManifestError("No fixtures to build examples from")

    examples = []
    streaming_ms = total_ms = 0
    for fixture in sorted(fixtures, key=lambda f: f.source_id):
        lang = fixture.target_lang or target_lang
        size = chunk_ms or default_chunk_ms(lang)
        total = fixture.total_chunks(size)
        duration = fixture.audio_ms
        if _choose_streaming(streaming_ms, total_ms, duration, streaming_ratio):
            sub_seed = derive_seed(seed, fixture.source_id)
            chunk = sample_truncation(fixture, sub_seed, size)
            transcript = partial_transcript(fixture, chunk * size)
            kind = ExampleKind.STREAMING
            streaming_ms += duration
        else:
            chunk = total
            transcript = fixture.transcript
            kind = ExampleKind.NON_STREAMING
        total_ms += duration
        examples.append(
            CotExample(
                source_id=fixture.source_id,
                truncate_chunk=chunk,
                truncate_ms=chunk * size,
                partial_transcript=transcript,
                full_translation=fixture.reference,
                prompt=render_prompt(lang, template),
                kind=kind,
            )
        )

    streaming = sum(1 for e in examples if e.kind == ExampleKind.STREAMING)
    logger.info(
        "Built %d examples (%d streaming, %d non-streaming)",
        len(examples),
        streaming,
        len(examples) - streaming,
    )
    return examples


def transcript_wer(examples: Sequence[CotExample], outputs: Sequence[str]) -> float:
    """WER of the transcript stage of model outputs on the examples' clips.

    Each output is ``"<transcript> <sep> <translation>"`` and is scored
    against the example's partial transcript.

    Raises:
        MetricError: If outputs and examples differ in number
    """
    transcripts = [parse_cot_output(output)[0] for output in outputs]
    return word_error_rate(
        transcripts, [example.partial_transcript for example in examples]
    )
