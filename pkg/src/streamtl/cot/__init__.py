"""Streaming chain-of-thought training data."""

from streamtl.cot.builder import (
    CotExample,
    ExampleKind,
    build_dataset,
    derive_seed,
    partial_transcript,
    sample_truncation,
    transcript_wer,
)

__all__ = [
    "CotExample",
    "ExampleKind",
    "build_dataset",
    "derive_seed",
    "partial_transcript",
    "sample_truncation",
    "transcript_wer",
]
