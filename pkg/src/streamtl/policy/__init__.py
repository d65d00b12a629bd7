"""Streaming read/write policies: truncation, lag-k generation and wait-k."""

from streamtl.policy.engine import (
    RunResult,
    StreamingEngine,
    run_stream,
    step,
    wait_k_policy,
)
from streamtl.policy.generation import (
    GenerationDecision,
    allowed_output_count,
    decide_generation,
)
from streamtl.policy.truncation import (
    NO_TRUNCATION,
    TruncationDecision,
    check_gold_truncation,
    check_truncation,
)

__all__ = [
    "NO_TRUNCATION",
    "GenerationDecision",
    "RunResult",
    "StreamingEngine",
    "TruncationDecision",
    "allowed_output_count",
    "check_gold_truncation",
    "check_truncation",
    "decide_generation",
    "run_stream",
    "step",
    "wait_k_policy",
]
