"""StreamTL - streaming speech translation with a speech chain of thought."""

from streamtl.harness import Harness, evaluate_run
from streamtl.policy import run_stream, step, wait_k_policy

__all__ = ["Harness", "evaluate_run", "run_stream", "step", "wait_k_policy"]
