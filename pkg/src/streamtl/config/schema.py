"""Pydantic models for StreamTL configuration validation."""

from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_TERMINAL_PUNCT = ".?!;"
DEFAULT_K_GRID = [1, 3, 5, 7, 9]


class PolicyKind(str, Enum):
    """Read/write policy driving an engine run."""

    STREAMUNI = "streamuni"
    WAIT_K = "wait_k"
    GOLD_SENTENCE = "gold_sentence"


class ClockMode(str, Enum):
    """How emission times are stamped."""

    IDEAL = "ideal"
    WALL = "wall"


class Task(str, Enum):
    """Evaluation task: sentence-level clips or unsegmented documents."""

    SIMULST = "simulst"
    STREAMST = "streamst"


class EvalMode(str, Enum):
    """Metric family used to score a run."""

    SENTENCE = "sentence"
    STREAM = "stream"


TASK_EVAL_MODES = {Task.SIMULST: EvalMode.SENTENCE, Task.STREAMST: EvalMode.STREAM}


def _check_terminal_punct(value: str) -> str:
    if not value:
        raise ValueError("terminal_punct must contain at least one character")
    if any(ch.isspace() for ch in value):
        raise ValueError("terminal_punct must not contain whitespace")
    return value


class PolicyConfig(BaseModel):
    """Configuration of one engine run."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(3, ge=1)
    chunk_ms: int = Field(640, gt=0)
    max_segment_chunks: int = Field(30, ge=1)
    stability_window: int = Field(3, ge=2)
    terminal_punct: str = DEFAULT_TERMINAL_PUNCT
    policy_kind: PolicyKind = PolicyKind.STREAMUNI
    truncation_enabled: bool = True
    generation_enabled: bool = True
    clock: ClockMode = ClockMode.IDEAL
    sentence_boundaries: tuple[int, ...] = ()
    seed: int | None = None

    @field_validator("terminal_punct")
    @classmethod
    def validate_terminal_punct(cls, value: str) -> str:
        return _check_terminal_punct(value)

    @model_validator(mode="after")
    def validate_truncation(self) -> "PolicyConfig":
        if self.max_segment_chunks < self.stability_window:
            raise ValueError("max_segment_chunks must be >= stability_window")
        bounds = self.sentence_boundaries
        if any(b < 1 for b in bounds) or list(bounds) != sorted(set(bounds)):
            raise ValueError("sentence_boundaries must be increasing chunk indices")
        return self


class BackendConfig(BaseModel):
    """Configuration of the incremental-model backend."""

    kind: Literal["scripted", "remote"] = "scripted"
    url: str | None = None
    timeout_s: float = Field(30.0, gt=0)
    token_env: str = "STREAMTL_API_TOKEN"

    @model_validator(mode="after")
    def validate_remote(self) -> "BackendConfig":
        if self.kind == "remote" and not self.url:
            raise ValueError("url is required for remote backend")
        return self


class ExportConfig(BaseModel):
    """Configuration of a dataset export destination."""

    destination: Literal["jsonl", "parquet", "huggingface"] = "jsonl"
    path: str = "./output/cot.jsonl"

    # HuggingFace-specific options
    repo_id: str | None = None
    private: bool = False

    @model_validator(mode="after")
    def validate_destination_config(self) -> "ExportConfig":
        if self.destination == "huggingface" and not self.repo_id:
            raise ValueError("repo_id is required for huggingface destination")
        return self


class RunConfig(BaseModel):
    """Root configuration for a simulation run over a (policy, k, chunk) grid."""

    name: str = "streamtl-run"
    manifest: Path
    backend: BackendConfig = Field(default_factory=BackendConfig)
    policy: PolicyKind = PolicyKind.STREAMUNI
    k_grid: list[int] = Field(
        default_factory=lambda: list(DEFAULT_K_GRID), min_length=1
    )
    chunk_ms: int | None = Field(None, gt=0)
    task: Task = Task.SIMULST
    output_dir: Path = Path("./runs")
    seed: int = 0
    jobs: int = Field(1, ge=1)
    target_lang: str = "Chinese"

    max_segment_chunks: int = Field(30, ge=1)
    stability_window: int = Field(3, ge=2)
    terminal_punct: str = DEFAULT_TERMINAL_PUNCT
    clock: ClockMode = ClockMode.IDEAL
    generation_enabled: bool = True

    @field_validator("k_grid")
    @classmethod
    def validate_k_grid(cls, value: list[int]) -> list[int]:
        if any(k < 1 for k in value):
            raise ValueError("every k must be >= 1")
        return sorted(set(value))

    @field_validator("terminal_punct")
    @classmethod
    def validate_terminal_punct(cls, value: str) -> str:
        return _check_terminal_punct(value)

    @model_validator(mode="after")
    def validate_policy_task(self) -> "RunConfig":
        if self.policy == PolicyKind.GOLD_SENTENCE and self.task != Task.STREAMST:
            raise ValueError("gold_sentence policy requires task streamst")
        if self.policy == PolicyKind.WAIT_K and not self.generation_enabled:
            raise ValueError("wait_k policy cannot run with generation disabled")
        return self

    def policy_config(
        self,
        k: int,
        chunk_ms: int,
        sentence_boundaries: Sequence[int] = (),
        seed: int | None = None,
    ) -> PolicyConfig:
        """Build the engine configuration for one grid point.

        SimulST clips run the generation policy only; StreamST documents
        also truncate. ``sentence_boundaries`` and ``seed`` belong to one
        stream.
        """
        return PolicyConfig(
            k=k,
            chunk_ms=chunk_ms,
            max_segment_chunks=self.max_segment_chunks,
            stability_window=self.stability_window,
            terminal_punct=self.terminal_punct,
            policy_kind=self.policy,
            truncation_enabled=self.task == Task.STREAMST,
            generation_enabled=self.generation_enabled,
            sentence_boundaries=tuple(sentence_boundaries),
            seed=seed,
            clock=self.clock,
        )
