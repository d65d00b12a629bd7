"""Data models for StreamTL."""

from dataclasses import dataclass
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from streamtl.exceptions import StreamError


class TruncationRule(str, Enum):
    """Why a segment was closed."""

    STABILITY = "stability"
    SENTENCE = "sentence"
    FORCED = "forced"
    GOLD = "gold"
    END_OF_STREAM = "end_of_stream"


@dataclass(frozen=True)
class Chunk:
    """One fixed-duration piece of the source signal.

    Attributes:
        index: 1-based ordinal within its stream
        duration_ms: Chunk duration, identical across a stream
        payload: Opaque audio bytes, empty in scripted mode
    """

    index: int
    duration_ms: int
    payload: bytes = b""


@dataclass(frozen=True)
class SpeechStream:
    """An ordered, chunked source signal."""

    source_id: str
    chunks: tuple[Chunk, ...]

    def __post_init__(self) -> None:
        for position, chunk in enumerate(self.chunks, start=1):
            if chunk.index != position:
                raise StreamError(
                    f"Chunk indices must run 1..N, got {chunk.index} at {position}"
                )
            if chunk.duration_ms <= 0:
                raise StreamError("Chunk duration must be positive")
            if chunk.duration_ms != self.chunks[0].duration_ms:
                raise StreamError("All chunks of a stream must share one duration")

    @classmethod
    def scripted(
        cls, source_id: str, total_chunks: int, chunk_ms: int
    ) -> "SpeechStream":
        """Build a stream of empty-payload chunks for fixture-driven runs."""
        chunks = tuple(Chunk(i, chunk_ms) for i in range(1, total_chunks + 1))
        return cls(source_id=source_id, chunks=chunks)

    @property
    def total_chunks(self) -> int:
        return len(self.chunks)

    @property
    def chunk_ms(self) -> int:
        return self.chunks[0].duration_ms if self.chunks else 0

    @property
    def duration_ms(self) -> int:
        return self.total_chunks * self.chunk_ms


class Word(BaseModel):
    """A whitespace token, punctuation attached, with an optional end time."""

    model_config = ConfigDict(frozen=True)

    token: str = Field(..., min_length=1)
    end_ms: int | None = None

    @field_validator("token")
    @classmethod
    def no_whitespace(cls, value: str) -> str:
        if any(ch.isspace() for ch in value):
            raise ValueError(f"Word token contains whitespace: {value!r}")
        return value


class Transcription(BaseModel):
    """A (possibly timestamped) transcription of a speech prefix."""

    model_config = ConfigDict(frozen=True)

    text: str = ""
    words: tuple[Word, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def fill_words(cls, data: Any) -> Any:
        if isinstance(data, dict) and not data.get("words") and data.get("text"):
            tokens = str(data["text"]).split()
            data = {**data, "words": [{"token": token} for token in tokens]}
        return data

    @model_validator(mode="after")
    def check_words(self) -> "Transcription":
        if [word.token for word in self.words] != self.text.split():
            raise ValueError("Transcription text does not match its words")
        ends = [word.end_ms for word in self.words if word.end_ms is not None]
        if any(later < earlier for earlier, later in zip(ends, ends[1:], strict=False)):
            raise ValueError("Word end times must be nondecreasing")
        return self

    @classmethod
    def from_text(cls, text: str) -> "Transcription":
        return cls(text=text)

    @classmethod
    def from_words(cls, words: list[Word]) -> "Transcription":
        return cls(text=" ".join(word.token for word in words), words=tuple(words))

    @property
    def normalized(self) -> str:
        """Text with whitespace collapsed and trimmed."""
        return " ".join(self.text.split())

    @property
    def word_count(self) -> int:
        return len(self.words)


class Emission(BaseModel):
    """One emitted target word.

    Attributes:
        word: The target token
        position: 1-based position in the document hypothesis
        chunk: Chunk being processed when the word was emitted
        ms: Emission time in milliseconds
    """

    model_config = ConfigDict(frozen=True)

    word: str
    position: int = Field(0, ge=0)
    chunk: int = Field(0, ge=0)
    ms: int | float


class EmissionLog(BaseModel):
    """Per-word emission times of a hypothesis, plus the source duration."""

    model_config = ConfigDict(frozen=True)

    items: tuple[Emission, ...] = ()
    source_duration_ms: int | float

    @model_validator(mode="after")
    def check_order(self) -> "EmissionLog":
        times = [item.ms for item in self.items]
        pairs = zip(times, times[1:], strict=False)
        if any(later < earlier for earlier, later in pairs):
            raise ValueError("Emission times must be nondecreasing")
        return self

    @classmethod
    def from_pairs(
        cls, pairs: list[tuple[str, int | float]], source_duration_ms: int | float
    ) -> "EmissionLog":
        items = tuple(
            Emission(word=word, position=i, ms=ms)
            for i, (word, ms) in enumerate(pairs, start=1)
        )
        return cls(items=items, source_duration_ms=source_duration_ms)

    @property
    def words(self) -> list[str]:
        return [item.word for item in self.items]

    @property
    def delays(self) -> list[int | float]:
        return [item.ms for item in self.items]

    def __len__(self) -> int:
        return len(self.items)


class SentenceSpan(BaseModel):
    """A reference sentence of a document with its source time span."""

    model_config = ConfigDict(frozen=True)

    start_ms: int | float = Field(..., ge=0)
    end_ms: int | float
    ref: str

    @model_validator(mode="after")
    def check_span(self) -> "SentenceSpan":
        if self.end_ms <= self.start_ms:
            raise ValueError("Sentence span must end after it starts")
        return self


class ClosedSegment(BaseModel):
    """A closed segment: source anchor a, target anchor b and the closing rule.

    ``transcript`` is the transcription the segment was flushed with.
    """

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    rule: TruncationRule
    transcript: str = ""


class EmittedWord(BaseModel):
    word: str
    ms: int | float


class RunSummary(BaseModel):
    """Outcome of one engine run over one stream."""

    source_id: str
    policy: str
    k: int
    chunk_ms: int
    source_duration_ms: int
    hypothesis: str
    emissions: list[EmittedWord] = Field(default_factory=list)
    segments: list[ClosedSegment] = Field(default_factory=list)

    def emission_log(self) -> EmissionLog:
        return EmissionLog.from_pairs(
            [(item.word, item.ms) for item in self.emissions],
            self.source_duration_ms,
        )

    @property
    def transcript(self) -> str:
        """Source transcript assembled from the closed segments."""
        return " ".join(s.transcript for s in self.segments if s.transcript)

    @property
    def grid_key(self) -> tuple[str, int, int]:
        return (self.policy, self.k, self.chunk_ms)

