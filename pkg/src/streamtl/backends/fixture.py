"""Scripted fixtures: pre-aligned source words, transcript and reference."""

import json
import logging
import math
from bisect import bisect_right
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from streamtl.exceptions import ManifestError
from streamtl.models import SentenceSpan, SpeechStream

logger = logging.getLogger(__name__)


class SourceWord(BaseModel):
    """A source word with its timestamps."""

    model_config = ConfigDict(frozen=True)

    token: str = Field(..., min_length=1)
    start_ms: int = Field(..., ge=0)
    end_ms: int = Field(..., ge=0)


def proportional_alignment(src_len: int, tgt_len: int) -> list[int]:
    """a(j) = ceil(j * |src| / |tgt|) for j = 1..|tgt|."""
    return [math.ceil(j * src_len / tgt_len) for j in range(1, tgt_len + 1)]


class Fixture(BaseModel):
    """One source of a dataset, with word-level timestamps.

    ``alignment[j - 1]`` is the 1-based source word that target word ``j``
    depends on; when omitted a proportional alignment is used.
    """

    model_config = ConfigDict(frozen=True)

    source_id: str = Field(..., min_length=1)
    chunk_ms: int = Field(640, gt=0)
    src_words: tuple[SourceWord, ...] = ()
    transcript: str = ""
    ref_translation_words: tuple[str, ...] = ()
    alignment: tuple[int, ...] | None = None
    sentence_spans: tuple[SentenceSpan, ...] | None = None
    duration_ms: int | None = Field(None, ge=0)
    target_lang: str | None = None

    @model_validator(mode="before")
    @classmethod
    def fill_transcript(cls, data: Any) -> Any:
        if isinstance(data, dict) and "transcript" not in data:
            tokens = [
                w["token"] if isinstance(w, dict) else w.token
                for w in data.get("src_words", ())
            ]
            data = {**data, "transcript": " ".join(tokens)}
        return data

    @model_validator(mode="after")
    def validate_fixture(self) -> "Fixture":
        tokens = [word.token for word in self.src_words]
        if self.transcript.split() != tokens:
            raise ValueError("transcript must equal the joined src_words")
        ends = [word.end_ms for word in self.src_words]
        if any(later < earlier for earlier, later in zip(ends, ends[1:], strict=False)):
            raise ValueError("src_words end_ms must be nondecreasing")
        if any(word.start_ms > word.end_ms for word in self.src_words):
            raise ValueError("src_words must not end before they start")
        if any(
            not w or any(ch.isspace() for ch in w) for w in self.ref_translation_words
        ):
            raise ValueError("ref_translation_words must be non-empty tokens")
        if self.ref_translation_words and not self.src_words:
            raise ValueError("a fixture with a translation needs source words")
        if self.alignment is not None:
            if len(self.alignment) != len(self.ref_translation_words):
                raise ValueError("alignment needs one entry per target word")
            if any(not 1 <= a <= len(self.src_words) for a in self.alignment):
                raise ValueError("alignment entries must index source words")
            if any(
                later < earlier
                for earlier, later in zip(
                    self.alignment, self.alignment[1:], strict=False
                )
            ):
                raise ValueError("alignment must be nondecreasing")
        if self.sentence_spans:
            spans = self.sentence_spans
            for earlier, later in zip(spans, spans[1:], strict=False):
                if later.start_ms < earlier.end_ms:
                    raise ValueError("sentence_spans must be sorted and disjoint")
        return self

    @property
    def resolved_alignment(self) -> tuple[int, ...]:
        if self.alignment is not None:
            return self.alignment
        if not self.ref_translation_words:
            return ()
        return tuple(
            proportional_alignment(
                len(self.src_words), len(self.ref_translation_words)
            )
        )

    @property
    def audio_ms(self) -> int:
        """Audio duration: explicit, else the last word or span end."""
        if self.duration_ms is not None:
            return self.duration_ms
        ends = [word.end_ms for word in self.src_words[-1:]]
        if self.sentence_spans:
            ends.append(math.ceil(self.sentence_spans[-1].end_ms))
        return max(ends, default=0)

    @property
    def reference(self) -> str:
        return " ".join(self.ref_translation_words)

    def total_chunks(self, chunk_ms: int | None = None) -> int:
        return math.ceil(self.audio_ms / (chunk_ms or self.chunk_ms))

    def to_stream(self, chunk_ms: int | None = None) -> SpeechStream:
        chunk_ms = chunk_ms or self.chunk_ms
        return SpeechStream.scripted(
            self.source_id, self.total_chunks(chunk_ms), chunk_ms
        )

    def sentence_boundaries(self, chunk_ms: int | None = None) -> tuple[int, ...]:
        """Chunks holding the end of each sentence span."""
        chunk_ms = chunk_ms or self.chunk_ms
        ends = {math.ceil(span.end_ms / chunk_ms) for span in self.sentence_spans or ()}
        return tuple(sorted(ends))

    def words_ending_by(self, t_ms: int | float) -> int:
        """Number of source words with end_ms <= t_ms."""
        return bisect_right([word.end_ms for word in self.src_words], t_ms)

    def words_in_window(
        self, start_ms: int | float, end_ms: int | float
    ) -> tuple[SourceWord, ...]:
        """Source words ending inside (start_ms, end_ms].

        A window starting at 0 also takes words ending exactly at 0.
        """
        first = self.words_ending_by(start_ms) if start_ms > 0 else 0
        return self.src_words[first : self.words_ending_by(end_ms)]

    def transcript_until(self, t_ms: int | float) -> str:
        return " ".join(w.token for w in self.src_words[: self.words_ending_by(t_ms)])

    def eligible_targets(self, src_seen: int) -> int:
        """Number of target words whose aligned source word has been seen."""
        return bisect_right(list(self.resolved_alignment), src_seen)


def load_fixture(path: str | Path) -> Fixture:
    """Load one fixture JSON document."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ManifestError(f"Cannot read fixture {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ManifestError(f"Invalid JSON in fixture {path}: {e}") from e
    try:
        return Fixture.model_validate(data)
    except ValidationError as e:
        raise ManifestError(f"Invalid fixture {path}: {e}") from e


def load_manifest(path: str | Path) -> list[Fixture]:
    """Load every fixture listed in a JSONL manifest.

    Each line is a JSON string path or an object with a ``path`` key;
    relative paths are resolved against the manifest's directory.

    Raises:
        ManifestError: With the offending line number
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ManifestError(f"Cannot read manifest {path}: {e}") from e

    fixtures = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
        except json.JSONDecodeError as e:
            raise ManifestError(f"invalid JSON: {e}", line=line_no) from e
        if isinstance(entry, dict):
            entry = entry.get("path")
        if not isinstance(entry, str) or not entry:
            raise ManifestError("expected a fixture path", line=line_no)
        fixture_path = Path(entry)
        if not fixture_path.is_absolute():
            fixture_path = path.parent / fixture_path
        try:
            fixture = load_fixture(fixture_path)
        except ManifestError as e:
            raise ManifestError(str(e), line=line_no) from e
        if fixture.source_id in seen:
            raise ManifestError(
                f"duplicate source_id {fixture.source_id}", line=line_no
            )
        seen.add(fixture.source_id)
        fixtures.append(fixture)

    if not fixtures:
        raise ManifestError(f"Manifest {path} lists no fixtures")
    logger.info("Loaded %d fixtures from %s", len(fixtures), path)
    return fixtures
