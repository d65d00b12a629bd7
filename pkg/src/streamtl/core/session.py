"""Session state of one engine run, and deterministic replay of its trace."""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from typing import Any

from streamtl.config.loader import parse_policy_config
from streamtl.config.schema import PolicyConfig
from streamtl.core.events import EmitWords, Event, ReadChunk, Recompute, Truncate
from streamtl.exceptions import ConfigurationError, TraceError
from streamtl.models import (
    ClosedSegment,
    Emission,
    EmittedWord,
    SpeechStream,
    Transcription,
)

logger = logging.getLogger(__name__)


@dataclass
class SessionState:
    """Mutable state of one streaming session.

    Anchors are absolute document counters: ``seg_start`` is the chunk index
    of the last truncation and ``trans_anchor`` the number of target words
    belonging to closed segments.

    Attributes:
        source_id: Stream being translated
        chunk_ms: Chunk duration of the stream
        seg_start: Source anchor a_m
        trans_anchor: Target anchor b_m
        queue: Transcriptions of chunks seg_start+1 .. current_chunk-1
        emitted: Emissions of the current segment
        current_chunk: Last chunk read, n
        segments_closed: Number of closed segments, M
        segments: Closed segments in order
        committed: Every emission of the document in order
        audio: Payloads of the open segment's chunks by index; not part of a
            trace, so a replayed state holds none
    """

    source_id: str = ""
    chunk_ms: int = 0
    seg_start: int = 0
    trans_anchor: int = 0
    queue: list[Transcription] = field(default_factory=list)
    emitted: list[Emission] = field(default_factory=list)
    current_chunk: int = 0
    segments_closed: int = 0
    segments: list[ClosedSegment] = field(default_factory=list)
    committed: list[Emission] = field(default_factory=list)
    audio: dict[int, bytes] = field(default_factory=dict, compare=False, repr=False)

    def copy(self) -> "SessionState":
        return replace(
            self,
            queue=list(self.queue),
            emitted=list(self.emitted),
            segments=list(self.segments),
            committed=list(self.committed),
            audio=dict(self.audio),
        )

    @property
    def hypothesis(self) -> str:
        return " ".join(item.word for item in self.committed)

    @property
    def committed_words(self) -> list[str]:
        """Target words of the current segment, y_{b_m+1 .. i-1}."""
        return [item.word for item in self.emitted]

    def to_dict(self) -> dict[str, Any]:
        return {
            "source_id": self.source_id,
            "chunk_ms": self.chunk_ms,
            "seg_start": self.seg_start,
            "trans_anchor": self.trans_anchor,
            "current_chunk": self.current_chunk,
            "segments_closed": self.segments_closed,
            "queue": [entry.text for entry in self.queue],
            "emitted": [
                EmittedWord(word=e.word, ms=e.ms).model_dump() for e in self.emitted
            ],
            "segments": [s.model_dump(mode="json") for s in self.segments],
            "hypothesis": self.hypothesis,
        }


def new_session(
    config: PolicyConfig | Mapping[str, Any],
    stream_meta: SpeechStream | Mapping[str, Any] | None = None,
) -> SessionState:
    """Create the initial state of a session.

    Args:
        config: Engine configuration, validated here
        stream_meta: The stream to translate, or a mapping with ``source_id``

    Raises:
        ConfigurationError: If the configuration is invalid or its chunk size
            disagrees with the stream
    """
    config = parse_policy_config(config)
    source_id = ""
    if isinstance(stream_meta, SpeechStream):
        source_id = stream_meta.source_id
        if stream_meta.chunks and stream_meta.chunk_ms != config.chunk_ms:
            raise ConfigurationError(
                f"Stream chunk size {stream_meta.chunk_ms} ms does not match "
                f"configured {config.chunk_ms} ms"
            )
    elif stream_meta is not None:
        source_id = str(stream_meta.get("source_id", ""))
    return SessionState(source_id=source_id, chunk_ms=config.chunk_ms)


def apply_event(state: SessionState, event: Event) -> None:
    """Apply one event to a state in place.

    Raises:
        TraceError: If the event cannot follow the current state
    """
    if isinstance(event, ReadChunk):
        if event.chunk != state.current_chunk + 1:
            raise TraceError(
                f"Read of chunk {event.chunk} does not follow chunk "
                f"{state.current_chunk}"
            )
        state.current_chunk = event.chunk
        state.queue.append(event.transcription)

    elif isinstance(event, EmitWords):
        if event.chunk != state.current_chunk:
            raise TraceError(
                f"Emission at chunk {event.chunk} while at chunk {state.current_chunk}"
            )
        for word in event.words:
            emission = Emission(
                word=word,
                position=len(state.committed) + 1,
                chunk=event.chunk,
                ms=event.ms,
            )
            state.emitted.append(emission)
            state.committed.append(emission)

    elif isinstance(event, Truncate):
        if event.a_new > state.current_chunk:
            raise TraceError(
                f"Truncation at chunk {event.a_new} beyond current chunk "
                f"{state.current_chunk}"
            )
        if event.a_new <= state.seg_start:
            raise TraceError(
                f"Truncation at chunk {event.a_new} does not advance past "
                f"{state.seg_start}"
            )
        expected_b = state.trans_anchor + len(state.emitted)
        if event.b_new != expected_b:
            raise TraceError(
                f"Target anchor {event.b_new} does not match {expected_b} "
                "emitted words"
            )
        # queue holds chunks seg_start+1 .. current_chunk in order
        closing = event.a_new - state.seg_start - 1
        transcript = state.queue[closing].text if closing < len(state.queue) else ""
        state.seg_start = event.a_new
        state.trans_anchor = event.b_new
        state.emitted = []
        state.queue = []
        state.audio = {i: b for i, b in state.audio.items() if i > event.a_new}
        state.segments_closed += 1
        state.segments.append(
            ClosedSegment(
                a=event.a_new, b=event.b_new, rule=event.rule, transcript=transcript
            )
        )

    elif isinstance(event, Recompute):
        expected = state.seg_start + len(state.queue) + 1
        if event.target != expected or event.target > state.current_chunk:
            raise TraceError(
                f"Re-transcription of chunk {event.target} out of order "
                f"(expected {expected})"
            )
        state.queue.append(event.transcription)

    else:
        raise TraceError(f"Unknown event: {event!r}")


def replay(
    events: Iterable[Event],
    config: PolicyConfig | Mapping[str, Any],
    stream_meta: SpeechStream | Mapping[str, Any] | None = None,
) -> SessionState:
    """Rebuild a session state by applying a trace to the initial state."""
    state = new_session(config, stream_meta)
    for event in events:
        apply_event(state, event)
    logger.debug(
        "Replayed trace to chunk %d with %d closed segments",
        state.current_chunk,
        state.segments_closed,
    )
    return state
