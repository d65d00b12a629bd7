"""Engine events and their line-delimited JSON records.

A record is ``{"type", "chunk", "ms", "payload"}``; everything that is not
part of the envelope lives in ``payload``.
"""

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from streamtl.exceptions import TraceError
from streamtl.models import Transcription, TruncationRule

_ENVELOPE = ("type", "chunk", "ms")


class _BaseEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    chunk: int = Field(..., ge=0)
    ms: int | float = 0


class ReadChunk(_BaseEvent):
    """Chunk ``chunk`` was received and transcribed."""

    type: Literal["read"] = "read"
    transcription: Transcription = Field(default_factory=Transcription)


class EmitWords(_BaseEvent):
    """Target words were emitted while processing ``chunk``."""

    type: Literal["emit"] = "emit"
    words: tuple[str, ...]


class Truncate(_BaseEvent):
    """The current segment was closed at source chunk ``a_new``."""

    type: Literal["truncate"] = "truncate"
    rule: TruncationRule
    a_new: int = Field(..., ge=0)
    b_new: int = Field(..., ge=0)


class Recompute(_BaseEvent):
    """Chunk ``target`` of the new segment was re-transcribed."""

    type: Literal["recompute"] = "recompute"
    target: int = Field(..., ge=1)
    transcription: Transcription = Field(default_factory=Transcription)


Event = Annotated[
    ReadChunk | EmitWords | Truncate | Recompute, Field(discriminator="type")
]

_EVENT_ADAPTER: TypeAdapter[Event] = TypeAdapter(Event)


def event_to_record(event: Event) -> dict[str, Any]:
    """Flatten an event into its JSONL envelope."""
    data = event.model_dump(mode="json")
    record = {key: data.pop(key) for key in _ENVELOPE}
    record["payload"] = data
    return record


def event_from_record(record: Any) -> Event:
    """Parse one JSONL envelope back into an event."""
    if not isinstance(record, dict):
        raise TraceError("Trace record must be a JSON object")
    payload = record.get("payload") or {}
    if not isinstance(payload, dict):
        raise TraceError("Trace record payload must be a JSON object")
    data = {**payload, **{key: record[key] for key in _ENVELOPE if key in record}}
    try:
        return _EVENT_ADAPTER.validate_python(data)
    except ValidationError as e:
        raise TraceError(f"Invalid trace record: {e}") from e
