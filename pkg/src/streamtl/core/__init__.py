"""Core stream types, session state and event traces."""

from streamtl.core.events import (
    EmitWords,
    Event,
    ReadChunk,
    Recompute,
    Truncate,
    event_from_record,
    event_to_record,
)
from streamtl.core.session import SessionState, apply_event, new_session, replay
from streamtl.core.trace import dumps_trace, loads_trace, read_trace, write_trace

__all__ = [
    "EmitWords",
    "Event",
    "ReadChunk",
    "Recompute",
    "SessionState",
    "Truncate",
    "apply_event",
    "dumps_trace",
    "event_from_record",
    "event_to_record",
    "loads_trace",
    "new_session",
    "read_trace",
    "replay",
    "write_trace",
]
