"""Reading and writing event traces as JSONL."""

import json
from collections.abc import Iterable
from pathlib import Path

from streamtl.core.events import Event, event_from_record, event_to_record
from streamtl.exceptions import TraceError
from streamtl.fileio import atomic_write_text, dumps_jsonl


def dumps_trace(events: Iterable[Event]) -> str:
    return dumps_jsonl([event_to_record(event) for event in events])


def loads_trace(text: str) -> list[Event]:
    events = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(f"line {line_no}: invalid JSON: {e}") from e
        try:
            events.append(event_from_record(record))
        except TraceError as e:
            raise TraceError(f"line {line_no}: {e}") from e
    return events


def write_trace(path: str | Path, events: Iterable[Event]) -> Path:
    return atomic_write_text(path, dumps_trace(events))


def read_trace(path: str | Path) -> list[Event]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TraceError(f"Cannot read trace {path}: {e}") from e
    return loads_trace(text)
