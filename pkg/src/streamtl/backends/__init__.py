"""Incremental-model backends for StreamTL."""

from streamtl.backends.fixture import (
    Fixture,
    SourceWord,
    load_fixture,
    load_manifest,
    proportional_alignment,
)
from streamtl.backends.protocol import (
    DEFAULT_COT_PROMPT,
    BackendRequest,
    RequestMode,
    default_chunk_ms,
    parse_cot_output,
    render_prompt,
)
from streamtl.backends.registry import get_backend, register_backend
from streamtl.backends.remote import RemoteBackend, remote_roundtrip
from streamtl.backends.scripted import ScriptedBackend

__all__ = [
    "DEFAULT_COT_PROMPT",
    "BackendRequest",
    "Fixture",
    "RemoteBackend",
    "RequestMode",
    "ScriptedBackend",
    "SourceWord",
    "default_chunk_ms",
    "get_backend",
    "load_fixture",
    "load_manifest",
    "parse_cot_output",
    "proportional_alignment",
    "register_backend",
    "remote_roundtrip",
    "render_prompt",
]
