"""Shared test fixtures."""

import json
import threading
from collections.abc import Callable, Iterable, Iterator, Sequence
from pathlib import Path

import pytest

from streamtl.backends import BackendRequest, Fixture, RequestMode, ScriptedBackend
from streamtl.backends.stub_server import FaultRule, create_app, make_stub_server
from streamtl.base import BaseBackend
from streamtl.config import PolicyConfig

CHUNK_MS = 640

FixtureFactory = Callable[..., Fixture]


def build_fixture(
    source_id: str = "clip",
    tokens: Sequence[str] = ("w1", "w2", "w3", "w4", "w5", "w6"),
    ends_at: Sequence[int] | None = None,
    translation: Sequence[str] | None = None,
    alignment: Sequence[int] | None = None,
    sentence_spans: Sequence[dict] | None = None,
    total_chunks: int | None = None,
    chunk_ms: int = CHUNK_MS,
    target_lang: str | None = None,
) -> Fixture:
    """Fixture whose word i ends exactly at the end of chunk ends_at[i].

    By default word i ends with chunk i + 1, the translation mirrors the
    source word for word and the stream ends with the last word.
    """
    ends_at = list(ends_at) if ends_at is not None else list(range(1, len(tokens) + 1))
    if translation is None:
        translation = [f"t{i}" for i in range(1, len(tokens) + 1)]
        if alignment is None and tokens:
            alignment = list(range(1, len(tokens) + 1))
    src_words = []
    previous_end = 0
    for token, chunk in zip(tokens, ends_at, strict=True):
        end_ms = chunk * chunk_ms
        src_words.append(
            {"token": token, "start_ms": min(previous_end, end_ms), "end_ms": end_ms}
        )
        previous_end = end_ms
    data = {
        "source_id": source_id,
        "chunk_ms": chunk_ms,
        "src_words": src_words,
        "ref_translation_words": list(translation),
        "alignment": list(alignment) if alignment is not None else None,
        "sentence_spans": list(sentence_spans) if sentence_spans else None,
        "target_lang": target_lang,
    }
    if total_chunks is not None:
        data["duration_ms"] = total_chunks * chunk_ms
    return Fixture.model_validate(data)


def make_request(**overrides) -> BackendRequest:
    """Bounded translate request over chunks 1..4 of the six-word fixture."""
    data = {
        "mode": RequestMode.TRANSLATE_BOUNDED,
        "source_id": "clip",
        "chunk_ms": CHUNK_MS,
        "seg_start": 0,
        "seg_end": 4,
        "tick": 4,
        "transcription": "w1 w2 w3 w4",
        "max_words": 2,
    }
    data.update(overrides)
    return BackendRequest(**data)


def two_sentence_fixture(source_id: str = "doc") -> Fixture:
    """"Good morning. How are you?" followed by two silent chunks."""
    return build_fixture(
        source_id=source_id,
        tokens=["Good", "morning.", "How", "are", "you?"],
        ends_at=[1, 2, 3, 4, 5],
        translation=["Guten", "Morgen.", "Wie", "geht", "es?"],
        alignment=[1, 2, 3, 4, 5],
        sentence_spans=[
            {"start_ms": 0, "end_ms": 2 * CHUNK_MS, "ref": "Guten Morgen."},
            {"start_ms": 2 * CHUNK_MS, "end_ms": 5 * CHUNK_MS, "ref": "Wie geht es?"},
        ],
        total_chunks=7,
    )


@pytest.fixture
def make_fixture() -> FixtureFactory:
    """Factory for fixtures with chunk-aligned word end times."""
    return build_fixture


@pytest.fixture
def six_word_fixture() -> Fixture:
    """Six source words ending at chunks 1..6, mirrored translation."""
    return build_fixture()


@pytest.fixture
def document_fixture() -> Fixture:
    """Two-sentence document with sentence spans."""
    return two_sentence_fixture()


@pytest.fixture
def policy_config() -> PolicyConfig:
    """Default StreamUni configuration at 640-ms chunks."""
    return PolicyConfig(k=3, chunk_ms=CHUNK_MS)


@pytest.fixture
def write_manifest(tmp_path: Path) -> Callable[[Iterable[Fixture]], Path]:
    """Factory writing fixtures and a JSONL manifest listing them."""

    def write(fixtures: Iterable[Fixture], name: str = "manifest.jsonl") -> Path:
        fixture_dir = tmp_path / "fixtures"
        fixture_dir.mkdir(exist_ok=True)
        lines = []
        for fixture in fixtures:
            path = fixture_dir / f"{fixture.source_id}.json"
            path.write_text(json.dumps(fixture.model_dump(mode="json")))
            lines.append(json.dumps(f"fixtures/{path.name}"))
        manifest = tmp_path / name
        manifest.write_text("\n".join(lines) + "\n")
        return manifest

    return write


@pytest.fixture
def stub_server() -> Iterator[Callable[..., str]]:
    """Factory starting loopback stub servers; returns their base URL."""
    servers = []

    def start(
        backend: BaseBackend,
        faults: Iterable[FaultRule] = (),
        token: str | None = None,
    ) -> str:
        server = make_stub_server(create_app(backend, faults, token))
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_port}"

    yield start

    for server in servers:
        server.shutdown()
        server.server_close()


@pytest.fixture
def scripted_backend(six_word_fixture: Fixture, document_fixture: Fixture):
    """Scripted backend serving the six-word and document fixtures."""
    return ScriptedBackend([six_word_fixture, document_fixture])
