"""Deterministic fixture-driven backend."""

import logging
from collections.abc import Iterable

from streamtl.backends.fixture import Fixture
from streamtl.backends.protocol import BackendRequest, RequestMode
from streamtl.base import BaseBackend
from streamtl.exceptions import BackendError, UnknownSourceError
from streamtl.models import Transcription, Word

logger = logging.getLogger(__name__)


class ScriptedBackend(BaseBackend):
    """Backend that reads transcriptions and translations off fixtures.

    Transcription surfaces only source words that have fully ended inside
    the segment window. Translation releases a target word once its aligned
    source word has ended, and always continues right after the committed
    prefix, so the concatenated outputs over a document equal the reference.
    """

    def __init__(self, fixtures: Iterable[Fixture]) -> None:
        self._fixtures = {fixture.source_id: fixture for fixture in fixtures}

    def fixture(self, source_id: str) -> Fixture:
        fixture = self._fixtures.get(source_id)
        if fixture is None:
            raise UnknownSourceError(f"Unknown source_id: {source_id}")
        return fixture

    def transcribe(self, request: BackendRequest) -> Transcription:
        if request.mode != RequestMode.TRANSCRIBE:
            raise BackendError(
                f"Expected a transcribe request, got {request.mode.value}",
                request.request_id,
            )
        fixture = self.fixture(request.source_id)
        start_ms, end_ms = request.window_ms
        words = [
            Word(token=word.token, end_ms=word.end_ms)
            for word in fixture.words_in_window(start_ms, end_ms)
        ]
        return Transcription.from_words(words)

    def translate(self, request: BackendRequest) -> list[str]:
        if request.mode == RequestMode.TRANSCRIBE:
            raise BackendError(
                "Expected a translate request, got transcribe", request.request_id
            )
        fixture = self.fixture(request.source_id)
        seen = fixture.words_ending_by(request.window_ms[1])
        eligible = fixture.eligible_targets(seen)
        continuation = list(
            fixture.ref_translation_words[request.committed_count : eligible]
        )
        if request.mode == RequestMode.TRANSLATE_BOUNDED:
            continuation = continuation[: request.max_words]
        logger.debug(
            "%s: %d source words seen, returning %d words",
            request.request_id,
            seen,
            len(continuation),
        )
        return continuation
