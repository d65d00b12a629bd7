"""HTTP client for a remote speech-language model service."""

import logging
import os
import threading
from typing import Any

import requests
from pydantic import ValidationError

from streamtl.backends.protocol import (
    COT_SEPARATOR,
    BackendRequest,
    RequestMode,
    parse_cot_output,
    to_wire,
)
from streamtl.base import BaseBackend
from streamtl.exceptions import (
    BackendTimeoutError,
    MalformedResponseError,
    RetractionError,
    ServiceError,
    TransportError,
)
from streamtl.models import Transcription

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 30.0
TOKEN_ENV = "STREAMTL_API_TOKEN"


def _auth_headers(token: str | None) -> dict[str, str]:
    if not token:
        return {}
    return {"Authorization": f"Bearer {token}"}


def remote_roundtrip(
    endpoint: str,
    request: BackendRequest,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    token: str | None = None,
    session: requests.Session | None = None,
) -> dict[str, Any]:
    """POST one request to the service and return its parsed JSON body.

    Raises:
        BackendTimeoutError: If the service does not answer within timeout_s
        TransportError: If the service cannot be reached
        ServiceError: If the service answers with status >= 400
        MalformedResponseError: If the body is not a JSON object
    """
    route = "transcribe" if request.mode == RequestMode.TRANSCRIBE else "translate"
    url = f"{endpoint.rstrip('/')}/v1/{route}"
    poster = session or requests
    try:
        response = poster.post(
            url,
            json=to_wire(request),
            headers=_auth_headers(token),
            timeout=timeout_s,
        )
    except requests.Timeout as e:
        raise BackendTimeoutError(
            f"No answer from {url} within {timeout_s}s", request.request_id
        ) from e
    except requests.RequestException as e:
        raise TransportError(f"Cannot reach {url}: {e}", request.request_id) from e

    if response.status_code >= 400:
        raise ServiceError(
            response.text[:200] or response.reason or "service error",
            response.status_code,
            request.request_id,
        )
    try:
        body = response.json()
    except ValueError as e:
        raise MalformedResponseError(
            f"Response is not valid JSON: {e}", request.request_id
        ) from e
    if not isinstance(body, dict):
        raise MalformedResponseError(
            "Response must be a JSON object", request.request_id
        )
    return body


class RemoteBackend(BaseBackend):
    """Backend calling a stateless HTTP service.

    Every request carries the full segment and the committed translation.
    Translate responses are either ``{"words": [...]}`` (continuation only)
    or ``{"text": "..."}`` (the whole segment translation, optionally as
    CoT output with a ``<sep>``), which must extend the committed prefix.

    Each thread posts through its own ``requests.Session`` unless a session
    is passed in, in which case every thread shares it.
    """

    def __init__(
        self,
        url: str,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        token: str | None = None,
        session: requests.Session | None = None,
    ) -> None:
        self.url = url
        self.timeout_s = timeout_s
        self.token = token if token is not None else os.environ.get(TOKEN_ENV)
        self._shared_session = session
        self._local = threading.local()

    def session(self) -> requests.Session:
        """The session of the calling thread."""
        if self._shared_session is not None:
            return self._shared_session
        session = getattr(self._local, "session", None)
        if session is None:
            session = requests.Session()
            self._local.session = session
        return session

    def _roundtrip(self, request: BackendRequest) -> dict[str, Any]:
        return remote_roundtrip(
            self.url, request, self.timeout_s, self.token, self.session()
        )

    def transcribe(self, request: BackendRequest) -> Transcription:
        body = self._roundtrip(request)
        text = body.get("text")
        if not isinstance(text, str):
            raise MalformedResponseError(
                "Transcribe response needs a text field", request.request_id
            )
        try:
            if "words" in body:
                return Transcription(text=text, words=body["words"])
            return Transcription.from_text(text)
        except ValidationError as e:
            raise MalformedResponseError(
                f"Invalid transcription: {e}", request.request_id
            ) from e

    def translate(self, request: BackendRequest) -> list[str]:
        body = self._roundtrip(request)
        if "words" in body:
            words = body["words"]
            if not isinstance(words, list) or not all(
                isinstance(word, str) for word in words
            ):
                raise MalformedResponseError(
                    "words must be a list of strings", request.request_id
                )
            continuation = [token for word in words for token in word.split()]
        elif isinstance(body.get("text"), str):
            continuation = self._continuation(body["text"], request)
        else:
            raise MalformedResponseError(
                "Translate response needs words or text", request.request_id
            )

        if (
            request.mode == RequestMode.TRANSLATE_BOUNDED
            and request.max_words is not None
            and len(continuation) > request.max_words
        ):
            logger.warning(
                "%s: service returned %d words, keeping %d",
                request.request_id,
                len(continuation),
                request.max_words,
            )
            continuation = continuation[: request.max_words]
        return continuation

    def _continuation(self, text: str, request: BackendRequest) -> list[str]:
        if COT_SEPARATOR in text:
            _, text = parse_cot_output(text)
        tokens = text.split()
        committed = request.committed_words
        if tokens[: len(committed)] != committed:
            raise RetractionError(
                "Translation does not extend the committed prefix",
                request.request_id,
            )
        return tokens[len(committed) :]
