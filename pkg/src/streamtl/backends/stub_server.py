"""Stub HTTP service speaking the remote backend protocol, with fault injection."""

import logging
import threading
import time
from collections.abc import Iterable
from pathlib import Path
from typing import Literal

from flask import Flask, Response, jsonify, request
from pydantic import BaseModel, Field, ValidationError
from werkzeug.serving import BaseWSGIServer, make_server

from streamtl.backends.protocol import BackendRequest, from_wire
from streamtl.base import BaseBackend
from streamtl.config.loader import load_yaml
from streamtl.exceptions import BackendError, ConfigurationError, UnknownSourceError

logger = logging.getLogger(__name__)

RETRACTED_TOKEN = "<retracted>"


class FaultRule(BaseModel):
    """One injected fault.

    A rule fires on requests matching its endpoint, tick and source, at most
    ``times`` times when set; a request the rule cannot affect does not use
    one up. ``delay`` postpones the answer; the other kinds replace it.
    """

    kind: Literal["delay", "error", "retraction", "malformed"]
    endpoint: Literal["transcribe", "translate", "any"] = "any"
    tick: int | None = Field(None, ge=1)
    source_id: str | None = None
    status: int = Field(500, ge=400, le=599)
    delay_s: float = Field(0.0, ge=0)
    times: int | None = Field(None, ge=1)

    def matches(self, endpoint: str, req: BackendRequest) -> bool:
        return (
            self.endpoint in ("any", endpoint)
            and (self.tick is None or self.tick == req.tick)
            and (self.source_id is None or self.source_id == req.source_id)
        )

    def applies(self, endpoint: str, req: BackendRequest) -> bool:
        """Whether the rule would change the answer to this request.

        A retraction needs a translate request with committed words.
        """
        if not self.matches(endpoint, req):
            return False
        if self.kind == "retraction":
            return endpoint == "translate" and bool(req.committed_words)
        return True


class StubScript(BaseModel):
    """A stub server script: the fixtures to serve and the faults to inject."""

    manifest: Path
    faults: list[FaultRule] = Field(default_factory=list)


def load_stub_script(path: str | Path) -> StubScript:
    path = Path(path)
    data = load_yaml(path)
    try:
        script = StubScript.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid stub script: {e}") from e
    if not script.manifest.is_absolute():
        script = script.model_copy(update={"manifest": path.parent / script.manifest})
    return script


class FaultInjector:
    """Thread-safe bookkeeping of which fault rules still fire."""

    def __init__(self, rules: Iterable[FaultRule]) -> None:
        self._rules = list(rules)
        self._fired = [0] * len(self._rules)
        self._lock = threading.Lock()

    def take(self, endpoint: str, req: BackendRequest) -> list[FaultRule]:
        taken = []
        with self._lock:
            for i, rule in enumerate(self._rules):
                if not rule.applies(endpoint, req):
                    continue
                if rule.times is not None and self._fired[i] >= rule.times:
                    continue
                self._fired[i] += 1
                taken.append(rule)
        return taken


def create_app(
    backend: BaseBackend,
    faults: Iterable[FaultRule] = (),
    token: str | None = None,
) -> Flask:
    """Build a Flask app serving ``/v1/transcribe`` and ``/v1/translate``.

    Translations are answered as ``{"text": committed + continuation}`` so
    that clients exercise their prefix check on every call.
    """
    app = Flask(__name__)
    injector = FaultInjector(faults)

    def handle(endpoint: str) -> Response | tuple[Response, int]:
        if token and request.headers.get("Authorization") != f"Bearer {token}":
            return jsonify(error="unauthorized"), 401
        body = request.get_json(silent=True)
        if not isinstance(body, dict):
            return jsonify(error="expected a JSON object"), 400
        try:
            req = from_wire(body)
        except ValueError as e:
            return jsonify(error=str(e)), 400

        rules = injector.take(endpoint, req)
        for rule in rules:
            if rule.kind == "delay":
                time.sleep(rule.delay_s)
        kinds = {rule.kind: rule for rule in rules}
        if "error" in kinds:
            status = kinds["error"].status
            logger.info("Injecting HTTP %d for %s", status, req.request_id)
            return jsonify(error="injected fault"), status
        if "malformed" in kinds:
            return Response("{not json", mimetype="application/json")

        try:
            if endpoint == "transcribe":
                transcription = backend.transcribe(req)
                return jsonify(
                    text=transcription.text,
                    words=[word.model_dump() for word in transcription.words],
                )
            words = backend.translate(req)
        except UnknownSourceError as e:
            return jsonify(error=str(e)), 404
        except BackendError as e:
            return jsonify(error=str(e)), 500

        committed = req.committed_words
        if "retraction" in kinds:
            committed = [RETRACTED_TOKEN, *committed[1:]]
        return jsonify(text=" ".join([*committed, *words]))

    @app.post("/v1/transcribe")
    def transcribe() -> Response | tuple[Response, int]:
        return handle("transcribe")

    @app.post("/v1/translate")
    def translate() -> Response | tuple[Response, int]:
        return handle("translate")

    return app


def make_stub_server(
    app: Flask, host: str = "127.0.0.1", port: int = 0
) -> BaseWSGIServer:
    """Bind a threaded WSGI server; port 0 picks a free port."""
    return make_server(host, port, app, threaded=True)
