"""Backend requests, the CoT prompt and the stateless wire format."""

import base64
import binascii
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

COT_SEPARATOR = "<sep>"

DEFAULT_COT_PROMPT = (
    "Transcribe the audio to text, and then translate the audio to {target_lang}. "
    "Use <sep> as a separator between the original transcript and the translation."
)

# Target languages translated with the short chunk size.
_SHORT_CHUNK_LANGS = {"chinese", "zh", "zh-cn", "mandarin"}
_CHAR_TOKENIZED_LANGS = _SHORT_CHUNK_LANGS | {"japanese", "ja"}


class RequestMode(str, Enum):
    """What a backend request asks for."""

    TRANSCRIBE = "transcribe"
    TRANSLATE_BOUNDED = "translate_bounded"
    TRANSLATE_FLUSH = "translate_flush"


class BackendRequest(BaseModel):
    """One stateless backend call.

    The segment covers chunks ``seg_start + 1 .. seg_end``; ``tick`` is the
    chunk the engine is processing, which differs from ``seg_end`` when a
    sentence truncation flushes an earlier segment.
    """

    model_config = ConfigDict(frozen=True)

    mode: RequestMode
    source_id: str
    chunk_ms: int = Field(..., gt=0)
    seg_start: int = Field(..., ge=0)
    seg_end: int = Field(..., ge=1)
    tick: int = Field(..., ge=1)
    audio: bytes = b""
    transcription: str | None = None
    committed: str = ""
    anchor: int = Field(0, ge=0)
    max_words: int | None = Field(None, ge=0)
    prompt: str = ""
    seed: int | None = None

    @model_validator(mode="after")
    def validate_request(self) -> "BackendRequest":
        if self.seg_end <= self.seg_start:
            raise ValueError("segment must contain at least one chunk")
        if self.mode != RequestMode.TRANSCRIBE and self.transcription is None:
            raise ValueError("translate requests must carry a transcription")
        if self.mode == RequestMode.TRANSLATE_BOUNDED and self.max_words is None:
            raise ValueError("bounded translate requests need max_words")
        return self

    @property
    def window_ms(self) -> tuple[int, int]:
        return (self.seg_start * self.chunk_ms, self.seg_end * self.chunk_ms)

    @property
    def committed_words(self) -> list[str]:
        return self.committed.split()

    @property
    def committed_count(self) -> int:
        """Absolute number of target words already emitted in the document."""
        return self.anchor + len(self.committed_words)

    @property
    def request_id(self) -> str:
        return f"{self.source_id}/{self.tick}/{self.mode.value}"


def render_prompt(target_lang: str, template: str = DEFAULT_COT_PROMPT) -> str:
    return template.format(target_lang=target_lang)


def parse_cot_output(text: str) -> tuple[str, str]:
    """Split ``"<transcript> <sep> <translation>"`` model output.

    Output without a separator is treated as translation only.
    """
    if COT_SEPARATOR not in text:
        return "", text.strip()
    transcript, _, translation = text.partition(COT_SEPARATOR)
    return transcript.strip(), translation.strip()


def default_chunk_ms(target_lang: str | None) -> int:
    """320 ms chunks for Chinese targets, 640 ms otherwise."""
    if target_lang and target_lang.strip().lower() in _SHORT_CHUNK_LANGS:
        return 320
    return 640


def default_tokenize(target_lang: str | None) -> str:
    if target_lang and target_lang.strip().lower() in _CHAR_TOKENIZED_LANGS:
        return "char"
    return "whitespace_punct"


def to_wire(request: BackendRequest) -> dict[str, Any]:
    """Serialize a request to the JSON body of the remote protocol."""
    body: dict[str, Any] = {
        "request_id": request.request_id,
        "mode": request.mode.value,
        "source_id": request.source_id,
        "tick": request.tick,
        "chunks": [request.seg_start + 1, request.seg_end],
        "chunk_ms": request.chunk_ms,
        "window_ms": list(request.window_ms),
        "anchor": request.anchor,
        "prompt": request.prompt,
    }
    if request.audio:
        body["audio_b64"] = base64.b64encode(request.audio).decode("ascii")
    else:
        body["fixture_ref"] = request.source_id
    if request.transcription is not None:
        body["transcription"] = request.transcription
    if request.mode != RequestMode.TRANSCRIBE:
        body["committed"] = request.committed
    if request.max_words is not None:
        body["max_words"] = request.max_words
    if request.seed is not None:
        body["seed"] = request.seed
    return body


def from_wire(body: dict[str, Any]) -> BackendRequest:
    """Parse a remote protocol body back into a request.

    Raises:
        ValueError: If the body does not describe a valid request
    """
    try:
        first, last = body["chunks"]
        audio = base64.b64decode(body["audio_b64"]) if "audio_b64" in body else b""
        return BackendRequest(
            mode=body["mode"],
            source_id=body.get("source_id") or body.get("fixture_ref", ""),
            chunk_ms=body["chunk_ms"],
            seg_start=first - 1,
            seg_end=last,
            tick=body["tick"],
            audio=audio,
            transcription=body.get("transcription"),
            committed=body.get("committed", ""),
            anchor=body.get("anchor", 0),
            max_words=body.get("max_words"),
            prompt=body.get("prompt", ""),
            seed=body.get("seed"),
        )
    except (KeyError, TypeError, binascii.Error, ValidationError) as e:
        raise ValueError(f"Invalid request body: {e}") from e
