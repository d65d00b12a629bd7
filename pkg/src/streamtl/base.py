"""Abstract base classes for StreamTL components."""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from streamtl.backends.protocol import BackendRequest
    from streamtl.config.schema import ExportConfig
    from streamtl.cot.builder import CotExample
    from streamtl.models import Transcription


class BaseBackend(ABC):
    """Abstract base class for incremental speech-translation backends.

    A backend realizes the two-call speech chain of thought: transcribe a
    speech prefix, then continue the translation conditioned on it.
    """

    @abstractmethod
    def transcribe(self, request: "BackendRequest") -> "Transcription":
        """Transcribe the segment audio named by the request."""
        pass

    @abstractmethod
    def translate(self, request: "BackendRequest") -> list[str]:
        """Return the target words continuing the committed translation."""
        pass


class BaseWriter(ABC):
    """Abstract base class for dataset writers."""

    def __init__(self, config: "ExportConfig") -> None:
        self.config = config

    @abstractmethod
    def write(self, examples: Sequence["CotExample"]) -> None:
        """Write examples to the destination."""
        pass
