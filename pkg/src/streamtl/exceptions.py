"""Custom exceptions for StreamTL."""


class StreamTLError(Exception):
    """Base exception for StreamTL."""

    pass


class ConfigurationError(StreamTLError):
    """Raised when configuration is invalid."""

    pass


class StreamError(StreamTLError):
    """Raised when a speech stream or transcription violates its invariants."""

    pass


class TraceError(StreamTLError):
    """Raised when an event trace cannot be replayed or parsed."""

    pass


class StepError(StreamTLError):
    """Raised when the engine fails while processing a chunk.

    The session state passed to the failing step is left untouched. When the
    error escapes a whole-stream run, ``trace`` holds the events recorded
    before the failure.
    """

    def __init__(self, chunk: int, message: str, trace: list | None = None) -> None:
        super().__init__(f"chunk {chunk}: {message}")
        self.chunk = chunk
        self.trace = trace if trace is not None else []


class BackendError(StreamTLError):
    """Raised when a backend request fails."""

    def __init__(self, message: str, request_id: str | None = None) -> None:
        if request_id:
            message = f"[{request_id}] {message}"
        super().__init__(message)
        self.request_id = request_id


class UnknownSourceError(BackendError):
    """Raised when a scripted backend has no fixture for a source id."""

    pass


class TransportError(BackendError):
    """Raised when the remote service cannot be reached."""

    pass


class BackendTimeoutError(BackendError):
    """Raised when the remote service does not answer in time."""

    pass


class ServiceError(BackendError):
    """Raised when the remote service answers with an HTTP error status."""

    def __init__(
        self, message: str, status: int, request_id: str | None = None
    ) -> None:
        super().__init__(f"HTTP {status}: {message}", request_id)
        self.status = status


class MalformedResponseError(BackendError):
    """Raised when a response is not valid JSON or misses required fields."""

    pass


class RetractionError(BackendError):
    """Raised when a translation does not extend the committed prefix."""

    pass


class MetricError(StreamTLError):
    """Raised when a metric is undefined for its inputs."""

    pass


class ManifestError(StreamTLError):
    """Raised when a manifest or fixture file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ExportError(StreamTLError):
    """Raised when writing a dataset to its destination fails."""

    pass
