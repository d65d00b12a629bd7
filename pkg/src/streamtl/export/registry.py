"""Writer registry for mapping destination types to writer classes."""

from streamtl.base import BaseWriter
from streamtl.exceptions import ConfigurationError
from streamtl.export.huggingface import HuggingFaceWriter
from streamtl.export.jsonl import JSONLWriter
from streamtl.export.parquet import ParquetWriter

# Registry mapping destination type strings to writer classes
_WRITER_REGISTRY: dict[str, type[BaseWriter]] = {
    "jsonl": JSONLWriter,
    "parquet": ParquetWriter,
    "huggingface": HuggingFaceWriter,
}


def get_writer(destination: str) -> type[BaseWriter]:
    """Get a writer class by destination type.

    Args:
        destination: The destination type string (e.g., "jsonl")

    Returns:
        The writer class for the given destination type

    Raises:
        ConfigurationError: If the destination type is not supported
    """
    writer_class = _WRITER_REGISTRY.get(destination)
    if writer_class is None:
        supported = ", ".join(_WRITER_REGISTRY.keys())
        raise ConfigurationError(
            f"Unsupported destination type: {destination}. Supported: {supported}"
        )
    return writer_class


def register_writer(destination: str, writer_class: type[BaseWriter]) -> None:
    _WRITER_REGISTRY[destination] = writer_class
