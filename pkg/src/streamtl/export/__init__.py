"""Dataset writers for CoT training examples."""

from streamtl.export.huggingface import HuggingFaceWriter
from streamtl.export.jsonl import JSONLWriter, dumps_examples
from streamtl.export.parquet import ParquetWriter, examples_to_frame
from streamtl.export.registry import get_writer, register_writer

__all__ = [
    "HuggingFaceWriter",
    "JSONLWriter",
    "ParquetWriter",
    "dumps_examples",
    "examples_to_frame",
    "get_writer",
    "register_writer",
]
