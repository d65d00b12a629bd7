"""JSONL dataset writer."""

import logging
from collections.abc import Sequence
from pathlib import Path

from streamtl.base import BaseWriter
from streamtl.config.schema import ExportConfig
from streamtl.cot.builder import CotExample
from streamtl.exceptions import ExportError
from streamtl.fileio import atomic_write_text, dumps_jsonl

logger = logging.getLogger(__name__)


def dumps_examples(examples: Sequence[CotExample]) -> str:
    return dumps_jsonl([example.model_dump(mode="json") for example in examples])


class JSONLWriter(BaseWriter):
    """Writer for one JSON object per example, in the given order."""

    def __init__(self, config: ExportConfig) -> None:
        super().__init__(config)
        self.output_path = Path(config.path)

    def write(self, examples: Sequence[CotExample]) -> None:
        """Write examples to a JSONL file."""
        if not examples:
            logger.warning("No examples to write")
            return

        logger.info("Writing %d examples to %s", len(examples), self.output_path)
        try:
            atomic_write_text(self.output_path, dumps_examples(examples))
        except OSError as e:
            raise ExportError(f"Failed to write examples: {e}") from e
