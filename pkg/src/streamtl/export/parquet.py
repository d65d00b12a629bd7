"""Parquet dataset writer."""

import logging
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from streamtl.base import BaseWriter
from streamtl.config.schema import ExportConfig
from streamtl.cot.builder import CotExample
from streamtl.exceptions import ExportError

logger = logging.getLogger(__name__)


def examples_to_frame(examples: Sequence[CotExample]) -> pd.DataFrame:
    return pd.DataFrame(
        [example.model_dump(mode="json") for example in examples],
        columns=list(CotExample.model_fields),
    )


class ParquetWriter(BaseWriter):
    """Writer for a single Parquet file of examples."""

    def __init__(self, config: ExportConfig) -> None:
        super().__init__(config)
        self.output_path = Path(config.path)

    def write(self, examples: Sequence[CotExample]) -> None:
        """Write examples to a Parquet file."""
        if not examples:
            logger.warning("No examples to write")
            return

        # Create output directory if it doesn't exist
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ExportError(f"Failed to create output directory: {e}") from e

        logger.info("Writing %d examples to %s", len(examples), self.output_path)
        try:
            examples_to_frame(examples).to_parquet(self.output_path, index=False)
        except Exception as e:
            raise ExportError(f"Failed to write examples: {e}") from e
