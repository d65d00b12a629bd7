"""HuggingFace Hub dataset writer."""

import logging
from collections.abc import Sequence

from datasets import Dataset, DatasetDict

from streamtl.base import BaseWriter
from streamtl.config.schema import ExportConfig
from streamtl.cot.builder import CotExample
from streamtl.exceptions import ExportError
from streamtl.export.parquet import examples_to_frame

logger = logging.getLogger(__name__)


class HuggingFaceWriter(BaseWriter):
    """Writer uploading examples to the HuggingFace Hub as a train split."""

    def __init__(self, config: ExportConfig) -> None:
        super().__init__(config)
        self.repo_id = config.repo_id
        self.private = config.private

    def write(self, examples: Sequence[CotExample]) -> None:
        """Upload examples to HuggingFace Hub."""
        if not examples:
            logger.warning("No examples to upload")
            return

        logger.info("Converting %d examples to a HuggingFace Dataset", len(examples))
        dataset_dict = DatasetDict(
            {"train": Dataset.from_pandas(examples_to_frame(examples))}
        )
        logger.info("Pushing dataset to HuggingFace Hub: %s", self.repo_id)

        try:
            dataset_dict.push_to_hub(self.repo_id, private=self.private)
            logger.info("Successfully uploaded dataset to %s", self.repo_id)
        except Exception as e:
            raise ExportError(f"Failed to upload to HuggingFace Hub: {e}") from e
