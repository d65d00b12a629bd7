"""Tests for CoT dataset writers."""

import json
from pathlib import Path
from unittest.mock import MagicMock, patch

import pandas as pd
import pytest

from streamtl.base import BaseWriter
from streamtl.config import ExportConfig
from streamtl.cot import CotExample, ExampleKind
from streamtl.exceptions import ConfigurationError, ExportError
from streamtl.export import (
    HuggingFaceWriter,
    JSONLWriter,
    ParquetWriter,
    get_writer,
    register_writer,
)


@pytest.fixture
def examples() -> list[CotExample]:
    return [
        CotExample(
            source_id="a",
            truncate_chunk=2,
            truncate_ms=1280,
            partial_transcript="w1 w2",
            full_translation="t1 t2 t3",
            prompt="Translate to German.",
            kind=ExampleKind.STREAMING,
        ),
        CotExample(
            source_id="b",
            truncate_chunk=3,
            truncate_ms=1920,
            partial_transcript="x1 x2 x3",
            full_translation="y1 y2 y3",
            prompt="Translate to German.",
            kind=ExampleKind.NON_STREAMING,
        ),
    ]


class TestJSONLWriter:
    """Tests for JSONLWriter."""

    def test_write(self, tmp_path: Path, examples: list[CotExample]):
        path = tmp_path / "out" / "cot.jsonl"
        JSONLWriter(ExportConfig(destination="jsonl", path=str(path))).write(examples)

        records = [json.loads(line) for line in path.read_text().splitlines()]
        assert [r["source_id"] for r in records] == ["a", "b"]
        assert records[0]["kind"] == "streaming"
        assert records[1]["kind"] == "non_streaming"
        assert CotExample.model_validate(records[0]) == examples[0]

    def test_empty(self, tmp_path: Path):
        path = tmp_path / "cot.jsonl"
        JSONLWriter(ExportConfig(destination="jsonl", path=str(path))).write([])
        assert not path.exists()


class TestParquetWriter:
    """Tests for ParquetWriter."""

    def test_write(self, tmp_path: Path, examples: list[CotExample]):
        path = tmp_path / "out" / "cot.parquet"
        config = ExportConfig(destination="parquet", path=str(path))
        ParquetWriter(config).write(examples)

        loaded = pd.read_parquet(path)
        assert list(loaded.columns) == list(CotExample.model_fields)
        assert loaded["truncate_ms"].tolist() == [1280, 1920]
        assert loaded["kind"].tolist() == ["streaming", "non_streaming"]

    def test_empty(self, tmp_path: Path):
        path = tmp_path / "cot.parquet"
        ParquetWriter(ExportConfig(destination="parquet", path=str(path))).write([])
        assert not path.exists()


class TestHuggingFaceWriter:
    """Tests for HuggingFaceWriter."""

    def test_write(self, examples: list[CotExample]):
        config = ExportConfig(destination="huggingface", repo_id="test-user/cot")
        writer = HuggingFaceWriter(config)

        with patch("streamtl.export.huggingface.DatasetDict") as mock_dataset_dict:
            mock_instance = MagicMock()
            mock_dataset_dict.return_value = mock_instance

            writer.write(examples)

            # Single train split
            call_args = mock_dataset_dict.call_args[0][0]
            assert list(call_args) == ["train"]
            assert call_args["train"].num_rows == 2

            mock_instance.push_to_hub.assert_called_once_with(
                "test-user/cot", private=False
            )

    def test_private_repo(self, examples: list[CotExample]):
        config = ExportConfig(
            destination="huggingface", repo_id="test-user/cot", private=True
        )
        writer = HuggingFaceWriter(config)

        with patch("streamtl.export.huggingface.DatasetDict") as mock_dataset_dict:
            mock_instance = MagicMock()
            mock_dataset_dict.return_value = mock_instance

            writer.write(examples)

            mock_instance.push_to_hub.assert_called_once_with(
                "test-user/cot", private=True
            )

    def test_empty(self):
        config = ExportConfig(destination="huggingface", repo_id="test-user/cot")

        with patch("streamtl.export.huggingface.DatasetDict") as mock_dataset_dict:
            HuggingFaceWriter(config).write([])

            mock_dataset_dict.return_value.push_to_hub.assert_not_called()

    def test_push_to_hub_failure(self, examples: list[CotExample]):
        config = ExportConfig(destination="huggingface", repo_id="test-user/cot")
        writer = HuggingFaceWriter(config)

        with patch("streamtl.export.huggingface.DatasetDict") as mock_dataset_dict:
            mock_instance = MagicMock()
            mock_instance.push_to_hub.side_effect = Exception("Upload failed")
            mock_dataset_dict.return_value = mock_instance

            with pytest.raises(ExportError, match="Failed to upload to HuggingFace"):
                writer.write(examples)


class TestWriterRegistry:
    """Tests for the writer registry."""

    @pytest.mark.parametrize(
        "destination,writer_class",
        [
            ("jsonl", JSONLWriter),
            ("parquet", ParquetWriter),
            ("huggingface", HuggingFaceWriter),
        ],
    )
    def test_get_writer(self, destination: str, writer_class: type[BaseWriter]):
        assert get_writer(destination) is writer_class

    def test_unknown_destination(self):
        with pytest.raises(ConfigurationError, match="Unsupported destination"):
            get_writer("s3")

    def test_register_writer(self):
        class CustomWriter(BaseWriter):
            def write(self, examples):
                pass

        register_writer("custom", CustomWriter)
        assert get_writer("custom") is CustomWriter
