"""YAML configuration loading and validation."""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from streamtl.config.schema import PolicyConfig, RunConfig
from streamtl.exceptions import ConfigurationError


def load_yaml(path: str | Path) -> dict[str, Any]:
    """Load a YAML file and return its contents as a dictionary."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Config file not found: {path}")
    if not path.is_file():
        raise ConfigurationError(f"Config path is not a file: {path}")

    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid YAML syntax: {e}") from e

    if not isinstance(data, dict):
        raise ConfigurationError("Config file must contain a YAML mapping")

    return data


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a run configuration from a YAML file."""
    data = load_yaml(path)
    return parse_config(data)


def parse_config(data: Mapping[str, Any]) -> RunConfig:
    """Parse and validate a run configuration dictionary."""
    try:
        return RunConfig.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e


def parse_policy_config(data: PolicyConfig | Mapping[str, Any]) -> PolicyConfig:
    """Validate an engine configuration given as a model or a mapping."""
    if isinstance(data, PolicyConfig):
        return data
    try:
        return PolicyConfig.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid policy configuration: {e}") from e
