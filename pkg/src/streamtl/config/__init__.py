"""Configuration module for StreamTL."""

from streamtl.config.loader import (
    load_config,
    load_yaml,
    parse_config,
    parse_policy_config,
)
from streamtl.config.schema import (
    TASK_EVAL_MODES,
    BackendConfig,
    ClockMode,
    EvalMode,
    ExportConfig,
    PolicyConfig,
    PolicyKind,
    RunConfig,
    Task,
)

__all__ = [
    "TASK_EVAL_MODES",
    "BackendConfig",
    "ClockMode",
    "EvalMode",
    "ExportConfig",
    "PolicyConfig",
    "PolicyKind",
    "RunConfig",
    "Task",
    "load_config",
    "load_yaml",
    "parse_config",
    "parse_policy_config",
]
