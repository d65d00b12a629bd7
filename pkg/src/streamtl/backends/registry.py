"""Backend registry for mapping backend kinds to backend factories."""

import os
from collections.abc import Callable, Sequence

from streamtl.backends.fixture import Fixture
from streamtl.backends.remote import RemoteBackend
from streamtl.backends.scripted import ScriptedBackend
from streamtl.base import BaseBackend
from streamtl.config.schema import BackendConfig
from streamtl.exceptions import ConfigurationError

BackendFactory = Callable[[BackendConfig, Sequence[Fixture]], BaseBackend]


def _scripted(config: BackendConfig, fixtures: Sequence[Fixture]) -> BaseBackend:
    return ScriptedBackend(fixtures)


def _remote(config: BackendConfig, fixtures: Sequence[Fixture]) -> BaseBackend:
    return RemoteBackend(
        config.url or "",
        timeout_s=config.timeout_s,
        token=os.environ.get(config.token_env),
    )


# Registry mapping backend kind strings to backend factories
_BACKEND_REGISTRY: dict[str, BackendFactory] = {
    "scripted": _scripted,
    "remote": _remote,
}


def get_backend(config: BackendConfig, fixtures: Sequence[Fixture]) -> BaseBackend:
    """Build a backend for the configured kind.

    Args:
        config: The backend configuration
        fixtures: Fixtures of the run, served by the scripted backend

    Returns:
        A ready backend instance

    Raises:
        ConfigurationError: If the backend kind is not supported
    """
    factory = _BACKEND_REGISTRY.get(config.kind)
    if factory is None:
        supported = ", ".join(_BACKEND_REGISTRY.keys())
        raise ConfigurationError(
            f"Unsupported backend kind: {config.kind}. Supported: {supported}"
        )
    return factory(config, fixtures)


def register_backend(kind: str, factory: BackendFactory) -> None:
    """Register a new backend factory for a backend kind.

    Args:
        kind: The backend kind string
        factory: Callable building the backend from config and fixtures
    """
    _BACKEND_REGISTRY[kind] = factory
