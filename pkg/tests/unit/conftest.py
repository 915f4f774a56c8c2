"""Shared fixtures for unit tests."""

from __future__ import annotations

from typing import Iterator

import pytest

from shadowmancer.application.state_presets import prepare_preset
from shadowmancer.domain.model.config_manager import ConfigManager
from shadowmancer.domain.model.protocol_spec import ProtocolSpec
from shadowmancer.domain.model.quantum_state import QuantumState
from shadowmancer.infrastructure.logging.shadow_logger import ShadowLogger
from tests.unit.protocols import bell_chain, tunable_chain


@pytest.fixture(autouse=True)  # type: ignore[misc]
def fresh_singletons(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Each test starts from default settings and an empty stage history."""
    monkeypatch.delenv("SHADOWS_WORKERS", raising=False)
    ConfigManager.reset()
    ShadowLogger.reset_instance()
    yield
    ConfigManager.reset()
    ShadowLogger.reset_instance()


@pytest.fixture  # type: ignore[misc]
def bell_spec() -> ProtocolSpec:
    """Even dimers on four qubits."""
    return bell_chain(4)


@pytest.fixture  # type: ignore[misc]
def tunable_spec() -> ProtocolSpec:
    return tunable_chain(4)


@pytest.fixture  # type: ignore[misc]
def ghz_state() -> QuantumState:
    return prepare_preset("ghz", 4)


@pytest.fixture  # type: ignore[misc]
def mixed_state() -> QuantumState:
    return QuantumState.maximally_mixed(4)
