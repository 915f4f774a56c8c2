"""Named test states for estimator validation and campaigns."""

import logging
from typing import Callable, Dict, Tuple

import numpy as np

from ..domain.model.errors import ConfigError, SimulationGuardError
from ..domain.model.quantum_state import DENSE_QUBIT_LIMIT, QuantumState
from ..domain.service.clifford_group import GROUP_ORDER, apply_clifford_column, apply_cx, apply_cz, apply_h
from ..infrastructure.backend.stabilizer_backend import zero_tableau

logger = logging.getLogger(__name__)

Tableau = Tuple[np.ndarray, np.ndarray, np.ndarray]

PRESETS: Dict[str, str] = {
    "computational-zero": "|0...0>",
    "product-plus": "|+...+>",
    "ghz": "(|0...0> + |1...1>)/sqrt(2), stabilized by X...X and neighbouring ZZ",
    "cluster-1d": "open-chain cluster state, stabilized by Z X Z triples",
    "random-stabilizer": "seeded random Clifford circuit applied to |0...0>",
    "random-dense": "seeded Haar-like random amplitudes",
    "maximally-mixed": "I / 2^N",
}


def _product_plus(n: int, seed: int) -> Tableau:
    x, z, r = zero_tableau(n)
    for q in range(n):
        apply_h(x, z, r, q)
    return x, z, r


def _ghz(n: int, seed: int) -> Tableau:
    x, z, r = zero_tableau(n)
    apply_h(x, z, r, 0)
    for q in range(n - 1):
        apply_cx(x, z, r, q, q + 1)
    return x, z, r


def _cluster(n: int, seed: int) -> Tableau:
    x, z, r = _product_plus(n, seed)
    for q in range(n - 1):
        apply_cz(x, z, r, q, q + 1)
    return x, z, r


def _random_stabilizer(n: int, seed: int) -> Tableau:
    rng = np.random.default_rng([seed, n])
    x, z, r = zero_tableau(n)
    for _ in range(max(2, 2 * n)):
        for q in range(n):
            index = np.full(r.shape, int(rng.integers(GROUP_ORDER)), dtype=np.intp)
            apply_clifford_column(x, z, r, q, index)
        if n > 1:
            order = rng.permutation(n)
            for a, b in zip(order[0::2], order[1::2]):
                apply_cx(x, z, r, int(a), int(b))
    return x, z, r


_STABILIZER_BUILDERS: Dict[str, Callable[[int, int], Tableau]] = {
    "computational-zero": lambda n, seed: zero_tableau(n),
    "product-plus": _product_plus,
    "ghz": _ghz,
    "cluster-1d": _cluster,
    "random-stabilizer": _random_stabilizer,
}


def prepare_preset(
    name: str, num_qubits: int, seed: int = 0, dense_max_qubits: int = DENSE_QUBIT_LIMIT
) -> QuantumState:
    """
    Build a preset state.

    Args:
        name: One of :data:`PRESETS`
        num_qubits: Register size
        seed: Used by the random presets only

    Returns:
        QuantumState on ``num_qubits`` qubits
    """
    key = name.strip().lower()
    if key not in PRESETS:
        raise ConfigError("Unknown state preset", {"preset": name, "known": ", ".join(sorted(PRESETS))})
    if num_qubits < 1:
        raise ConfigError("Presets need at least one qubit", {"num_qubits": num_qubits})
    if key == "maximally-mixed":
        return QuantumState.maximally_mixed(num_qubits)
    if key == "random-dense":
        limit = min(dense_max_qubits, DENSE_QUBIT_LIMIT)
        if num_qubits > limit:
            raise SimulationGuardError(
                "Dense preset exceeds the qubit guard", {"num_qubits": num_qubits, "limit": limit}
            )
        rng = np.random.default_rng([seed, num_qubits])
        dimension = 1 << num_qubits
        amplitudes = rng.normal(size=dimension) + 1j * rng.normal(size=dimension)
        amplitudes /= np.linalg.norm(amplitudes)
        return QuantumState.dense(amplitudes, preset=key, max_qubits=limit)
    x, z, r = _STABILIZER_BUILDERS[key](num_qubits, seed)
    logger.debug("prepared preset %s on %d qubits", key, num_qubits)
    return QuantumState.stabilizer(x, z, r, preset=key)
