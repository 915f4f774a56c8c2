"""Single-qubit Clifford table and symplectic gate rules.

The 24 group elements are enumerated breadth-first over words in ``{H, S}``
starting from the identity, with ``H`` tried before ``S`` and elements deduplicated
up to global phase. Index 0 is the identity. Snapshots store indices into this
table, so the order is part of the dataset format.

Pauli codes follow the symplectic convention ``code = x + 2 z``:
0 = I, 1 = X, 2 = Z, 3 = Y.
"""

from collections import deque
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..model.circuit import Gate
from ..model.errors import SimulationGuardError

GROUP_ORDER = 24

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
GENERATORS: Dict[str, np.ndarray] = {"H": _H, "S": _S}

# Indexed by symplectic code
CODE_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)


class CliffordTable(BaseModel):
    """Unitaries of the group plus their action on Pauli codes.

    ``image_codes[c, p]`` and ``image_signs[c, p]`` give U P U^dagger = (-1)^sign * Pauli(code).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    unitaries: np.ndarray
    words: Tuple[str, ...]
    image_codes: np.ndarray
    image_signs: np.ndarray

    def __len__(self) -> int:
        return len(self.words)


def _phase_key(unitary: np.ndarray) -> Tuple[float, ...]:
    flat = unitary.reshape(-1)
    lead = flat[np.argmax(np.abs(flat) > 1e-9)]
    normalized = flat * (abs(lead) / lead)
    return tuple(np.round(np.concatenate([normalized.real, normalized.imag]), 8) + 0.0)


def _pauli_image(unitary: np.ndarray, code: int) -> Tuple[int, int]:
    conjugated = unitary @ CODE_MATRICES[code] @ unitary.conj().T
    for candidate, matrix in enumerate(CODE_MATRICES):
        overlap = np.trace(matrix.conj().T @ conjugated).real / 2.0
        if abs(abs(overlap) - 1.0) < 1e-9:
            return candidate, 0 if overlap > 0 else 1
    raise ArithmeticError("conjugated Pauli is not a Pauli")


@lru_cache(maxsize=1)
def clifford_table() -> CliffordTable:
    unitaries: List[np.ndarray] = [np.eye(2, dtype=complex)]
    words: List[str] = [""]
    seen = {_phase_key(unitaries[0])}
    queue = deque([0])
    while queue:
        index = queue.popleft()
        for letter, gate in GENERATORS.items():
            candidate = gate @ unitaries[index]
            key = _phase_key(candidate)
            if key in seen:
                continue
            seen.add(key)
            unitaries.append(candidate)
            words.append(words[index] + letter)
            queue.append(len(unitaries) - 1)
    if len(unitaries) != GROUP_ORDER:
        raise ArithmeticError(f"enumerated {len(unitaries)} Cliffords instead of {GROUP_ORDER}")

    codes = np.zeros((GROUP_ORDER, 4), dtype=np.uint8)
    signs = np.zeros((GROUP_ORDER, 4), dtype=np.uint8)
    for index, unitary in enumerate(unitaries):
        for code in range(4):
            codes[index, code], signs[index, code] = _pauli_image(unitary, code)
    stack = np.stack(unitaries)
    for array in (stack, codes, signs):
        array.setflags(write=False)
    return CliffordTable(unitaries=stack, words=tuple(words), image_codes=codes, image_signs=signs)


# Symplectic rules (Aaronson-Gottesman). Arrays hold rows along the leading axes and
# qubits along the last axis of ``x``/``z``; ``r`` has the shape of the leading axes.
# Every update is in place.


def apply_h(x: np.ndarray, z: np.ndarray, r: np.ndarray, q: int) -> None:
    r ^= x[..., q] & z[..., q]
    column = x[..., q].copy()
    x[..., q] = z[..., q]
    z[..., q] = column


def apply_s(x: np.ndarray, z: np.ndarray, r: np.ndarray, q: int) -> None:
    r ^= x[..., q] & z[..., q]
    z[..., q] ^= x[..., q]


def apply_cx(x: np.ndarray, z: np.ndarray, r: np.ndarray, control: int, target: int) -> None:
    r ^= x[..., control] & z[..., target] & (x[..., target] ^ z[..., control] ^ 1)
    x[..., target] ^= x[..., control]
    z[..., control] ^= z[..., target]


def apply_cz(x: np.ndarray, z: np.ndarray, r: np.ndarray, a: int, b: int) -> None:
    apply_h(x, z, r, b)
    apply_cx(x, z, r, a, b)
    apply_h(x, z, r, b)


def apply_clifford_column(x: np.ndarray, z: np.ndarray, r: np.ndarray, q: int, indices: np.ndarray) -> None:
    """Conjugate column ``q`` by per-row Cliffords; ``indices`` broadcasts against ``r``."""
    table = clifford_table()
    codes = x[..., q] + 2 * z[..., q]
    images = table.image_codes[indices, codes]
    r ^= table.image_signs[indices, codes]
    x[..., q] = images & 1
    z[..., q] = images >> 1


def apply_gate(x: np.ndarray, z: np.ndarray, r: np.ndarray, gate: Gate) -> None:
    """Conjugate by a Clifford gate; CPhase is accepted at the angles 0 and pi only."""
    name = gate.name
    if name == "H":
        apply_h(x, z, r, gate.qubits[0])
    elif name == "S":
        apply_s(x, z, r, gate.qubits[0])
    elif name == "CX":
        apply_cx(x, z, r, gate.qubits[0], gate.qubits[1])
    elif name == "CZ":
        apply_cz(x, z, r, gate.qubits[0], gate.qubits[1])
    elif name == "CLIFFORD":
        assert gate.param is not None
        indices = np.full(r.shape, int(gate.param), dtype=np.intp)
        apply_clifford_column(x, z, r, gate.qubits[0], indices)
    elif name == "CPHASE":
        assert gate.param is not None
        if abs(gate.param) <= 1e-12:
            return
        if abs(abs(gate.param) - np.pi) <= 1e-12:
            apply_cz(x, z, r, gate.qubits[0], gate.qubits[1])
            return
        raise SimulationGuardError("Non-Clifford CPhase in a symplectic simulation", {"phi": gate.param})
    else:
        raise SimulationGuardError("Unsupported gate", {"gate": name})


@lru_cache(maxsize=1)
def inverse_indices() -> Tuple[int, ...]:
    """``inverse_indices()[c]`` is the table index of the inverse of element ``c``."""
    table = clifford_table()
    keys = {_phase_key(unitary): index for index, unitary in enumerate(table.unitaries)}
    return tuple(keys[_phase_key(unitary.conj().T)] for unitary in table.unitaries)
