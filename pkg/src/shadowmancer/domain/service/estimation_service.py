"""Per-block matrix elements of single-shot estimators and their aggregation.

A shot on block ``B`` with scramblers ``K`` and outcome ``b`` contributes
``<b| C K P_B K^dagger C^dagger |b>``. Small blocks use a dense lookup table over all
scrambler combinations; Clifford blocks of any size can use the symplectic path,
which propagates ``P_B`` through ``K`` and ``C`` and reads the diagonal element.
"""

import logging
import math
from typing import Sequence

import numpy as np

from ..model.circuit import Circuit
from ..model.errors import EstimationError, SimulationGuardError
from ..model.estimate import Estimate
from ..model.protocol_spec import BlockBasis
from .circuit_service import basis_states, block_circuit
from .clifford_group import GROUP_ORDER, apply_gate, clifford_table
from .oracle_service import ORACLE_MAX_BLOCK, conjugated_operators

logger = logging.getLogger(__name__)

_LETTER_CODES = {"I": 0, "X": 1, "Z": 2, "Y": 3}


def block_table(basis: BlockBasis, letters: str, max_block: int = ORACLE_MAX_BLOCK) -> np.ndarray:
    """``T[combo, b]`` for the block Pauli ``letters``; ``combo = sum_j c_j 24^(n-1-j)``."""
    n = basis.size
    if len(letters) != n:
        raise EstimationError("Letters must cover the block", {"letters": letters, "size": n})
    if n > max_block:
        raise SimulationGuardError("Dense block table requested for a large block", {"n": n, "limit": max_block})
    states = basis_states(basis)
    operators = conjugated_operators(letters.upper(), frozenset(range(n)))
    table = np.einsum("bi,cij,bj->cb", states.conj(), operators, states).real
    # identity sites enter with a single combo; spread them over all 24 choices
    if table.shape[0] != GROUP_ORDER**n:
        shape = [GROUP_ORDER if letter != "I" else 1 for letter in letters.upper()]
        table = table.reshape(shape + [1 << n])
        table = np.broadcast_to(table, (GROUP_ORDER,) * n + (1 << n,)).reshape(GROUP_ORDER**n, 1 << n)
    table = np.where(np.abs(table) < 1e-12, 0.0, table)
    table.setflags(write=False)
    return table


def combo_indices(scramblers: np.ndarray) -> np.ndarray:
    """Row-wise ``sum_j c_j 24^(n-1-j)`` for scrambler columns of one block."""
    n = scramblers.shape[1]
    weights = GROUP_ORDER ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return scramblers.astype(np.int64) @ weights


def outcome_indices(outcomes: np.ndarray) -> np.ndarray:
    """Row-wise block outcome index with the first site most significant."""
    n = outcomes.shape[1]
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return outcomes.astype(np.int64) @ weights


def dense_block_values(table: np.ndarray, scramblers: np.ndarray, outcomes: np.ndarray) -> np.ndarray:
    return table[combo_indices(scramblers), outcome_indices(outcomes)]


def symplectic_block_values(
    circuit: Circuit, letters: str, scramblers: np.ndarray, outcomes: np.ndarray
) -> np.ndarray:
    """Clifford-only matrix elements, vectorized over shots.

    Each element is 0 when the propagated Pauli keeps an X component, else the
    eigenvalue ``(-1)^(r + z.b)`` of a diagonal Pauli on ``|b>``.
    """
    shots, n = scramblers.shape
    if circuit.num_qubits != n or len(letters) != n:
        raise EstimationError("Block sizes disagree", {"circuit": circuit.num_qubits, "letters": letters})
    table = clifford_table()
    codes = np.array([_LETTER_CODES[letter] for letter in letters.upper()], dtype=np.uint8)
    images = table.image_codes[scramblers, codes[None, :]]
    r = np.bitwise_xor.reduce(table.image_signs[scramblers, codes[None, :]], axis=1).astype(np.uint8)
    x = (images & 1).astype(np.uint8)
    z = (images >> 1).astype(np.uint8)
    for gate in circuit.gates:
        apply_gate(x, z, r, gate)
    hit = ~np.any(x, axis=1)
    parity = (np.sum(z & outcomes.astype(np.uint8), axis=1) + r) & 1
    return np.where(hit, 1.0 - 2.0 * parity, 0.0)


def symplectic_block_value(basis: BlockBasis, letters: str, scramblers: np.ndarray, outcomes: np.ndarray) -> np.ndarray:
    if not basis.is_clifford:
        raise SimulationGuardError("Symplectic path needs a Clifford block", {"basis": basis.key()})
    return symplectic_block_values(block_circuit(basis), letters, scramblers, outcomes)


def aggregate(values: np.ndarray, groups: int = 1) -> Estimate:
    """Mean, standard error and median of ``groups`` equal-size group means.

    The tail ``shots % groups`` is excluded from the median of means only.
    """
    values = np.asarray(values, dtype=float)
    shots = values.shape[0]
    if shots == 0:
        raise EstimationError("Cannot aggregate an empty dataset")
    if groups < 1 or groups > shots:
        raise EstimationError("Group count must lie in [1, shots]", {"groups": groups, "shots": shots})
    mean = math.fsum(values.tolist()) / shots
    std_error = float(np.std(values, ddof=1) / math.sqrt(shots)) if shots > 1 else 0.0
    size = shots // groups
    used = size * groups
    group_means = values[:used].reshape(groups, size).mean(axis=1)
    return Estimate(
        mean=mean,
        std_error=std_error,
        median_of_means=float(np.median(group_means)),
        group_count=groups,
        shots_used=shots,
        dropped_shots=shots - used,
    )


def second_moment(values: Sequence[float]) -> Estimate:
    """Aggregate of squared shot values."""
    squared = np.square(np.asarray(values, dtype=float))
    return aggregate(squared)
