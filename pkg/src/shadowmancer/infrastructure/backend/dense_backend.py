"""State-vector simulation for any protocol, Clifford or not, up to the dense guard."""

import logging
from typing import Sequence

import numpy as np

from ...domain.interface.state_backend_interface import StateBackendInterface
from ...domain.model.circuit import Circuit
from ...domain.model.errors import SimulationGuardError
from ...domain.model.pauli_string import PauliString
from ...domain.model.protocol_spec import ProtocolSpec
from ...domain.model.quantum_state import DENSE_QUBIT_LIMIT, QuantumState, StateBackend
from ...domain.service.circuit_service import (
    DENSE_UNITARY_QUBIT_LIMIT,
    apply_matrix,
    block_circuit,
    evolve,
    gate_matrix,
)
from ...domain.service.clifford_group import clifford_table
from ...domain.service.seeding import uniform_draws
from .stabilizer_backend import stabilizer_expectation

logger = logging.getLogger(__name__)

# amplitudes held per chunk
CHUNK_AMPLITUDES = 1 << 22


def chunk_shots(num_qubits: int) -> int:
    return max(1, CHUNK_AMPLITUDES >> num_qubits)


def apply_single_qubit_batch(tensor: np.ndarray, unitaries: np.ndarray, qubit: int) -> np.ndarray:
    """Apply ``unitaries[s]`` to qubit axis ``1 + qubit`` of shot ``s``."""
    moved = np.moveaxis(tensor, 1 + qubit, -1)
    updated = np.einsum("s...j,sij->s...i", moved, unitaries)
    return np.moveaxis(updated, -1, 1 + qubit)


def sample_indices(probabilities: np.ndarray, draws: np.ndarray) -> np.ndarray:
    """Inverse-CDF sampling, one uniform per row."""
    cdf = np.cumsum(probabilities, axis=1)
    targets = draws * cdf[:, -1]
    indices = np.sum(cdf <= targets[:, None], axis=1)
    return np.minimum(indices, probabilities.shape[1] - 1)


def indices_to_bits(indices: np.ndarray, num_qubits: int) -> np.ndarray:
    """Big-endian bits: qubit 0 is the most significant."""
    shifts = np.arange(num_qubits - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None].astype(np.int64) >> shifts) & 1).astype(np.uint8)


class DenseBackend(StateBackendInterface):
    """Batched state vectors, one per shot."""

    name = "dense"

    def __init__(self, max_qubits: int = DENSE_QUBIT_LIMIT) -> None:
        self.max_qubits = min(max_qubits, DENSE_QUBIT_LIMIT)

    def supports(self, state: QuantumState, spec: ProtocolSpec) -> bool:
        return state.backend != StateBackend.MAXIMALLY_MIXED and state.num_qubits <= self.max_qubits

    def sample_outcomes(
        self,
        state: QuantumState,
        spec: ProtocolSpec,
        scramblers: np.ndarray,
        shot_seeds: np.ndarray,
    ) -> np.ndarray:
        n = state.num_qubits
        if not self.supports(state, spec):
            raise SimulationGuardError(
                "Dense backend guard exceeded",
                {"num_qubits": n, "limit": self.max_qubits, "backend": state.backend.value},
            )
        shots = scramblers.shape[0]
        if scramblers.shape != (shots, n) or n != spec.num_qubits:
            raise SimulationGuardError("Scramblers do not match the register", {"num_qubits": n})
        amplitudes = state.to_dense(self.max_qubits).amplitudes
        assert amplitudes is not None
        unitaries = clifford_table().unitaries
        draws = uniform_draws(shot_seeds, np.array([n], dtype=np.uint64))[:, 0]
        outcomes = np.empty((shots, n), dtype=np.uint8)
        step = chunk_shots(n)
        for start in range(0, shots, step):
            stop = min(shots, start + step)
            tensor = np.broadcast_to(amplitudes.reshape((1,) + (2,) * n), (stop - start,) + (2,) * n).copy()
            for qubit in range(n):
                column = scramblers[start:stop, qubit].astype(np.intp)
                if np.any(column):
                    tensor = apply_single_qubit_batch(tensor, unitaries[column], qubit)
            for block, basis in zip(spec.covering.blocks, spec.bases):
                for gate in block_circuit(basis).gates:
                    local = gate.shifted(block)
                    tensor = apply_matrix(tensor, gate_matrix(local), local.qubits, offset=1)
            probabilities = np.abs(tensor.reshape(stop - start, -1)) ** 2
            outcomes[start:stop] = indices_to_bits(sample_indices(probabilities, draws[start:stop]), n)
        logger.debug("dense chunk shots=%d n=%d", shots, n)
        return outcomes


def expectation_value(state: QuantumState, pauli: PauliString) -> float:
    """Exact <P> for the reference column of estimate reports."""
    if pauli.num_qubits != state.num_qubits:
        raise SimulationGuardError("Operator and state sizes differ", {"operator": pauli.num_qubits})
    if state.backend == StateBackend.MAXIMALLY_MIXED:
        return float(pauli.sign) if pauli.is_identity() else 0.0
    if state.backend == StateBackend.STABILIZER:
        return stabilizer_expectation(state, pauli)
    if state.num_qubits > DENSE_UNITARY_QUBIT_LIMIT:
        raise SimulationGuardError("Exact expectation limited to small registers", {"num_qubits": state.num_qubits})
    assert state.amplitudes is not None
    return float(np.vdot(state.amplitudes, pauli.apply_to(state.amplitudes)).real)


def born_distribution(state: QuantumState, circuit: Circuit) -> np.ndarray:
    """Outcome probabilities after ``circuit``, indexed with the first site most significant."""
    n = state.num_qubits
    if circuit.num_qubits != n:
        raise SimulationGuardError("Circuit and state sizes differ", {"num_qubits": n})
    if state.backend == StateBackend.MAXIMALLY_MIXED:
        return np.full(1 << n, 1.0 / float(1 << n))
    if n > DENSE_UNITARY_QUBIT_LIMIT:
        raise SimulationGuardError("Born oracle limited to small registers", {"num_qubits": n})
    amplitudes = state.to_dense().amplitudes
    assert amplitudes is not None
    tensor = evolve(amplitudes.reshape((2,) * n), circuit)
    return np.abs(tensor.reshape(-1)) ** 2


def born_oracle(state: QuantumState, circuit: Circuit, outcome: Sequence[int]) -> float:
    """Probability of reading ``outcome`` after ``circuit``."""
    n = state.num_qubits
    if len(outcome) != n:
        raise SimulationGuardError("Outcome, circuit and state sizes differ", {"num_qubits": n})
    index = int("".join(str(int(bit)) for bit in outcome), 2)
    return float(born_distribution(state, circuit)[index])
