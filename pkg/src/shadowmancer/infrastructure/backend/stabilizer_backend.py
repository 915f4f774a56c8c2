"""Aaronson-Gottesman tableau simulation, vectorized over a chunk of shots.

Each shot owns a copy of the ``2N x N`` tableau (destabilizer rows first). Gates
are applied to all shots at once; measurement of qubit ``a`` splits the chunk into
shots where the outcome is random and shots where it is fixed by the state.
"""

import logging
from typing import Tuple

import numpy as np

from ...domain.interface.state_backend_interface import StateBackendInterface
from ...domain.model.errors import SimulationGuardError
from ...domain.model.pauli_string import PauliString
from ...domain.model.protocol_spec import ProtocolSpec
from ...domain.model.quantum_state import QuantumState, StateBackend
from ...domain.service.circuit_service import block_circuit
from ...domain.service.clifford_group import apply_clifford_column, apply_gate
from ...domain.service.seeding import uniform_draws

logger = logging.getLogger(__name__)


def zero_tableau(num_qubits: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tableau of |0...0>: destabilizers X_i, stabilizers Z_i."""
    n = num_qubits
    x = np.zeros((2 * n, n), dtype=np.uint8)
    z = np.zeros((2 * n, n), dtype=np.uint8)
    x[np.arange(n), np.arange(n)] = 1
    z[n + np.arange(n), np.arange(n)] = 1
    return x, z, np.zeros(2 * n, dtype=np.uint8)


def phase_sum(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Sum over the last axis of the exponent of i in sigma(x1,z1) * sigma(x2,z2)."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    g = np.where(
        (x1 & z1) == 1,
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    return g.sum(axis=-1)


def scramble_and_rotate(
    x: np.ndarray, z: np.ndarray, r: np.ndarray, spec: ProtocolSpec, scramblers: np.ndarray
) -> None:
    """Apply per-shot scramblers then every block circuit, in place."""
    for qubit in range(spec.num_qubits):
        column = scramblers[:, qubit].astype(np.intp)
        if np.any(column):
            apply_clifford_column(x, z, r, qubit, column[:, None])
    for block, basis in zip(spec.covering.blocks, spec.bases):
        for gate in block_circuit(basis).gates:
            apply_gate(x, z, r, gate.shifted(block))


def measure_qubit(x: np.ndarray, z: np.ndarray, r: np.ndarray, qubit: int, draws: np.ndarray) -> np.ndarray:
    """Z measurement of ``qubit`` on every shot; updates the tableaux in place."""
    shots, rows, _ = x.shape
    n = rows // 2
    a = qubit
    bits = np.zeros(shots, dtype=np.uint8)
    stabilizer_x = x[:, n:, a]
    random = stabilizer_x.any(axis=1)

    chosen = np.nonzero(random)[0]
    if chosen.size:
        xr, zr, rr = x[chosen], z[chosen], r[chosen]
        lanes = np.arange(chosen.size)
        pivot = n + np.argmax(stabilizer_x[chosen], axis=1)
        xp, zp, rp = xr[lanes, pivot].copy(), zr[lanes, pivot].copy(), rr[lanes, pivot].copy()
        mask = xr[:, :, a].astype(bool)
        mask[lanes, pivot] = False
        total = (2 * rr.astype(np.int64) + 2 * rp[:, None].astype(np.int64) + phase_sum(
            xp[:, None, :], zp[:, None, :], xr, zr
        )) % 4
        rr = np.where(mask, (total == 2).astype(np.uint8), rr)
        xr = np.where(mask[:, :, None], xr ^ xp[:, None, :], xr)
        zr = np.where(mask[:, :, None], zr ^ zp[:, None, :], zr)
        xr[lanes, pivot - n] = xp
        zr[lanes, pivot - n] = zp
        rr[lanes, pivot - n] = rp
        outcome = (draws[chosen] >= 0.5).astype(np.uint8)
        xr[lanes, pivot] = 0
        zr[lanes, pivot] = 0
        zr[lanes, pivot, a] = 1
        rr[lanes, pivot] = outcome
        x[chosen], z[chosen], r[chosen] = xr, zr, rr
        bits[chosen] = outcome

    fixed = np.nonzero(~random)[0]
    if fixed.size:
        xd, zd, rd = x[fixed], z[fixed], r[fixed]
        scratch_x = np.zeros((fixed.size, n), dtype=np.uint8)
        scratch_z = np.zeros((fixed.size, n), dtype=np.uint8)
        scratch_r = np.zeros(fixed.size, dtype=np.int64)
        for row in range(n):
            selected = xd[:, row, a].astype(bool)
            if not selected.any():
                continue
            gx, gz = xd[selected, row + n], zd[selected, row + n]
            gr = rd[selected, row + n].astype(np.int64)
            total = (2 * scratch_r[selected] + 2 * gr + phase_sum(gx, gz, scratch_x[selected], scratch_z[selected])) % 4
            scratch_r[selected] = (total == 2).astype(np.int64)
            scratch_x[selected] ^= gx
            scratch_z[selected] ^= gz
        bits[fixed] = scratch_r.astype(np.uint8)
    return bits


def stabilizer_expectation(state: QuantumState, pauli: PauliString) -> float:
    """Exact <P> on a stabilizer state: 0, +1 or -1."""
    if state.backend != StateBackend.STABILIZER:
        raise SimulationGuardError("Stabilizer expectation needs a tableau", {"backend": state.backend.value})
    if pauli.num_qubits != state.num_qubits:
        raise SimulationGuardError("Operator and state sizes differ", {"operator": pauli.num_qubits})
    generators = state.stabilizers()
    if not all(pauli.commutes(generator) for generator in generators):
        return 0.0
    assert state.tableau_x is not None and state.tableau_z is not None
    n = state.num_qubits
    product = PauliString.identity(n)
    for row in range(n):
        destabilizer = PauliString(
            num_qubits=n,
            x_bits=tuple(int(b) for b in state.tableau_x[row]),
            z_bits=tuple(int(b) for b in state.tableau_z[row]),
        )
        if not pauli.commutes(destabilizer):
            product = product.multiply(generators[row])
    if product.x_bits != pauli.x_bits or product.z_bits != pauli.z_bits:
        raise SimulationGuardError("Tableau does not decompose the operator", {"operator": pauli.label()})
    return float(product.sign * pauli.sign)


class StabilizerBackend(StateBackendInterface):
    """Clifford protocols on stabilizer states."""

    name = "stabilizer"

    def supports(self, state: QuantumState, spec: ProtocolSpec) -> bool:
        return state.backend == StateBackend.STABILIZER and spec.is_clifford

    def sample_outcomes(
        self,
        state: QuantumState,
        spec: ProtocolSpec,
        scramblers: np.ndarray,
        shot_seeds: np.ndarray,
    ) -> np.ndarray:
        if state.backend != StateBackend.STABILIZER:
            raise SimulationGuardError("Stabilizer backend needs a tableau state", {"backend": state.backend.value})
        if not spec.is_clifford:
            raise SimulationGuardError(
                "Non-Clifford circuit with a stabilizer-only backend", {"protocol": spec.protocol_id}
            )
        n = state.num_qubits
        shots = scramblers.shape[0]
        if scramblers.shape != (shots, n) or n != spec.num_qubits:
            raise SimulationGuardError("Scramblers do not match the register", {"num_qubits": n})
        assert state.tableau_x is not None and state.tableau_z is not None and state.tableau_r is not None
        x = np.broadcast_to(state.tableau_x, (shots, 2 * n, n)).copy()
        z = np.broadcast_to(state.tableau_z, (shots, 2 * n, n)).copy()
        r = np.broadcast_to(state.tableau_r, (shots, 2 * n)).copy()
        scramble_and_rotate(x, z, r, spec, scramblers)
        draws = uniform_draws(shot_seeds, np.arange(n, 2 * n, dtype=np.uint64))
        outcomes = np.empty((shots, n), dtype=np.uint8)
        for qubit in range(n):
            outcomes[:, qubit] = measure_qubit(x, z, r, qubit, draws[:, qubit])
        logger.debug("stabilizer chunk shots=%d n=%d", shots, n)
        return outcomes
