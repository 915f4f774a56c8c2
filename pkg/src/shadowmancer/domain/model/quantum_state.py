from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import SimulationGuardError
from .pauli_string import PauliString

DENSE_QUBIT_LIMIT = 24
NORM_TOLERANCE = 1e-10
REFERENCE_SEED = 20240601


class StateBackend(str, Enum):
    STABILIZER = "stabilizer"
    DENSE = "dense"
    MAXIMALLY_MIXED = "maximally_mixed"


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over GF(2) by row reduction."""
    work = (np.array(matrix, dtype=np.uint8) & 1).copy()
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        pivots = np.nonzero(work[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + pivots[0]
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        others = np.nonzero(work[:, col])[0]
        others = others[others != rank]
        work[others] ^= work[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _frozen(array: np.ndarray, dtype: type) -> np.ndarray:
    result = np.array(array, dtype=dtype, copy=True)
    result.setflags(write=False)
    return result


class QuantumState(BaseModel):
    """Input state: an AG tableau (destabilizers then stabilizers), amplitudes, or I/2^N."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    backend: StateBackend
    num_qubits: int
    tableau_x: Optional[np.ndarray] = None
    tableau_z: Optional[np.ndarray] = None
    tableau_r: Optional[np.ndarray] = None
    amplitudes: Optional[np.ndarray] = None
    preset: Optional[str] = None

    @model_validator(mode="after")
    def _check_backend(self) -> "QuantumState":
        n = self.num_qubits
        if n < 1:
            raise ValueError("num_qubits must be positive")
        if self.backend == StateBackend.STABILIZER:
            if self.tableau_x is None or self.tableau_z is None or self.tableau_r is None:
                raise ValueError("stabilizer state needs a tableau")
            if self.tableau_x.shape != (2 * n, n) or self.tableau_z.shape != (2 * n, n):
                raise ValueError("tableau must have 2N rows of N columns")
            if self.tableau_r.shape != (2 * n,):
                raise ValueError("tableau needs one sign bit per row")
            stab_x = self.tableau_x[n:].astype(np.int64)
            stab_z = self.tableau_z[n:].astype(np.int64)
            form = (stab_x @ stab_z.T + stab_z @ stab_x.T) % 2
            if np.any(form):
                raise ValueError("stabilizer generators must commute")
            if gf2_rank(np.hstack([self.tableau_x[n:], self.tableau_z[n:]])) != n:
                raise ValueError("stabilizer generators must be independent")
        elif self.backend == StateBackend.DENSE:
            if self.amplitudes is None or self.amplitudes.shape != (1 << n,):
                raise ValueError("dense state needs 2^N amplitudes")
            if abs(float(np.linalg.norm(self.amplitudes)) - 1.0) > NORM_TOLERANCE:
                raise ValueError("amplitudes must have unit norm")
        return self

    @classmethod
    def stabilizer(
        cls, x: np.ndarray, z: np.ndarray, r: np.ndarray, preset: Optional[str] = None
    ) -> "QuantumState":
        num_qubits = int(np.asarray(x).shape[1])
        return cls(
            backend=StateBackend.STABILIZER,
            num_qubits=num_qubits,
            tableau_x=_frozen(x, np.uint8),
            tableau_z=_frozen(z, np.uint8),
            tableau_r=_frozen(r, np.uint8),
            preset=preset,
        )

    @classmethod
    def dense(
        cls, amplitudes: np.ndarray, preset: Optional[str] = None, max_qubits: int = DENSE_QUBIT_LIMIT
    ) -> "QuantumState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        num_qubits = amplitudes.size.bit_length() - 1
        if num_qubits > min(max_qubits, DENSE_QUBIT_LIMIT):
            raise SimulationGuardError(
                "Dense state exceeds the qubit guard", {"num_qubits": num_qubits, "limit": max_qubits}
            )
        return cls(
            backend=StateBackend.DENSE,
            num_qubits=num_qubits,
            amplitudes=_frozen(amplitudes, np.complex128),
            preset=preset,
        )

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "QuantumState":
        return cls(backend=StateBackend.MAXIMALLY_MIXED, num_qubits=num_qubits, preset="maximally-mixed")

    def to_dense(self, max_qubits: int = DENSE_QUBIT_LIMIT) -> "QuantumState":
        """Amplitude form of a stabilizer state, up to a global phase.

        A fixed reference vector is projected onto the joint +1 eigenspace of the
        generators. Dense states are returned unchanged.
        """
        if self.backend == StateBackend.DENSE:
            return self
        if self.backend != StateBackend.STABILIZER:
            raise SimulationGuardError("The maximally mixed state has no amplitudes", {"num_qubits": self.num_qubits})
        if self.num_qubits > min(max_qubits, DENSE_QUBIT_LIMIT):
            raise SimulationGuardError(
                "Dense state exceeds the qubit guard", {"num_qubits": self.num_qubits, "limit": max_qubits}
            )
        rng = np.random.default_rng(REFERENCE_SEED)
        dimension = 1 << self.num_qubits
        vector = rng.normal(size=dimension) + 1j * rng.normal(size=dimension)
        for generator in self.stabilizers():
            vector = 0.5 * (vector + generator.apply_to(vector))
        norm = float(np.linalg.norm(vector))
        if norm < NORM_TOLERANCE:
            raise SimulationGuardError("Projection of the reference vector vanished", {"preset": self.preset})
        # fix the global phase on the largest amplitude
        lead = vector[int(np.argmax(np.abs(vector)))]
        vector = vector * (abs(lead) / lead) / norm
        return QuantumState.dense(vector, preset=self.preset, max_qubits=max_qubits)

    def stabilizers(self) -> List[PauliString]:
        if self.backend != StateBackend.STABILIZER:
            raise SimulationGuardError("Only stabilizer states carry generators", {"backend": self.backend.value})
        assert self.tableau_x is not None and self.tableau_z is not None and self.tableau_r is not None
        n = self.num_qubits
        return [
            PauliString(
                num_qubits=n,
                x_bits=tuple(int(b) for b in self.tableau_x[n + i]),
                z_bits=tuple(int(b) for b in self.tableau_z[n + i]),
                sign=-1 if self.tableau_r[n + i] else 1,
            )
            for i in range(n)
        ]
