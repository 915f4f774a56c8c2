from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import ChannelError

PURITY_TOLERANCE = 1e-10


def subsystem_purity(state: np.ndarray, mask: int, size: int) -> float:
    """Purity of the reduced state of ``state`` on the sites selected by ``mask``.

    Site ``j`` of the block is tensor axis ``j`` (site 0 most significant).
    """
    kept = [j for j in range(size) if (mask >> j) & 1]
    if not kept:
        return 1.0
    traced = [j for j in range(size) if not (mask >> j) & 1]
    tensor = np.asarray(state, dtype=complex).reshape((2,) * size)
    matrix = np.transpose(tensor, kept + traced).reshape(1 << len(kept), 1 << len(traced))
    reduced = matrix @ matrix.conj().T
    return float(np.real(np.vdot(reduced, reduced)))


class EntanglementFeature(BaseModel):
    """Average subsystem purity of a block basis, indexed by subset bitmask."""

    model_config = ConfigDict(frozen=True)

    block_size: int
    purities: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_purities(self) -> "EntanglementFeature":
        n = self.block_size
        full = (1 << n) - 1
        if len(self.purities) != 1 << n:
            raise ValueError("one purity per subset is required")
        if abs(self.purities[0] - 1.0) > PURITY_TOLERANCE or abs(self.purities[full] - 1.0) > PURITY_TOLERANCE:
            raise ValueError("empty set and full block must have purity 1")
        for mask, value in enumerate(self.purities):
            size = bin(mask).count("1")
            if value < 2.0**-size - PURITY_TOLERANCE or value > 1.0 + PURITY_TOLERANCE:
                raise ValueError(f"purity {value!r} of subset {mask} out of range")
            if abs(value - self.purities[full ^ mask]) > PURITY_TOLERANCE:
                raise ValueError(f"subset {mask} and its complement differ in purity")
        return self

    @classmethod
    def from_purities(cls, block_size: int, purities: Sequence[float]) -> "EntanglementFeature":
        try:
            return cls(block_size=block_size, purities=tuple(float(p) for p in purities))
        except ValueError as exc:
            raise ChannelError("Invalid entanglement feature", {"reason": str(exc).splitlines()[0]}) from exc

    @classmethod
    def uniform(cls, block_size: int, purity: float) -> "EntanglementFeature":
        """Every proper non-empty subset at the same purity."""
        full = (1 << block_size) - 1
        values = [1.0 if mask in (0, full) else purity for mask in range(1 << block_size)]
        return cls.from_purities(block_size, values)

    @classmethod
    def from_basis(cls, states: np.ndarray) -> "EntanglementFeature":
        """Measured feature of an orthonormal basis given as rows."""
        states = np.asarray(states, dtype=complex)
        dimension = states.shape[0]
        size = dimension.bit_length() - 1
        if states.shape != (dimension, dimension) or 1 << size != dimension:
            raise ChannelError("Basis must be a 2^n x 2^n array", {"shape": list(states.shape)})
        purities = [
            float(np.mean([subsystem_purity(state, mask, size) for state in states])) for mask in range(dimension)
        ]
        return cls.from_purities(size, purities)

    def purity(self, mask: int) -> float:
        return self.purities[mask]
