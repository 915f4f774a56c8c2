from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..service.seeding import shot_seed
from .protocol_spec import ProtocolSpec

CLIFFORD_GROUP_ORDER = 24


class Snapshot(BaseModel):
    """One measurement round: scrambler choices and the observed bits."""

    model_config = ConfigDict(frozen=True)

    shot_index: int
    shot_seed: int
    protocol_id: str
    scrambler_indices: Tuple[int, ...]
    outcome_bits: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_record(self) -> "Snapshot":
        if len(self.scrambler_indices) != len(self.outcome_bits):
            raise ValueError("scrambler_indices and outcome_bits must both have N entries")
        if any(not 0 <= index < CLIFFORD_GROUP_ORDER for index in self.scrambler_indices):
            raise ValueError("scrambler index outside the Clifford table")
        if any(bit not in (0, 1) for bit in self.outcome_bits):
            raise ValueError("outcome bits must be 0 or 1")
        return self

    @property
    def num_qubits(self) -> int:
        return len(self.outcome_bits)


class SnapshotDataset(BaseModel):
    """Columnar store of snapshots sharing one protocol and master seed.

    Rows are kept sorted by shot index.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: ProtocolSpec
    master_seed: int
    shot_indices: np.ndarray
    scramblers: np.ndarray
    outcomes: np.ndarray
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_arrays(self) -> "SnapshotDataset":
        n = self.spec.num_qubits
        shots = self.shot_indices.shape[0]
        if self.shot_indices.ndim != 1:
            raise ValueError("shot_indices must be one-dimensional")
        if self.scramblers.shape != (shots, n) or self.outcomes.shape != (shots, n):
            raise ValueError("scramblers and outcomes must be shots x N")
        if shots and (self.scramblers.max() >= CLIFFORD_GROUP_ORDER or self.outcomes.max() > 1):
            raise ValueError("scrambler index or outcome bit out of range")
        if shots > 1 and np.any(np.diff(self.shot_indices) <= 0):
            raise ValueError("shot indices must be strictly increasing")
        return self

    @classmethod
    def from_arrays(
        cls,
        spec: ProtocolSpec,
        master_seed: int,
        shot_indices: np.ndarray,
        scramblers: np.ndarray,
        outcomes: np.ndarray,
        metadata: Dict[str, Any],
    ) -> "SnapshotDataset":
        order = np.argsort(np.asarray(shot_indices), kind="stable")
        return cls(
            spec=spec,
            master_seed=master_seed,
            shot_indices=np.asarray(shot_indices, dtype=np.int64)[order],
            scramblers=np.asarray(scramblers, dtype=np.uint8)[order],
            outcomes=np.asarray(outcomes, dtype=np.uint8)[order],
            metadata=dict(metadata),
        )

    @classmethod
    def from_snapshots(
        cls, spec: ProtocolSpec, master_seed: int, snapshots: Sequence[Snapshot], metadata: Dict[str, Any]
    ) -> "SnapshotDataset":
        n = spec.num_qubits
        return cls.from_arrays(
            spec,
            master_seed,
            np.array([snap.shot_index for snap in snapshots], dtype=np.int64),
            np.array([snap.scrambler_indices for snap in snapshots], dtype=np.uint8).reshape(-1, n),
            np.array([snap.outcome_bits for snap in snapshots], dtype=np.uint8).reshape(-1, n),
            metadata,
        )

    @property
    def protocol_id(self) -> str:
        return self.spec.protocol_id

    @property
    def num_qubits(self) -> int:
        return self.spec.num_qubits

    @property
    def shots(self) -> int:
        return int(self.shot_indices.shape[0])

    def snapshot(self, row: int) -> Snapshot:
        index = int(self.shot_indices[row])
        return Snapshot(
            shot_index=index,
            shot_seed=shot_seed(self.master_seed, index),
            protocol_id=self.protocol_id,
            scrambler_indices=tuple(int(v) for v in self.scramblers[row]),
            outcome_bits=tuple(int(v) for v in self.outcomes[row]),
        )

    def snapshots(self) -> List[Snapshot]:
        return [self.snapshot(row) for row in range(self.shots)]

    def same_records(self, other: "SnapshotDataset") -> bool:
        return (
            self.protocol_id == other.protocol_id
            and self.master_seed == other.master_seed
            and np.array_equal(self.shot_indices, other.shot_indices)
            and np.array_equal(self.scramblers, other.scramblers)
            and np.array_equal(self.outcomes, other.outcomes)
        )
