from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

GATE_ARITY = {"H": 1, "S": 1, "CLIFFORD": 1, "CZ": 2, "CX": 2, "CPHASE": 2}


class Gate(BaseModel):
    """One gate; ``param`` is the CPhase angle or the Clifford table index."""

    model_config = ConfigDict(frozen=True)

    name: str
    qubits: Tuple[int, ...]
    param: Optional[float] = None

    @model_validator(mode="after")
    def _check_arity(self) -> "Gate":
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.name}")
        if len(self.qubits) != GATE_ARITY[self.name]:
            raise ValueError(f"{self.name} acts on {GATE_ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if self.name in ("CPHASE", "CLIFFORD") and self.param is None:
            raise ValueError(f"{self.name} needs a parameter")
        return self

    def shifted(self, sites: Tuple[int, ...]) -> "Gate":
        """Relabel local qubit ``j`` as ``sites[j]``."""
        return Gate(name=self.name, qubits=tuple(sites[q] for q in self.qubits), param=self.param)


class Circuit(BaseModel):
    """Time-ordered gate list on ``num_qubits`` qubits followed by computational readout."""

    model_config = ConfigDict(frozen=True)

    num_qubits: int
    gates: Tuple[Gate, ...] = ()

    @model_validator(mode="after")
    def _check_range(self) -> "Circuit":
        for gate in self.gates:
            if any(not 0 <= q < self.num_qubits for q in gate.qubits):
                raise ValueError(f"gate {gate.name} outside register of {self.num_qubits}")
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        return Circuit(num_qubits=self.num_qubits, gates=self.gates + other.gates)
