from typing import Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .errors import PauliAlgebraError
from .pauli_string import PauliString


class OperatorSet(BaseModel):
    """Labelled collection of Pauli observables on a common register."""

    model_config = ConfigDict(frozen=True)

    operators: Tuple[PauliString, ...]
    labels: Tuple[str, ...]

    @model_validator(mode="after")
    def _check_consistency(self) -> "OperatorSet":
        if len(self.operators) != len(self.labels):
            raise ValueError("operators and labels must have the same length")
        sizes = {op.num_qubits for op in self.operators}
        if len(sizes) > 1:
            raise ValueError("all operators must share num_qubits")
        return self

    @classmethod
    def from_operators(cls, operators: Sequence[PauliString], labels: Optional[Sequence[str]] = None) -> "OperatorSet":
        if labels is None:
            labels = [op.label() for op in operators]
        try:
            return cls(operators=tuple(operators), labels=tuple(labels))
        except ValueError as exc:
            raise PauliAlgebraError("Inconsistent operator set", {"reason": str(exc).splitlines()[0]}) from exc

    @classmethod
    def from_labels(cls, texts: Sequence[str]) -> "OperatorSet":
        return cls.from_operators([PauliString.from_label(text) for text in texts])

    @property
    def num_qubits(self) -> Optional[int]:
        return self.operators[0].num_qubits if self.operators else None

    def __len__(self) -> int:
        return len(self.operators)

    def items(self) -> Iterator[Tuple[str, PauliString]]:
        return iter(zip(self.labels, self.operators))

    def merged(self, other: "OperatorSet") -> "OperatorSet":
        return OperatorSet.from_operators(
            list(self.operators) + list(other.operators), list(self.labels) + list(other.labels)
        )

    def filtered(self, keep: List[bool]) -> "OperatorSet":
        pairs = [(label, op) for (label, op), flag in zip(self.items(), keep) if flag]
        return OperatorSet.from_operators([op for _, op in pairs], [label for label, _ in pairs])
