import json
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import CoveringError, PauliAlgebraError
from .pauli_string import PauliString


class Covering(BaseModel):
    """Partition of the register into disjoint blocks measured jointly."""

    model_config = ConfigDict(frozen=True)

    num_qubits: int
    blocks: Tuple[Tuple[int, ...], ...]

    @field_validator("blocks", mode="before")
    @classmethod
    def _sort_blocks(cls, value: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(int(site) for site in block)) for block in value)

    @model_validator(mode="after")
    def _check_partition(self) -> "Covering":
        if any(len(block) == 0 for block in self.blocks):
            raise ValueError("blocks must be non-empty")
        flat = sorted(site for block in self.blocks for site in block)
        if flat != list(range(self.num_qubits)):
            raise ValueError(f"blocks do not partition 0..{self.num_qubits - 1}")
        return self

    @classmethod
    def from_blocks(cls, num_qubits: int, blocks: Sequence[Sequence[int]]) -> "Covering":
        """Validated constructor raising :class:`CoveringError` instead of a pydantic error."""
        try:
            return cls(num_qubits=num_qubits, blocks=blocks)
        except ValueError as exc:
            raise CoveringError("Invalid covering", {"reason": str(exc).splitlines()[0]}) from exc

    def block_sizes(self) -> List[int]:
        return [len(block) for block in self.blocks]

    def site_to_block(self) -> Dict[int, int]:
        return {site: index for index, block in enumerate(self.blocks) for site in block}

    def patterns(self, pauli: PauliString) -> List[int]:
        """Per block, a bitmask of the non-identity sites (bit j = j-th site of the block)."""
        self._check_size(pauli)
        active = pauli.support()
        masks = []
        for block in self.blocks:
            mask = 0
            for position, site in enumerate(block):
                if site in active:
                    mask |= 1 << position
            masks.append(mask)
        return masks

    def cut_count(self, pauli: PauliString) -> int:
        """Number of blocks the support intersects partially."""
        count = 0
        for block, mask in zip(self.blocks, self.patterns(pauli)):
            if mask not in (0, (1 << len(block)) - 1):
                count += 1
        return count

    def is_compatible(self, pauli: PauliString) -> bool:
        return self.cut_count(pauli) == 0

    def compatible_operator_count(self) -> int:
        """Number of Pauli strings (signs ignored) with zero cut count."""
        total = 1
        for size in self.block_sizes():
            total *= 3**size + 1
        return total

    def to_json(self) -> str:
        return json.dumps([list(block) for block in self.blocks])

    @classmethod
    def from_json(cls, text: str) -> "Covering":
        try:
            blocks = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CoveringError("Covering JSON could not be parsed") from exc
        num_qubits = sum(len(block) for block in blocks)
        return cls.from_blocks(num_qubits, blocks)

    def _check_size(self, pauli: PauliString) -> None:
        if pauli.num_qubits != self.num_qubits:
            raise PauliAlgebraError(
                "Operator and covering act on different registers",
                {"operator": pauli.num_qubits, "covering": self.num_qubits},
            )
