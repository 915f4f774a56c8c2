import json
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from .errors import ChannelError
from .protocol_spec import ProtocolSpec

EIGENVALUE_TOLERANCE = 1e-12
ACTIVE_MARK = "•"
IDLE_MARK = "∘"

PatternLike = Union[int, str, Sequence[bool]]


def pattern_string(mask: int, size: int) -> str:
    return "".join(ACTIVE_MARK if (mask >> j) & 1 else IDLE_MARK for j in range(size))


def pattern_mask(pattern: PatternLike, size: int) -> int:
    """Accept a bitmask, a string of marks (``•``/``1``/``x`` active) or a bool sequence."""
    if isinstance(pattern, int):
        mask = pattern
    elif isinstance(pattern, str):
        if len(pattern) != size:
            raise ChannelError("Pattern length does not match block size", {"pattern": pattern, "size": size})
        mask = 0
        for j, mark in enumerate(pattern):
            if mark in (ACTIVE_MARK, "1", "x", "X", "*"):
                mask |= 1 << j
            elif mark not in (IDLE_MARK, "0", "o", "."):
                raise ChannelError("Unknown pattern mark", {"mark": mark})
    else:
        flags = list(pattern)
        if len(flags) != size:
            raise ChannelError("Pattern length does not match block size", {"size": size})
        mask = sum(1 << j for j, flag in enumerate(flags) if flag)
    if not 0 <= mask < (1 << size):
        raise ChannelError("Pattern outside block", {"mask": mask, "size": size})
    return mask


def rational_annotation(value: float, max_denominator: int = 10**6) -> Optional[str]:
    """``"p/q"`` when ``value`` is a small-denominator rational to float precision."""
    approx = Fraction(value).limit_denominator(max_denominator)
    if abs(float(approx) - value) > 1e-15:
        return None
    return f"{approx.numerator}/{approx.denominator}"


class ChannelEigenvalues(BaseModel):
    """Shadow-channel eigenvalues of one block, indexed by identity/non-identity pattern."""

    model_config = ConfigDict(frozen=True)

    block_size: int
    values: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_values(self) -> "ChannelEigenvalues":
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        if len(self.values) != 1 << self.block_size:
            raise ValueError("one eigenvalue per pattern is required")
        if abs(self.values[0] - 1.0) > EIGENVALUE_TOLERANCE:
            raise ValueError("identity pattern must have eigenvalue 1")
        for value in self.values:
            if value < -EIGENVALUE_TOLERANCE or value > 1.0 + EIGENVALUE_TOLERANCE:
                raise ValueError(f"eigenvalue {value!r} outside [0, 1]")
        return self

    @classmethod
    def from_values(cls, block_size: int, values: Sequence[float]) -> "ChannelEigenvalues":
        try:
            return cls(block_size=block_size, values=tuple(float(v) for v in values))
        except ValueError as exc:
            raise ChannelError("Invalid eigenvalue table", {"reason": str(exc).splitlines()[0]}) from exc

    def value(self, pattern: PatternLike) -> float:
        return self.values[pattern_mask(pattern, self.block_size)]

    def is_zero(self, pattern: PatternLike, threshold: float = EIGENVALUE_TOLERANCE) -> bool:
        return self.value(pattern) < threshold

    def tensor(self, other: "ChannelEigenvalues") -> "ChannelEigenvalues":
        """Table of the two blocks measured side by side; ``other`` occupies the trailing sites."""
        values = []
        for mask in range(1 << (self.block_size + other.block_size)):
            low = mask & ((1 << self.block_size) - 1)
            high = mask >> self.block_size
            values.append(self.values[low] * other.values[high])
        return ChannelEigenvalues.from_values(self.block_size + other.block_size, values)

    def to_dict(self) -> Dict[str, Dict[str, object]]:
        table: Dict[str, Dict[str, object]] = {}
        for mask, value in enumerate(self.values):
            entry: Dict[str, object] = {"value": value}
            rational = rational_annotation(value)
            if rational is not None:
                entry["rational"] = rational
            table[pattern_string(mask, self.block_size)] = entry
        return table

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


class ShadowChannel(BaseModel):
    """Eigenvalue tables for every block of a protocol."""

    model_config = ConfigDict(frozen=True)

    spec: ProtocolSpec
    blocks: Tuple[ChannelEigenvalues, ...]

    @model_validator(mode="after")
    def _check_blocks(self) -> "ShadowChannel":
        if len(self.blocks) != len(self.spec.covering.blocks):
            raise ValueError("one eigenvalue table per block is required")
        for table, block in zip(self.blocks, self.spec.covering.blocks):
            if table.block_size != len(block):
                raise ValueError("eigenvalue table does not match block size")
        return self

    @property
    def protocol_id(self) -> str:
        return self.spec.protocol_id

    def with_block(self, index: int, table: ChannelEigenvalues) -> "ShadowChannel":
        """Copy with one block table replaced."""
        blocks = list(self.blocks)
        blocks[index] = table
        return ShadowChannel(spec=self.spec, blocks=tuple(blocks))

    def to_dict(self) -> Dict[str, object]:
        return {
            "protocol_id": self.protocol_id,
            "blocks": [
                {"sites": list(block), "basis": basis.key(), "eigenvalues": table.to_dict()}
                for block, basis, table in zip(self.spec.covering.blocks, self.spec.bases, self.blocks)
            ],
        }
