import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import jsonschema
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .data_format import DataFormat
from .errors import ConfigError


class StateConfig(BaseModel):
    """Preset state the campaign samples from."""

    model_config = ConfigDict(extra="forbid")

    preset: str = "computational-zero"
    num_qubits: int = Field(ge=1)
    seed: int = 0


class CoveringConfig(BaseModel):
    """Covering constructor name plus its parameters."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["singletons", "dimers", "n-mer", "honeycomb", "blocks"] = "dimers"
    parity: Literal["even", "odd"] = "even"
    periodic: bool = False
    block_size: int = Field(default=2, ge=1)
    offset: int = Field(default=0, ge=0)
    size: Optional[int] = Field(default=None, ge=1)
    orientation: int = Field(default=0, ge=0, le=2)
    blocks: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "CoveringConfig":
        if self.kind == "honeycomb" and self.size is None:
            raise ValueError("honeycomb coverings need size")
        if self.kind == "blocks" and not self.blocks:
            raise ValueError("explicit coverings need blocks")
        return self

    def required_qubits(self) -> Optional[int]:
        """Register size implied by the covering alone, if any."""
        if self.kind == "honeycomb":
            assert self.size is not None
            return 2 * self.size * self.size
        if self.kind == "blocks":
            assert self.blocks is not None
            return sum(len(block) for block in self.blocks)
        return None


class ProtocolConfig(BaseModel):
    """One measurement protocol: covering, basis family and its parameters."""

    model_config = ConfigDict(extra="forbid")

    covering: CoveringConfig = Field(default_factory=CoveringConfig)
    family: str = "bell"
    phi: Optional[float] = None
    delta: Optional[float] = None
    scramble_mode: Literal["all_qubits", "one_per_block"] = "all_qubits"
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_angle(self) -> "ProtocolConfig":
        if self.phi is not None and self.delta is not None:
            raise ValueError("give phi or delta, not both")
        return self


class OperatorConfig(BaseModel):
    """Explicit Pauli labels and/or a generated family of operators."""

    model_config = ConfigDict(extra="forbid")

    labels: List[str] = Field(default_factory=list)
    generator: Optional[Literal["contiguous", "plaquettes", "bonds"]] = None
    lengths: List[int] = Field(default_factory=list)
    letters: str = "Z"
    periodic: bool = False
    points: int = Field(default=1, ge=1)
    size: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_source(self) -> "OperatorConfig":
        if not self.labels and self.generator is None:
            raise ValueError("operators need labels or a generator")
        if self.generator == "contiguous" and not self.lengths:
            raise ValueError("contiguous strings need lengths")
        return self


class SweepConfig(BaseModel):
    """Axis and grid of a norm sweep."""

    model_config = ConfigDict(extra="forbid")

    axis: Literal["k", "delta", "n"] = "k"
    values: List[float] = Field(default_factory=list)
    deltas: List[float] = Field(default_factory=list)
    weight: int = Field(default=2, ge=1)
    block_size: int = Field(default=3, ge=1)
    empirical: bool = False
    shots: int = Field(default=20000, ge=1)


class CampaignConfig(BaseModel):
    """A complete campaign as read from a single JSON document."""

    model_config = ConfigDict(extra="forbid")

    name: str = "custom"
    state: StateConfig
    protocols: List[ProtocolConfig] = Field(min_length=1)
    operators: OperatorConfig
    shots: int = Field(default=10000, ge=1)
    epsilon: float = Field(default=0.1, gt=0)
    master_seed: int = Field(default=0, ge=0)
    groups: int = Field(default=1, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    sweep: Optional[SweepConfig] = None

    @model_validator(mode="after")
    def _check_sizes(self) -> "CampaignConfig":
        n = self.state.num_qubits
        for index, protocol in enumerate(self.protocols):
            required = protocol.covering.required_qubits()
            if required is not None and required != n:
                raise ValueError(f"protocol {index} covers {required} qubits but the state has {n}")
        for label in self.operators.labels:
            letters = label.lstrip("+-")
            if len(letters) != n:
                raise ValueError(f"operator {label} does not act on {n} qubits")
        return self

    @property
    def data_format(self) -> DataFormat:
        return DataFormat.from_string(self.format)

    @classmethod
    def json_schema(cls) -> Dict[str, Any]:
        return cls.model_json_schema()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CampaignConfig":
        """Schema check with jsonschema, then model validation."""
        try:
            jsonschema.validate(instance=data, schema=cls.json_schema())
        except jsonschema.ValidationError as exc:
            location = "/".join(str(part) for part in exc.absolute_path) or "<root>"
            raise ConfigError(
                "Campaign config does not match the schema", {"at": location, "reason": exc.message}
            ) from exc
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            first = exc.errors()[0]
            raise ConfigError(
                "Campaign config is inconsistent",
                {"at": "/".join(str(part) for part in first["loc"]) or "<root>", "reason": first["msg"]},
            ) from exc

    @classmethod
    def from_json(cls, text: str) -> "CampaignConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("Campaign config is not valid JSON", {"line": exc.lineno}) from exc
        if not isinstance(data, dict):
            raise ConfigError("Campaign config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CampaignConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("Campaign config could not be read", {"path": str(path)}) from exc
        return cls.from_json(text)

    def with_overrides(self, **overrides: Any) -> "CampaignConfig":
        """Copy with top-level fields replaced; ``None`` values are ignored."""
        data = self.model_dump(mode="json")
        data.update({key: value for key, value in overrides.items() if value is not None})
        return CampaignConfig.from_dict(data)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude_none=True), indent=2, sort_keys=True) + "\n"
