from typing import Optional

from pydantic import BaseModel, ConfigDict

from .shadow_norm import UNLEARNABLE

STATUS_OK = "OK"


class ShotValue(BaseModel):
    """Single-shot estimator value for one observable."""

    model_config = ConfigDict(frozen=True)

    value: float


class Estimate(BaseModel):
    """Aggregated shot values.

    ``dropped_shots`` counts the tail left out of the median-of-means groups.
    """

    model_config = ConfigDict(frozen=True)

    mean: float
    std_error: float
    median_of_means: float
    group_count: int
    shots_used: int
    dropped_shots: int = 0


class EstimateRow(BaseModel):
    """Report line of a set-level estimation."""

    model_config = ConfigDict(frozen=True)

    label: str
    status: str = STATUS_OK
    protocol_id: Optional[str] = None
    estimate: Optional[Estimate] = None
    norm_sq: Optional[float] = None
    exact: Optional[float] = None

    @classmethod
    def unlearnable(cls, label: str) -> "EstimateRow":
        return cls(label=label, status=UNLEARNABLE)

    @property
    def is_unlearnable(self) -> bool:
        return self.status == UNLEARNABLE
