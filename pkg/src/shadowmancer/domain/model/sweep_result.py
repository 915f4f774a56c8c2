from typing import List, Optional

import polars as pl
from pydantic import BaseModel, ConfigDict, Field


class SweepRow(BaseModel):
    """One point of a norm curve."""

    model_config = ConfigDict(frozen=True)

    axis_value: float
    curve: str
    analytic: Optional[float] = None
    approximation: Optional[float] = None
    empirical: Optional[float] = None
    empirical_error: Optional[float] = None
    hit_frequency: Optional[float] = None
    budget: Optional[int] = None


class SweepResult(BaseModel):
    """Rows of a sweep over weight, deformation or block size.

    ``analytic`` is None where the operator is unlearnable.
    """

    axis: str
    epsilon: float
    rows: List[SweepRow] = Field(default_factory=list)

    def add_row(self, row: SweepRow) -> None:
        self.rows.append(row)

    def curves(self) -> List[str]:
        seen: List[str] = []
        for row in self.rows:
            if row.curve not in seen:
                seen.append(row.curve)
        return seen

    def analytic_column(self, curve: str) -> List[Optional[float]]:
        return [row.analytic for row in self.rows if row.curve == curve]

    def to_frame(self) -> pl.DataFrame:
        schema = {
            self.axis: pl.Float64,
            "curve": pl.Utf8,
            "norm_sq": pl.Float64,
            "approximation": pl.Float64,
            "empirical": pl.Float64,
            "empirical_error": pl.Float64,
            "hit_frequency": pl.Float64,
            "budget": pl.Int64,
        }
        data = {
            self.axis: [row.axis_value for row in self.rows],
            "curve": [row.curve for row in self.rows],
            "norm_sq": [row.analytic for row in self.rows],
            "approximation": [row.approximation for row in self.rows],
            "empirical": [row.empirical for row in self.rows],
            "empirical_error": [row.empirical_error for row in self.rows],
            "hit_frequency": [row.hit_frequency for row in self.rows],
            "budget": [row.budget for row in self.rows],
        }
        return pl.DataFrame(data, schema=schema)
