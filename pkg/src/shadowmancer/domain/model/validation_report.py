from typing import Any, Dict, Iterator, List, Optional

import polars as pl
from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of a single validation check."""

    name: str
    passed: bool
    detail: str = ""
    measured: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    duration: float = 0.0


class ValidationReport(BaseModel):
    """Ordered results of a validation run."""

    level: str
    checks: List[CheckResult] = Field(default_factory=list)

    def add_check(self, check: CheckResult) -> None:
        self.checks.append(check)

    def get_check(self, name: str) -> Optional[CheckResult]:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def all_passed(self) -> bool:
        """True for an empty report."""
        return all(check.passed for check in self.checks)

    def failed_names(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def iter_checks(self) -> Iterator[CheckResult]:
        return iter(self.checks)

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "check": [check.name for check in self.checks],
                "status": ["PASS" if check.passed else "FAIL" for check in self.checks],
                "measured": [check.measured for check in self.checks],
                "expected": [check.expected for check in self.checks],
                "tolerance": [check.tolerance for check in self.checks],
                "detail": [check.detail for check in self.checks],
            },
            schema={
                "check": pl.Utf8,
                "status": pl.Utf8,
                "measured": pl.Float64,
                "expected": pl.Float64,
                "tolerance": pl.Float64,
                "detail": pl.Utf8,
            },
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "checks": [check.model_dump() for check in self.checks],
            "total_checks": len(self.checks),
            "all_passed": self.all_passed(),
        }
