"""Exception hierarchy for shadowmancer.

All domain errors derive from :class:`ShadowsError` so callers (the CLI in
particular) can map whole families of failures onto exit codes.
"""

from typing import Any, Dict, Optional


class ShadowsError(Exception):
    """Base class for every error raised by the package."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if not self.details:
            return self.message
        extra = ", ".join(f"{key}={value}" for key, value in sorted(self.details.items()))
        return f"{self.message} ({extra})"


class PauliAlgebraError(ShadowsError):
    """Malformed Pauli text or operands of different size."""


class NonHermitianProductError(PauliAlgebraError):
    """A Pauli product picked up a phase of +i or -i."""

    def __init__(self, phase_exponent: int, message: Optional[str] = None) -> None:
        super().__init__(
            message or "Product of Pauli strings is anti-Hermitian",
            {"phase": "+i" if phase_exponent % 4 == 1 else "-i"},
        )
        self.phase_exponent = phase_exponent % 4


class CoveringError(ShadowsError):
    """Invalid qubit partition or lattice parameters."""


class ProtocolError(ShadowsError):
    """Inconsistent protocol definition."""


class ChannelError(ShadowsError):
    """Invalid eigenvalue table, entanglement feature or channel parameter."""


class UnlearnableOperatorError(ShadowsError):
    """The operator touches a block pattern whose channel eigenvalue is zero."""


class OracleError(ShadowsError):
    """Brute-force oracle input rejected (non-orthonormal basis, block too large)."""


class SimulationGuardError(ShadowsError):
    """A simulation request exceeds a backend guard (memory, Clifford-only)."""


class DatasetError(ShadowsError):
    """Snapshot dataset malformed or inconsistent."""


class EstimationError(ShadowsError):
    """Estimator called with unusable input (empty dataset, bad group count)."""


class ConfigError(ShadowsError):
    """Campaign or settings configuration could not be parsed or validated."""


class ValidationFailedError(ShadowsError):
    """One or more validation checks failed."""
