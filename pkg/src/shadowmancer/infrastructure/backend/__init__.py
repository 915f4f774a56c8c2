from .dense_backend import DenseBackend, born_distribution, born_oracle, expectation_value
from .mixed_backend import MixedBackend
from .stabilizer_backend import StabilizerBackend, stabilizer_expectation, zero_tableau

__all__ = [
    "DenseBackend",
    "MixedBackend",
    "StabilizerBackend",
    "born_distribution",
    "born_oracle",
    "expectation_value",
    "stabilizer_expectation",
    "zero_tableau",
]
