from abc import ABC, abstractmethod

import numpy as np

from ..model.protocol_spec import ProtocolSpec
from ..model.quantum_state import QuantumState


class StateBackendInterface(ABC):
    """Samples computational-basis outcomes of scrambled block measurements."""

    name: str = "abstract"

    @abstractmethod
    def supports(self, state: QuantumState, spec: ProtocolSpec) -> bool:
        """True when this backend can simulate ``spec`` on ``state``."""
        pass

    @abstractmethod
    def sample_outcomes(
        self,
        state: QuantumState,
        spec: ProtocolSpec,
        scramblers: np.ndarray,
        shot_seeds: np.ndarray,
    ) -> np.ndarray:
        """
        Outcome bits for a chunk of shots.

        Args:
            state: Input state, read only
            spec: Protocol whose block circuits follow the scramblers
            scramblers: ``(S, N)`` Clifford table indices
            shot_seeds: ``(S,)`` per-shot seeds; outcome draws use counters ``N..2N-1``

        Returns:
            ``(S, N)`` uint8 array, column ``q`` is the bit read on qubit ``q``
        """
        pass
