import numpy as np

from ...domain.interface.state_backend_interface import StateBackendInterface
from ...domain.model.errors import SimulationGuardError
from ...domain.model.protocol_spec import ProtocolSpec
from ...domain.model.quantum_state import QuantumState, StateBackend
from ...domain.service.seeding import uniform_draws


class MixedBackend(StateBackendInterface):
    """The maximally mixed state is invariant under every unitary, so outcomes are fair coins."""

    name = "mixed"

    def supports(self, state: QuantumState, spec: ProtocolSpec) -> bool:
        return state.backend == StateBackend.MAXIMALLY_MIXED

    def sample_outcomes(
        self,
        state: QuantumState,
        spec: ProtocolSpec,
        scramblers: np.ndarray,
        shot_seeds: np.ndarray,
    ) -> np.ndarray:
        if state.backend != StateBackend.MAXIMALLY_MIXED:
            raise SimulationGuardError(
                "Mixed backend needs the maximally mixed state", {"backend": state.backend.value}
            )
        n = state.num_qubits
        draws = uniform_draws(shot_seeds, np.arange(n, 2 * n, dtype=np.uint64))
        return (draws >= 0.5).astype(np.uint8)
