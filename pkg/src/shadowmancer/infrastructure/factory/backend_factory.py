from typing import Callable, Dict, List, Optional

from ...domain.interface.state_backend_interface import StateBackendInterface
from ...domain.model.errors import SimulationGuardError
from ...domain.model.protocol_spec import ProtocolSpec
from ...domain.model.quantum_state import DENSE_QUBIT_LIMIT, QuantumState, StateBackend
from ..backend.dense_backend import DenseBackend
from ..backend.mixed_backend import MixedBackend
from ..backend.stabilizer_backend import StabilizerBackend


class BackendFactory:
    """Registry of simulation backends and the dispatch rule between them."""

    def __init__(self, dense_max_qubits: int = DENSE_QUBIT_LIMIT):
        self.dense_max_qubits = dense_max_qubits
        self._backend_types: Dict[str, Callable[[], StateBackendInterface]] = {}
        self._initialize_backends()

    def _initialize_backends(self) -> None:
        self._backend_types["stabilizer"] = StabilizerBackend
        self._backend_types["dense"] = lambda: DenseBackend(self.dense_max_qubits)
        self._backend_types["mixed"] = MixedBackend

    def available(self) -> List[str]:
        return sorted(self._backend_types)

    def create_backend(self, name: str) -> Optional[StateBackendInterface]:
        if name not in self._backend_types:
            return None
        return self._backend_types[name]()

    def register_backend(self, name: str, constructor: Callable[[], StateBackendInterface]) -> None:
        self._backend_types[name] = constructor

    def select(self, state: QuantumState, spec: ProtocolSpec, forced: Optional[str] = None) -> StateBackendInterface:
        """Backend for ``spec`` on ``state``.

        The maximally mixed state always goes to the coin backend. Stabilizer
        states with a Clifford protocol use the tableau; anything else falls back
        to state vectors within the dense guard.
        """
        if state.num_qubits != spec.num_qubits:
            raise SimulationGuardError(
                "State and protocol sizes differ", {"state": state.num_qubits, "protocol": spec.num_qubits}
            )
        if forced is not None:
            backend = self.create_backend(forced)
            if backend is None:
                raise SimulationGuardError("Unknown backend", {"backend": forced})
            if not backend.supports(state, spec):
                raise SimulationGuardError(
                    "Backend cannot simulate this protocol on this state",
                    {"backend": forced, "protocol": spec.protocol_id, "clifford": spec.is_clifford},
                )
            return backend
        if state.backend == StateBackend.MAXIMALLY_MIXED:
            return self._backend_types["mixed"]()
        if state.backend == StateBackend.STABILIZER and spec.is_clifford:
            return self._backend_types["stabilizer"]()
        dense = self._backend_types["dense"]()
        if not dense.supports(state, spec):
            raise SimulationGuardError(
                "Non-Clifford protocol or dense state exceeds the dense guard",
                {"num_qubits": state.num_qubits, "limit": self.dense_max_qubits},
            )
        return dense
