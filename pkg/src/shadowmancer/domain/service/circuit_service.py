"""Basis-change circuits preceding computational readout, and their dense / symplectic forms."""

import math
from typing import List, Sequence

import numpy as np

from ..model.circuit import Circuit, Gate
from ..model.errors import SimulationGuardError
from ..model.pauli_string import PauliString
from ..model.protocol_spec import BasisFamily, BlockBasis, ProtocolSpec
from .clifford_group import apply_gate, clifford_table, inverse_indices

DENSE_UNITARY_QUBIT_LIMIT = 12

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
_PHASE = np.array([[1, 0], [0, 1j]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def block_circuit(basis: BlockBasis) -> Circuit:
    """Canonical basis change for one block, on local qubits ``0..n-1``."""
    if basis.family == BasisFamily.PAULI_LOCAL:
        return Circuit(num_qubits=1)
    if basis.family == BasisFamily.BELL:
        gates = [Gate(name="CZ", qubits=(0, 1)), Gate(name="H", qubits=(0,)), Gate(name="H", qubits=(1,))]
        return Circuit(num_qubits=2, gates=tuple(gates))
    if basis.family == BasisFamily.TUNABLE_PHASE:
        gates = [
            Gate(name="CPHASE", qubits=(0, 1), param=basis.phi),
            Gate(name="H", qubits=(0,)),
            Gate(name="H", qubits=(1,)),
        ]
        return Circuit(num_qubits=2, gates=tuple(gates))
    n = basis.size
    # Inverse of the fan-out preparation H(0), CX(0,1), ..., CX(n-2,n-1)
    gates = [Gate(name="CX", qubits=(j, j + 1)) for j in reversed(range(n - 1))]
    gates.append(Gate(name="H", qubits=(0,)))
    return Circuit(num_qubits=n, gates=tuple(gates))


def measurement_circuit(spec: ProtocolSpec, scrambler_indices: Sequence[int]) -> Circuit:
    """Full-register circuit of one shot: scramblers, then every block circuit."""
    if len(scrambler_indices) != spec.num_qubits:
        raise SimulationGuardError(
            "Scrambler list does not match register", {"expected": spec.num_qubits, "got": len(scrambler_indices)}
        )
    gates: List[Gate] = [
        Gate(name="CLIFFORD", qubits=(site,), param=float(index))
        for site, index in enumerate(scrambler_indices)
        if index != 0
    ]
    for block, basis in zip(spec.covering.blocks, spec.bases):
        gates.extend(gate.shifted(block) for gate in block_circuit(basis).gates)
    return Circuit(num_qubits=spec.num_qubits, gates=tuple(gates))


def inverse_circuit(circuit: Circuit) -> Circuit:
    gates: List[Gate] = []
    inverses = inverse_indices()
    for gate in reversed(circuit.gates):
        if gate.name == "S":
            gates.extend([gate, gate, gate])
        elif gate.name == "CPHASE":
            assert gate.param is not None
            gates.append(Gate(name="CPHASE", qubits=gate.qubits, param=-gate.param))
        elif gate.name == "CLIFFORD":
            assert gate.param is not None
            gates.append(Gate(name="CLIFFORD", qubits=gate.qubits, param=float(inverses[int(gate.param)])))
        else:
            gates.append(gate)
    return Circuit(num_qubits=circuit.num_qubits, gates=tuple(gates))


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.name == "H":
        return _HADAMARD
    if gate.name == "S":
        return _PHASE
    if gate.name == "CZ":
        return _CZ
    if gate.name == "CX":
        return _CX
    assert gate.param is not None
    if gate.name == "CPHASE":
        return np.diag([1, 1, 1, np.exp(1j * gate.param)]).astype(complex)
    return np.asarray(clifford_table().unitaries[int(gate.param)])


def apply_matrix(tensor: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], offset: int = 0) -> np.ndarray:
    """Apply ``matrix`` to the qubit axes ``offset + q`` of ``tensor``; leading axes are batch axes."""
    k = len(qubits)
    operator = np.asarray(matrix).reshape((2,) * (2 * k))
    axes = [offset + q for q in qubits]
    result = np.tensordot(operator, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(result, list(range(k)), axes)


def evolve(tensor: np.ndarray, circuit: Circuit, offset: int = 0) -> np.ndarray:
    for gate in circuit.gates:
        tensor = apply_matrix(tensor, gate_matrix(gate), gate.qubits, offset)
    return tensor


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > DENSE_UNITARY_QUBIT_LIMIT:
        raise SimulationGuardError("Dense unitary requested for a large circuit", {"num_qubits": n})
    dim = 1 << n
    columns = np.eye(dim, dtype=complex).reshape((dim,) + (2,) * n)
    return evolve(columns, circuit, offset=1).reshape(dim, dim).T


def basis_states(basis: BlockBasis) -> np.ndarray:
    """Measured basis as rows: row ``b`` is C^dagger|b>."""
    return circuit_unitary(block_circuit(basis)).conj()


def propagate_pauli(pauli: PauliString, circuit: Circuit) -> PauliString:
    """Heisenberg image U P U^dagger for a Clifford circuit U."""
    if pauli.num_qubits != circuit.num_qubits:
        raise SimulationGuardError(
            "Operator and circuit sizes differ", {"operator": pauli.num_qubits, "circuit": circuit.num_qubits}
        )
    x = np.array(pauli.x_bits, dtype=np.uint8)
    z = np.array(pauli.z_bits, dtype=np.uint8)
    r = np.array(0 if pauli.sign == 1 else 1, dtype=np.uint8)
    for gate in circuit.gates:
        apply_gate(x, z, r, gate)
    return PauliString(
        num_qubits=pauli.num_qubits,
        x_bits=tuple(int(b) for b in x),
        z_bits=tuple(int(b) for b in z),
        sign=-1 if int(r) else 1,
    )


def measured_stabilizers(circuit: Circuit) -> List[PauliString]:
    """Observables read out by the circuit: C^dagger Z_q C for every qubit."""
    backwards = inverse_circuit(circuit)
    n = circuit.num_qubits
    return [propagate_pauli(PauliString.from_sparse(n, {q: "Z"}), backwards) for q in range(n)]
