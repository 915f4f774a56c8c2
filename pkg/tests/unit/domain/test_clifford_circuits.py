from __future__ import annotations

import numpy as np
import pytest

from shadowmancer.domain.model.circuit import Circuit, Gate
from shadowmancer.domain.model.entanglement_feature import subsystem_purity
from shadowmancer.domain.model.errors import SimulationGuardError
from shadowmancer.domain.model.pauli_string import PauliString
from shadowmancer.domain.model.protocol_spec import BasisFamily, BlockBasis
from shadowmancer.domain.service import seeding
from shadowmancer.domain.service.circuit_service import (
    basis_states,
    block_circuit,
    circuit_unitary,
    inverse_circuit,
    measured_stabilizers,
    measurement_circuit,
    propagate_pauli,
)
from shadowmancer.domain.service.clifford_group import CODE_MATRICES, GROUP_ORDER, clifford_table, inverse_indices

from tests.unit.protocols import bell_chain


def proportional_to_identity(matrix: np.ndarray) -> bool:
    phase = matrix[0, 0]
    return bool(abs(abs(phase) - 1.0) < 1e-9 and np.allclose(matrix, phase * np.eye(matrix.shape[0])))


class TestCliffordTable:
    def test_order_and_identity_first(self) -> None:
        table = clifford_table()

        assert len(table) == GROUP_ORDER
        assert table.words[0] == ""
        assert np.allclose(table.unitaries[0], np.eye(2))

    def test_images_match_conjugation(self) -> None:
        table = clifford_table()

        for index, unitary in enumerate(table.unitaries):
            for code in (1, 2, 3):
                conjugated = unitary @ CODE_MATRICES[code] @ unitary.conj().T
                sign = -1.0 if table.image_signs[index, code] else 1.0
                assert np.allclose(conjugated, sign * CODE_MATRICES[table.image_codes[index, code]])

    def test_images_permute_non_identity_paulis(self) -> None:
        codes = clifford_table().image_codes

        assert all(sorted(row[1:]) == [1, 2, 3] for row in codes.tolist())
        assert all(row[0] == 0 for row in codes.tolist())

    def test_inverse_indices(self) -> None:
        unitaries = clifford_table().unitaries
        inverses = inverse_indices()

        for index in range(GROUP_ORDER):
            assert proportional_to_identity(unitaries[inverses[index]] @ unitaries[index])


class TestPropagation:
    @pytest.mark.parametrize(
        "gate, before, after",
        [
            (Gate(name="H", qubits=(0,)), "XI", "+ZI"),
            (Gate(name="H", qubits=(0,)), "YI", "-YI"),
            (Gate(name="S", qubits=(0,)), "XI", "+YI"),
            (Gate(name="CX", qubits=(0, 1)), "XI", "+XX"),
            (Gate(name="CX", qubits=(0, 1)), "IZ", "+ZZ"),
            (Gate(name="CZ", qubits=(0, 1)), "XI", "+XZ"),
        ],
    )
    def test_single_gate_rules(self, gate: Gate, before: str, after: str) -> None:
        circuit = Circuit(num_qubits=2, gates=(gate,))

        assert propagate_pauli(PauliString.from_label(before), circuit).label() == after

    def test_matches_dense_conjugation(self) -> None:
        circuit = measurement_circuit(bell_chain(4), [3, 17, 0, 9])
        unitary = circuit_unitary(circuit)

        for text in ("ZIZI", "XYIZ", "-YYXX", "IXZI"):
            pauli = PauliString.from_label(text)
            image = propagate_pauli(pauli, circuit)
            assert np.allclose(unitary @ pauli.to_matrix() @ unitary.conj().T, image.to_matrix())

    def test_size_mismatch(self) -> None:
        with pytest.raises(SimulationGuardError):
            propagate_pauli(PauliString.from_label("ZZ"), Circuit(num_qubits=3))


class TestBlockCircuits:
    @pytest.mark.parametrize(
        "basis",
        [
            BlockBasis(family=BasisFamily.BELL, size=2),
            BlockBasis(family=BasisFamily.GHZ, size=3),
            BlockBasis(family=BasisFamily.TUNABLE_PHASE, size=2, phi=0.7),
        ],
    )
    def test_inverse_circuit_undoes_circuit(self, basis: BlockBasis) -> None:
        circuit = block_circuit(basis)

        assert proportional_to_identity(circuit_unitary(circuit.then(inverse_circuit(circuit))))

    def test_bell_basis_states_are_maximally_entangled(self) -> None:
        states = basis_states(BlockBasis(family=BasisFamily.BELL, size=2))

        assert np.allclose(states.conj() @ states.T, np.eye(4))
        assert all(subsystem_purity(state, 0b01, 2) == pytest.approx(0.5) for state in states)

    def test_ghz_basis_states_are_ghz_like(self) -> None:
        states = basis_states(BlockBasis(family=BasisFamily.GHZ, size=3))

        for state in states:
            assert subsystem_purity(state, 0b001, 3) == pytest.approx(0.5)
            assert subsystem_purity(state, 0b011, 3) == pytest.approx(0.5)

    def test_measured_stabilizers_fix_first_basis_state(self) -> None:
        basis = BlockBasis(family=BasisFamily.BELL, size=2)
        state = basis_states(basis)[0]
        stabilizers = measured_stabilizers(block_circuit(basis))

        assert sorted(s.label(with_sign=False) for s in stabilizers) == ["XZ", "ZX"]
        for stabilizer in stabilizers:
            assert np.allclose(stabilizer.apply_to(state), state)

    def test_measurement_circuit_skips_identity_scramblers(self) -> None:
        circuit = measurement_circuit(bell_chain(4), [0, 5, 0, 0])

        assert [gate.name for gate in circuit.gates].count("CLIFFORD") == 1

    def test_measurement_circuit_length_checked(self) -> None:
        with pytest.raises(SimulationGuardError):
            measurement_circuit(bell_chain(4), [0, 0])

    def test_unitary_guard(self) -> None:
        with pytest.raises(SimulationGuardError):
            circuit_unitary(Circuit(num_qubits=13))


class TestSeeding:
    def test_scalar_and_vector_seeds_agree(self) -> None:
        vector = seeding.shot_seeds(42, np.arange(5))

        assert [int(seed) for seed in vector] == [seeding.shot_seed(42, index) for index in range(5)]

    def test_scalar_and_vector_draws_agree(self) -> None:
        seed = seeding.shot_seed(7, 3)
        draws = seeding.uniform_draws(np.array([seed], dtype=np.uint64), np.arange(6))

        assert draws.shape == (1, 6)
        assert draws[0].tolist() == [seeding.uniform_draw(seed, counter) for counter in range(6)]

    def test_master_seeds_differ(self) -> None:
        assert seeding.shot_seed(0, 0) != seeding.shot_seed(1, 0)

    def test_draws_are_uniform(self) -> None:
        draws = seeding.uniform_draws(seeding.shot_seeds(11, np.arange(100_000)), np.arange(2))

        assert np.all((draws >= 0.0) & (draws < 1.0))
        assert float(np.mean(draws)) == pytest.approx(0.5, abs=0.005)
