from __future__ import annotations

import numpy as np
import pytest

from shadowmancer.application import estimator
from shadowmancer.application.sampler import sample_dataset
from shadowmancer.application.state_presets import prepare_preset
from shadowmancer.domain.model.errors import EstimationError, UnlearnableOperatorError
from shadowmancer.domain.model.estimate import ShotValue
from shadowmancer.domain.model.operator_set import OperatorSet
from shadowmancer.domain.model.pauli_string import PauliString
from shadowmancer.domain.model.protocol_spec import ProtocolSpec
from shadowmancer.domain.model.quantum_state import QuantumState
from shadowmancer.domain.model.snapshot import SnapshotDataset
from shadowmancer.domain.service.channel_service import protocol_channel

from tests.unit.protocols import bell_chain, ghz_chain, pauli_chain

SHOTS = 20_000
SIGMAS = 5.0


def assert_unbiased(pauli: PauliString, dataset: SnapshotDataset, exact: float) -> None:
    result = estimator.estimate(pauli, dataset)
    assert abs(result.mean - exact) <= SIGMAS * result.std_error + 1e-9, (pauli.label(), result)


@pytest.fixture(scope="module")  # type: ignore[misc]
def ghz_bell_dataset() -> SnapshotDataset:
    return sample_dataset(prepare_preset("ghz", 4), bell_chain(4), SHOTS, 101)


class TestShotValues:
    @pytest.mark.parametrize("label", ["XXXX", "ZZII", "IIZZ", "-YYXX", "-XXYY"])
    def test_bell_chain_on_ghz(self, ghz_bell_dataset: SnapshotDataset, label: str) -> None:
        assert_unbiased(PauliString.from_label(label), ghz_bell_dataset, 1.0)

    def test_zero_expectation(self, ghz_bell_dataset: SnapshotDataset) -> None:
        assert_unbiased(PauliString.from_label("XXZZ"), ghz_bell_dataset, 0.0)

    def test_tunable_chain_on_ghz(self, ghz_state: QuantumState, tunable_spec: ProtocolSpec) -> None:
        dataset = sample_dataset(ghz_state, tunable_spec, 8000, 7)

        for label in ("ZZII", "ZIII", "XXXX"):
            pauli = PauliString.from_label(label)
            assert_unbiased(pauli, dataset, estimator.exact_expectation(ghz_state, pauli) or 0.0)

    def test_ghz_blocks(self) -> None:
        state = prepare_preset("ghz", 6)
        dataset = sample_dataset(state, ghz_chain(6), SHOTS, 3)

        for label in ("XXXXXX", "ZZIIII", "IIIZIZ"):
            assert_unbiased(PauliString.from_label(label), dataset, 1.0)

    def test_values_are_scaled_matrix_elements(self, ghz_bell_dataset: SnapshotDataset) -> None:
        values = estimator.shot_values(PauliString.from_label("ZZII"), ghz_bell_dataset)

        assert set(np.unique(values).tolist()) <= {-3.0, 0.0, 3.0}

    def test_unlearnable_operator(self, ghz_bell_dataset: SnapshotDataset) -> None:
        with pytest.raises(UnlearnableOperatorError):
            estimator.shot_values(PauliString.from_label("IZZI"), ghz_bell_dataset)

    def test_channel_of_another_protocol(self, ghz_bell_dataset: SnapshotDataset) -> None:
        with pytest.raises(EstimationError):
            estimator.shot_values(PauliString.from_label("ZZII"), ghz_bell_dataset, protocol_channel(pauli_chain(4)))

    def test_operator_size_checked(self, ghz_bell_dataset: SnapshotDataset) -> None:
        with pytest.raises(EstimationError):
            estimator.shot_values(PauliString.from_label("ZZ"), ghz_bell_dataset)

    def test_single_snapshot_value_matches_vector(self, ghz_bell_dataset: SnapshotDataset) -> None:
        pauli = PauliString.from_label("XXXX")
        values = estimator.shot_values(pauli, ghz_bell_dataset)

        for row in (0, 13):
            snapshot = ghz_bell_dataset.snapshot(row)
            assert estimator.shot_value(pauli, snapshot, ghz_bell_dataset).value == pytest.approx(values[row])

    def test_identity_snapshot_value_is_one(self, ghz_bell_dataset: SnapshotDataset) -> None:
        shot = estimator.shot_value(PauliString.identity(4), ghz_bell_dataset.snapshot(3), ghz_bell_dataset)

        assert isinstance(shot, ShotValue)
        assert shot.value == 1.0

    def test_tables_are_cached(self, ghz_bell_dataset: SnapshotDataset) -> None:
        estimator.table_cache().clear()

        estimator.shot_values(PauliString.from_label("ZZZZ"), ghz_bell_dataset)
        estimator.shot_values(PauliString.from_label("ZZZZ"), ghz_bell_dataset)

        assert estimator.table_cache().get_statistics()["hits"] >= 2


class TestMixedStateMoments:
    def test_second_moment_and_hits(self, mixed_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        dataset = sample_dataset(mixed_state, bell_spec, SHOTS, 21)
        pauli = PauliString.from_label("ZZII")

        moment = estimator.second_moment(pauli, dataset)

        assert abs(moment.mean - 3.0) <= SIGMAS * moment.std_error
        assert estimator.hit_frequency(pauli, dataset) == pytest.approx(1.0 / 3.0, abs=0.02)


class TestEstimateSet:
    def test_best_protocol_ties_go_to_first(self) -> None:
        channels = [protocol_channel(bell_chain(4)), protocol_channel(bell_chain(4))]

        best, norm = estimator.best_protocol(PauliString.from_label("ZZII"), channels)

        assert best == 0
        assert norm.value == pytest.approx(3.0)

    def test_best_protocol_prefers_smaller_norm(self) -> None:
        channels = [protocol_channel(pauli_chain(4)), protocol_channel(bell_chain(4))]

        best, _ = estimator.best_protocol(PauliString.from_label("ZZZZ"), channels)

        assert best == 1

    def test_rows_route_operators_and_mark_unlearnable(self, ghz_state: QuantumState) -> None:
        even = sample_dataset(ghz_state, bell_chain(4), 4000, 1)
        odd = sample_dataset(ghz_state, bell_chain(4, "odd"), 4000, 2)
        operators = OperatorSet.from_labels(["ZZII", "IZZI", "XIII"])

        rows = estimator.estimate_set(operators, [even, odd], groups=4, state=ghz_state)

        assert [row.label for row in rows] == ["+ZZII", "+IZZI", "+XIII"]
        assert rows[0].protocol_id == even.protocol_id
        assert rows[1].protocol_id == odd.protocol_id
        assert rows[1].exact == 1.0
        assert rows[1].estimate is not None and rows[1].estimate.group_count == 4
        assert rows[2].protocol_id == odd.protocol_id
        assert not rows[2].is_unlearnable

    def test_unlearnable_everywhere(self, ghz_state: QuantumState) -> None:
        even = sample_dataset(ghz_state, bell_chain(4), 100, 1)

        rows = estimator.estimate_set(OperatorSet.from_labels(["XIII"]), [even])

        assert rows[0].is_unlearnable
        assert rows[0].estimate is None

    def test_needs_a_dataset(self) -> None:
        with pytest.raises(EstimationError):
            estimator.estimate_set(OperatorSet.from_labels(["ZZ"]), [])

    def test_exact_expectation_skips_unsupported_states(self, mixed_state: QuantumState) -> None:
        assert estimator.exact_expectation(None, PauliString.from_label("ZZ")) is None
        assert estimator.exact_expectation(mixed_state, PauliString.from_label("ZZZZ")) == 0.0
