from __future__ import annotations

import numpy as np
import pytest

from shadowmancer.application.sampler import draw_scramblers, replay_snapshot, sample_dataset, sample_snapshot
from shadowmancer.domain.model.config_manager import ConfigManager
from shadowmancer.domain.model.errors import DatasetError, SimulationGuardError
from shadowmancer.domain.model.protocol_spec import ProtocolSpec, ScrambleMode
from shadowmancer.domain.model.quantum_state import QuantumState
from shadowmancer.domain.service.seeding import shot_seed, shot_seeds

from tests.unit.protocols import bell_chain


class TestScramblers:
    def test_indices_cover_the_group(self, bell_spec: ProtocolSpec) -> None:
        scramblers = draw_scramblers(bell_spec, shot_seeds(1, np.arange(5000)))

        assert scramblers.shape == (5000, 4)
        assert set(np.unique(scramblers).tolist()) == set(range(24))

    def test_one_per_block_leaves_partner_sites_alone(self) -> None:
        spec = bell_chain(4, mode=ScrambleMode.ONE_PER_BLOCK)

        scramblers = draw_scramblers(spec, shot_seeds(1, np.arange(500)))

        assert not scramblers[:, [1, 3]].any()
        assert scramblers[:, [0, 2]].any()


class TestSampleDataset:
    def test_worker_count_does_not_change_records(self, ghz_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        single = sample_dataset(ghz_state, bell_spec, 700, 5, workers=1, chunk_size=64)
        pooled = sample_dataset(ghz_state, bell_spec, 700, 5, workers=4, chunk_size=64)

        assert single.same_records(pooled)

    def test_dense_backend_is_worker_independent(self, ghz_state: QuantumState, tunable_spec: ProtocolSpec) -> None:
        single = sample_dataset(ghz_state, tunable_spec, 300, 2, workers=1, chunk_size=50)
        pooled = sample_dataset(ghz_state, tunable_spec, 300, 2, workers=3, chunk_size=50)

        assert single.metadata["backend"] == "dense"
        assert single.same_records(pooled)

    def test_environment_sets_default_workers(
        self, monkeypatch: pytest.MonkeyPatch, ghz_state: QuantumState, bell_spec: ProtocolSpec
    ) -> None:
        baseline = sample_dataset(ghz_state, bell_spec, 200, 9, chunk_size=32)
        monkeypatch.setenv("SHADOWS_WORKERS", "4")

        assert sample_dataset(ghz_state, bell_spec, 200, 9, chunk_size=32).same_records(baseline)

    def test_chunk_size_from_settings(self, ghz_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        baseline = sample_dataset(ghz_state, bell_spec, 100, 3)
        ConfigManager().set_setting("sampling.chunk_size", 7)

        assert sample_dataset(ghz_state, bell_spec, 100, 3, workers=2).same_records(baseline)

    def test_replay_matches_dataset_rows(self, ghz_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        dataset = sample_dataset(ghz_state, bell_spec, 120, 11)

        for row in (0, 57, 119):
            assert replay_snapshot(ghz_state, bell_spec, 11, row) == dataset.snapshot(row)

    def test_single_snapshot(self, ghz_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        seed = shot_seed(4, 0)
        snapshot = sample_snapshot(ghz_state, bell_spec, seed)

        assert snapshot.shot_seed == seed
        assert snapshot.protocol_id == bell_spec.protocol_id
        assert snapshot == sample_snapshot(ghz_state, bell_spec, seed)

    def test_metadata_records_preset_and_backend(self, ghz_state: QuantumState) -> None:
        dataset = sample_dataset(ghz_state, bell_chain(4), 50, 1)

        assert dataset.shots == 50
        assert dataset.metadata["preset"] == "ghz"
        assert dataset.metadata["backend"] == "stabilizer"

    def test_mixed_state_uses_coin_backend(self, mixed_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        assert sample_dataset(mixed_state, bell_spec, 10, 0).metadata["backend"] == "mixed"

    def test_rejects_empty_dataset(self, ghz_state: QuantumState, bell_spec: ProtocolSpec) -> None:
        with pytest.raises(DatasetError):
            sample_dataset(ghz_state, bell_spec, 0, 1)

    def test_rejects_size_mismatch(self, ghz_state: QuantumState) -> None:
        with pytest.raises(SimulationGuardError):
            sample_dataset(ghz_state, bell_chain(6), 10, 1)
