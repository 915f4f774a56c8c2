from __future__ import annotations

from typing import Any

import numpy as np
import pytest

from shadowmancer.application import validation_suite
from shadowmancer.application.sampler import sample_dataset
from shadowmancer.application.validation_suite import (
    TUNABLE_DELTA,
    ValidationSuite,
    run_validation,
    scaled_channel_provider,
)
from shadowmancer.domain.model.channel_eigenvalues import ShadowChannel
from shadowmancer.domain.model.config_manager import ConfigManager
from shadowmancer.domain.model.errors import ChannelError
from shadowmancer.domain.model.protocol_spec import BasisFamily, ProtocolSpec
from shadowmancer.domain.model.quantum_state import QuantumState
from shadowmancer.domain.model.snapshot import SnapshotDataset
from shadowmancer.domain.model.validation_report import ValidationReport
from shadowmancer.domain.service import estimation_service
from shadowmancer.domain.service.channel_service import phi_from_delta
from shadowmancer.domain.service.circuit_service import measurement_circuit
from shadowmancer.infrastructure.backend.dense_backend import born_distribution
from shadowmancer.infrastructure.logging.shadow_logger import ShadowLogger


@pytest.fixture(scope="module")  # type: ignore[misc]
def fast_report() -> ValidationReport:
    return run_validation("fast")


class TestFastLevel:
    def test_all_checks_pass(self, fast_report: ValidationReport) -> None:
        assert fast_report.all_passed(), fast_report.to_frame()
        assert len(fast_report.checks) == len(ValidationSuite().fast_checks())

    def test_checks_are_named_and_timed(self, fast_report: ValidationReport) -> None:
        oracle = fast_report.get_check("bell-pauli-oracle")

        assert oracle is not None
        assert oracle.measured is not None and oracle.measured <= 1e-12
        assert all(check.duration >= 0.0 for check in fast_report.iter_checks())

    def test_frame_and_dict(self, fast_report: ValidationReport) -> None:
        frame = fast_report.to_frame()

        assert frame.columns == ["check", "status", "measured", "expected", "tolerance", "detail"]
        assert set(frame["status"].to_list()) == {"PASS"}
        assert fast_report.to_dict()["total_checks"] == frame.height

    def test_each_check_is_a_stage(self) -> None:
        ValidationSuite().run("fast")

        names = [entry["stage"]["stage_name"] for entry in ShadowLogger.get_instance().get_stage_history()]
        assert names[0] == "check:bell-pauli-oracle"
        assert names[-1] == "check:determinism"


class TestTamperedTables:
    def test_scaled_bell_tables_fail_by_name(self) -> None:
        report = ValidationSuite(scaled_channel_provider(BasisFamily.BELL, 1.2)).run("fast")

        assert report.failed_names() == ["bell-pauli-oracle"]

    def test_scaled_tunable_tables_fail_norm_checks(self) -> None:
        report = ValidationSuite(scaled_channel_provider(BasisFamily.TUNABLE_PHASE, 0.9)).run("fast")

        assert "tunable-oracle" in report.failed_names()
        assert "tunable-norm" in report.failed_names()
        assert "bell-pauli-oracle" not in report.failed_names()

    def test_errors_become_failures(self) -> None:
        def broken(spec: ProtocolSpec) -> ShadowChannel:
            raise ChannelError("no tables", {"protocol": spec.protocol_id})

        report = ValidationSuite(broken).run("fast")
        check = report.get_check("ghz-feature-map")

        assert check is not None and not check.passed
        assert check.detail.startswith("ChannelError")
        scaling = report.get_check("scaling-table")
        assert scaling is not None and scaling.passed


class TestLevels:
    def test_unknown_level(self) -> None:
        with pytest.raises(ValueError):
            ValidationSuite().run("bogus")

    @pytest.mark.slow
    @pytest.mark.statistical
    def test_full_level(self) -> None:
        report = ValidationSuite().run("full")

        assert report.all_passed(), report.to_frame()
        assert report.get_check("sampler-born-rule") is not None


class TestSampledCases:
    def test_sampler_cases_cover_every_family(self) -> None:
        families = {spec.bases[0].family for _, _, spec in ValidationSuite().sampler_cases()}

        assert families == set(BasisFamily)

    @pytest.mark.parametrize("name", ["bell", "pauli"])
    def test_scrambled_marginal_is_uniform(self, name: str) -> None:
        suite = ValidationSuite()
        state, spec = next((state, spec) for case, state, spec in suite.sampler_cases() if case == name)

        assert np.allclose(suite._outcome_distribution(state, spec), 0.25)

    def test_assignment_rows_follow_combo_order(self) -> None:
        suite = ValidationSuite()
        state, spec = next((state, spec) for case, state, spec in suite.sampler_cases() if case == "pauli")

        table = suite._assignment_table(state, spec)
        row = int(estimation_service.combo_indices(np.array([[5, 17]]))[0])

        assert table.shape == (24 * 24, 4)
        assert np.allclose(table[row], born_distribution(state, measurement_circuit(spec, [5, 17])))
        assert np.allclose(table.sum(axis=1), 1.0)

    def test_second_moment_cases_include_small_delta(self) -> None:
        cases = ValidationSuite().second_moment_cases()
        phis = {spec.bases[0].phi for spec, _ in cases if spec.bases[0].family == BasisFamily.TUNABLE_PHASE}

        assert phis == {phi_from_delta(0.1), phi_from_delta(TUNABLE_DELTA)}
        assert {spec.bases[0].family for spec, _ in cases} == set(BasisFamily)

    def test_determinism_uses_fast_shots(self) -> None:
        ConfigManager().set_setting("validation.fast_shots", 300)
        suite = ValidationSuite()

        result = suite.check_determinism()

        assert suite.fast_shots == 300
        assert ValidationSuite(fast_shots=128).fast_shots == 128
        assert result.passed
        assert "300 shots" in result.detail

    @pytest.mark.slow
    @pytest.mark.statistical
    def test_sampler_born_rule_passes(self) -> None:
        result = ValidationSuite().check_sampler_born_rule()

        assert result.passed, result.detail

    @pytest.mark.slow
    @pytest.mark.statistical
    def test_outcomes_ignoring_the_state_fail(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def coin_flips(
            state: QuantumState, spec: ProtocolSpec, shots: int, master_seed: int, **kwargs: Any
        ) -> SnapshotDataset:
            dataset = sample_dataset(state, spec, shots, master_seed, **kwargs)
            rng = np.random.default_rng(master_seed)
            outcomes = rng.integers(0, 2, size=dataset.outcomes.shape).astype(np.uint8)
            return dataset.model_copy(update={"outcomes": outcomes})

        monkeypatch.setattr(validation_suite, "sample_dataset", coin_flips)

        result = ValidationSuite().check_sampler_born_rule()

        assert not result.passed
        assert "bell" in result.detail
