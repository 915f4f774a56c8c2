from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Dict

import pytest

from shadowmancer.application import campaign_runner
from shadowmancer.application.campaign_presets import campaign_preset
from shadowmancer.application.validation_suite import scaled_channel_provider
from shadowmancer.domain.model.campaign_config import CampaignConfig, ProtocolConfig
from shadowmancer.domain.model.data_format import DataFormat
from shadowmancer.domain.model.errors import ConfigError
from shadowmancer.domain.model.protocol_spec import BasisFamily
from shadowmancer.domain.service.channel_service import LN2, scaling_factor
from shadowmancer.infrastructure.logging.shadow_logger import ShadowLogger


def sweep_campaign(sweep: Dict[str, Any]) -> CampaignConfig:
    return CampaignConfig.from_dict(
        {
            "name": "sweep",
            "state": {"preset": "maximally-mixed", "num_qubits": 4},
            "protocols": [{"family": "bell"}],
            "operators": {"labels": ["ZZII"]},
            "sweep": sweep,
        }
    )


class TestBuilders:
    def test_tunable_needs_an_angle(self) -> None:
        with pytest.raises(ConfigError):
            campaign_runner.build_protocol(ProtocolConfig(family="tunable"), 4)

    def test_angle_only_for_tunable(self) -> None:
        with pytest.raises(ConfigError):
            campaign_runner.build_protocol(ProtocolConfig(family="bell", phi=1.0), 4)

    def test_delta_converts_to_angle(self) -> None:
        spec = campaign_runner.build_protocol(ProtocolConfig(family="tunable", delta=LN2), 4)

        assert spec.bases[0].phi == pytest.approx(0.0, abs=1e-7)

    def test_pauli_family_uses_singletons(self) -> None:
        spec = campaign_runner.build_protocol(ProtocolConfig(family="pauli"), 3)

        assert spec.covering.block_sizes() == [1, 1, 1]
        assert all(basis.family == BasisFamily.PAULI_LOCAL for basis in spec.bases)

    def test_generated_and_explicit_operators_merge(self) -> None:
        config = CampaignConfig.from_dict(
            {
                "state": {"num_qubits": 4},
                "protocols": [{}],
                "operators": {"labels": ["XXXX"], "generator": "contiguous", "lengths": [2]},
            }
        )

        operators = campaign_runner.build_operators(config, campaign_runner.build_protocols(config))

        assert len(operators) == 4


class TestNormCommand:
    def test_string_preset_norms(self) -> None:
        norms, budget = campaign_runner.cmd_norm(campaign_preset("string-1d"))

        assert norms.height == 27
        for weight, norm in zip(norms["weight"].to_list(), norms["norm_sq"].to_list()):
            assert norm == pytest.approx(3.0 ** (weight / 2))
        assert set(norms["cut_count"].to_list()) == {0}
        assert norms["pauli_norm_sq"].max() == pytest.approx(729.0)

        rows = budget["protocol"].to_list()
        assert rows[0].startswith("bell-even-") and rows[1].startswith("bell-odd-")
        assert rows[2:] == ["total", "pauli-baseline", "advantage"]
        assert budget["operators"].to_list()[:3] == [15, 12, 27]
        assert budget["max_norm_sq"].to_list()[4] == pytest.approx(729.0 / 54.0)
        assert budget["budget"].to_list()[4] > 1.0

    def test_honeycomb_plaquettes_all_learnable(self) -> None:
        norms, _ = campaign_runner.cmd_norm(campaign_preset("honeycomb"))

        assert norms.height == 9
        assert norms["norm_sq"].to_list() == pytest.approx([27.0] * 9)

    def test_unlearnable_operators_have_no_norm(self) -> None:
        config = CampaignConfig.from_dict(
            {"state": {"num_qubits": 4}, "protocols": [{}], "operators": {"labels": ["IZZI"]}}
        )

        norms, budget = campaign_runner.cmd_norm(config)

        assert norms["norm_sq"].to_list() == [None]
        assert budget["protocol"].to_list()[-1] == "total"
        assert budget["budget"].to_list()[-1] is None


class TestSweepCommand:
    def test_weight_axis(self) -> None:
        result = campaign_runner.cmd_sweep(sweep_campaign({"axis": "k", "values": [1, 2, 3, 4], "deltas": [0.0, LN2]}))

        assert result.curves() == ["delta=0.0", f"delta={LN2!r}"]
        assert result.analytic_column("delta=0.0") == [None, pytest.approx(3.0), None, pytest.approx(9.0)]
        assert result.analytic_column(f"delta={LN2!r}") == pytest.approx([3.0, 9.0, 27.0, 81.0])

    def test_default_weight_curves(self) -> None:
        result = campaign_runner.cmd_sweep(sweep_campaign({"axis": "k"}))
        tunable = f"delta={math.log(11.0 / 8.0)!r}"

        expected = [4.0 ** (k % 2) * 2.0**k for k in range(1, 9)]
        assert result.analytic_column(tunable) == pytest.approx(expected)
        assert result.to_frame().columns[0] == "k"

    def test_budgets_only_for_learnable_rows(self) -> None:
        result = campaign_runner.cmd_sweep(sweep_campaign({"axis": "k", "values": [1, 2], "deltas": [0.0]}))

        assert [row.budget is None for row in result.rows] == [True, False]

    def test_delta_axis(self) -> None:
        result = campaign_runner.cmd_sweep(sweep_campaign({"axis": "delta", "weight": 2}))

        values = [row.analytic for row in result.rows]
        assert len(values) == campaign_runner.DELTA_GRID_POINTS
        assert values[0] == pytest.approx(3.0)
        assert values[-1] == pytest.approx(9.0)

    def test_delta_out_of_range(self) -> None:
        with pytest.raises(ConfigError):
            campaign_runner.cmd_sweep(sweep_campaign({"axis": "delta", "values": [0.9]}))

    def test_block_size_axis_with_empirical_moments(self) -> None:
        result = campaign_runner.cmd_sweep(
            sweep_campaign({"axis": "n", "values": [1, 2, 3], "empirical": True, "shots": 4000})
        )

        for row in result.rows:
            assert row.analytic == pytest.approx(scaling_factor(int(row.axis_value)))
            assert row.empirical is not None and row.empirical_error is not None
            assert abs(row.empirical - row.analytic) <= 5.0 * row.empirical_error + 0.02

    def test_axis_override(self) -> None:
        result = campaign_runner.cmd_sweep(sweep_campaign({"axis": "k", "values": [2]}), axis="n")

        assert result.axis == "n"
        assert len(result.rows) == len(campaign_runner.DEFAULT_BLOCK_SIZES)


class TestEstimateCommand:
    @pytest.fixture  # type: ignore[misc]
    def config(self) -> CampaignConfig:
        return campaign_preset("ghz-chain").with_overrides(shots=3000, master_seed=4)

    def test_report_columns_and_reference_values(self, config: CampaignConfig) -> None:
        report, budget, datasets = campaign_runner.cmd_estimate(config)

        assert len(datasets) == 1
        assert datasets[0].master_seed == 4
        assert report["label"].to_list() == ["+XXXIII", "+ZZIIII", "+IZZIII", "+ZZZZZZ", "+XXXXXX"]
        assert report["exact"].to_list() == [0.0, 1.0, 1.0, 1.0, 1.0]
        assert set(report["status"].to_list()) == {"OK"}
        assert budget["protocol"].to_list()[-1] == "advantage"

    def test_rendering_is_reproducible(self, config: CampaignConfig) -> None:
        first, _, _ = campaign_runner.cmd_estimate(config)
        second, _, _ = campaign_runner.cmd_estimate(config, workers=3)

        for data_format in (DataFormat.CSV, DataFormat.JSON):
            assert campaign_runner.render(first, data_format) == campaign_runner.render(second, data_format)

    def test_protocols_get_consecutive_seeds(self) -> None:
        config = campaign_preset("string-1d").with_overrides(shots=50, master_seed=10)

        _, _, datasets = campaign_runner.cmd_estimate(config)

        assert [dataset.master_seed for dataset in datasets] == [10, 11]

    def test_stages_are_logged(self, config: CampaignConfig) -> None:
        campaign_runner.cmd_estimate(config)

        names = [entry["stage"]["stage_name"] for entry in ShadowLogger.get_instance().get_stage_history()]
        assert names == ["sample", "estimate"]


class TestOutput:
    def test_companion_path(self) -> None:
        assert campaign_runner.companion_path("out/report.csv", "budget") == Path("out/report.budget.csv")

    def test_write_report(self, tmp_path: Path) -> None:
        norms, _ = campaign_runner.cmd_norm(
            CampaignConfig.from_dict(
                {"state": {"num_qubits": 4}, "protocols": [{}], "operators": {"labels": ["ZZII", "IZZI"]}}
            )
        )

        target = campaign_runner.write_report(norms, tmp_path / "nested" / "norms.csv", DataFormat.CSV)

        lines = target.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "label,weight,protocol_id,cut_count,norm_sq,pauli_norm_sq"
        assert lines[2].endswith(",UNLEARNABLE,9.0")


class TestValidateCommand:
    def test_tampered_provider_reaches_the_suite(self) -> None:
        report = campaign_runner.cmd_validate("fast", channel_provider=scaled_channel_provider(BasisFamily.GHZ, 1.1))

        assert report.level == "fast"
        assert report.failed_names() == ["ghz-feature-map"]
