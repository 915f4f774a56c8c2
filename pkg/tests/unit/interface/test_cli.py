from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import polars as pl
import pytest
from rich.console import Console

from shadowmancer.application import campaign_runner
from shadowmancer.domain.model.campaign_config import CampaignConfig
from shadowmancer.domain.model.validation_report import CheckResult, ValidationReport
from shadowmancer.interface.cli_interface import (
    CLI,
    EXIT_CONFIG,
    EXIT_GUARD,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
)


def wide_cli() -> CLI:
    return CLI(console=Console(width=200))


def write_config(path: Path, data: Dict[str, Any]) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def failing_validation(level: str = "fast", workers: Optional[int] = None) -> ValidationReport:
    report = ValidationReport(level=level)
    report.add_check(CheckResult(name="bell-pauli-oracle", passed=False, measured=0.2, tolerance=1e-12))
    return report


def rejected_norm(config: CampaignConfig) -> Tuple[pl.DataFrame, pl.DataFrame]:
    CampaignConfig.model_validate({**config.model_dump(mode="json"), "shots": 0})
    raise AssertionError("shots=0 accepted")


class TestParser:
    def test_subcommands(self) -> None:
        parser = CLI().create_parser()

        args = parser.parse_args(["sweep", "--preset", "string-1d", "--axis", "delta", "--seed", "3"])

        assert args.command == "sweep"
        assert args.axis == "delta"
        assert args.seed == 3

    def test_config_and_preset_are_exclusive(self) -> None:
        with pytest.raises(SystemExit):
            CLI().create_parser().parse_args(["norm", "--preset", "ghz-chain", "--config", "c.json"])

    def test_no_command_prints_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main([]) == EXIT_OK
        assert "shadowmancer" in capsys.readouterr().out


class TestCommands:
    def test_preset_list(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert wide_cli().run(["preset", "list"]) == EXIT_OK

        out = capsys.readouterr().out
        assert "ghz" in out
        assert "honeycomb" in out

    def test_norm_writes_report_and_budget(self, tmp_path: Path) -> None:
        target = tmp_path / "norms.csv"

        assert main(["norm", "--preset", "string-1d", "--out", str(target)]) == EXIT_OK

        assert target.read_text(encoding="utf-8").startswith("label,weight,protocol_id")
        budget = tmp_path / "norms.budget.csv"
        assert budget.read_text(encoding="utf-8").splitlines()[0].startswith("protocol,")

    def test_norm_json_format(self, tmp_path: Path) -> None:
        target = tmp_path / "norms.json"

        assert main(["norm", "--preset", "ghz-chain", "--out", str(target), "--format", "json"]) == EXIT_OK

        records = json.loads(target.read_text(encoding="utf-8"))
        assert [record["label"] for record in records][:2] == ["+XXXIII", "+ZZIIII"]

    def test_sweep_table_on_console(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert wide_cli().run(["sweep", "--preset", "string-1d", "--axis", "n"]) == EXIT_OK

        assert "sweep over n" in capsys.readouterr().out

    def test_estimate_with_datasets(self, tmp_path: Path) -> None:
        report = tmp_path / "estimates.csv"
        datasets = tmp_path / "datasets"

        code = main(
            [
                "estimate",
                "--preset",
                "ghz-chain",
                "--shots",
                "200",
                "--seed",
                "5",
                "--out",
                str(report),
                "--dataset-dir",
                str(datasets),
            ]
        )

        assert code == EXIT_OK
        assert (datasets / "ghz-chain.0.jsonl").exists()
        assert report.read_text(encoding="utf-8").count("\n") == 6

    def test_echo_config(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        main(["norm", "--preset", "ghz-chain", "--seed", "12", "--echo-config", "--out", str(tmp_path / "n.csv")])

        out = capsys.readouterr().out
        echoed = json.loads(out[: out.rindex("}") + 1])
        assert echoed["master_seed"] == 12
        assert echoed["name"] == "ghz-chain"


class TestExitCodes:
    def test_missing_config_file(self, tmp_path: Path) -> None:
        assert main(["norm", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG

    def test_invalid_config(self, tmp_path: Path) -> None:
        path = write_config(tmp_path / "bad.json", {"state": {"num_qubits": 4}, "protocols": [{"family": "kagome"}]})

        assert main(["norm", "--config", path]) == EXIT_CONFIG

    def test_unknown_preset(self) -> None:
        assert main(["norm", "--preset", "kagome"]) == EXIT_CONFIG

    def test_pydantic_rejection_is_a_config_error(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        monkeypatch.setattr(campaign_runner, "cmd_norm", rejected_norm)

        assert main(["norm", "--preset", "string-1d"]) == EXIT_CONFIG
        assert "configuration error" in capsys.readouterr().err

    def test_zero_shots_override(self) -> None:
        assert main(["norm", "--preset", "string-1d", "--shots", "0"]) == EXIT_CONFIG

    def test_dense_guard(self, tmp_path: Path) -> None:
        path = write_config(
            tmp_path / "large.json",
            {
                "state": {"preset": "random-dense", "num_qubits": 25},
                "protocols": [{"family": "pauli"}],
                "operators": {"labels": ["Z" + "I" * 24]},
                "shots": 10,
            },
        )

        assert main(["estimate", "--config", path]) == EXIT_GUARD

    def test_validation_failure(self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
        monkeypatch.setattr(campaign_runner, "cmd_validate", failing_validation)

        assert main(["validate"]) == EXIT_VALIDATION
        assert "bell-pauli-oracle" in capsys.readouterr().err

    def test_validation_report_file(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        monkeypatch.setattr(campaign_runner, "cmd_validate", failing_validation)
        target = tmp_path / "validation.json"

        assert main(["validate", "--out", str(target), "--format", "json"]) == EXIT_VALIDATION

        records = json.loads(target.read_text(encoding="utf-8"))
        assert records[0]["check"] == "bell-pauli-oracle"
        assert records[0]["status"] == "FAIL"
