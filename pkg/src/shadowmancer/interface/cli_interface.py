"""Command-line front end: ``norm``, ``sweep``, ``estimate``, ``validate`` and ``preset list``."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import polars as pl
from pydantic import ValidationError as PydanticValidationError
from rich import print as rprint
from rich.console import Console
from rich.table import Table

from ..application import campaign_runner
from ..application.campaign_presets import CAMPAIGN_PRESETS, campaign_preset
from ..application.state_presets import PRESETS
from ..domain.model.campaign_config import CampaignConfig
from ..domain.model.data_format import DataFormat
from ..domain.model.errors import ConfigError, ShadowsError, SimulationGuardError, ValidationFailedError
from ..domain.model.version_info import VersionInfo
from ..domain.service.data_converter_service import format_float, missing_marker
from ..infrastructure.logging.shadow_logger import ShadowLogger
from ..infrastructure.storage.dataset_io import write_dataset

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_VALIDATION = 4

DEFAULT_PRESET = "string-1d"


class CLI:
    """Argument parsing, campaign loading and table output."""

    def __init__(self, console: Optional[Console] = None) -> None:
        self.console = console or Console()
        self.logger = ShadowLogger.get_instance()

    def print_success(self, message: str) -> None:
        rprint(f"[bold green]✓[/bold green] {message}")

    def print_error(self, message: str) -> None:
        rprint(f"[bold red]✗[/bold red] {message}", file=sys.stderr)

    def print_info(self, message: str) -> None:
        rprint(f"[bold blue]i[/bold blue] {message}")

    def create_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="shadowmancer",
            description="Classical-shadows simulator and estimator for locally entangled measurements",
        )
        parser.add_argument("--version", action="version", version=str(VersionInfo.get_version()))
        parser.add_argument("-v", "--verbose", action="count", default=0, help="More log output (-vv for debug)")

        campaign = argparse.ArgumentParser(add_help=False)
        source = campaign.add_mutually_exclusive_group()
        source.add_argument("--config", help="Campaign JSON document", type=str)
        source.add_argument("--preset", help=f"Campaign preset (default {DEFAULT_PRESET})", type=str)
        campaign.add_argument("--seed", help="Master seed", type=int)
        campaign.add_argument("--shots", help="Shots per protocol", type=int)
        campaign.add_argument("--workers", help="Sampling threads (default SHADOWS_WORKERS)", type=int)
        campaign.add_argument("--out", help="Report path; the budget table goes next to it", type=str)
        campaign.add_argument("--format", choices=["csv", "json"], help="Report format")
        campaign.add_argument("--echo-config", action="store_true", help="Print the effective campaign config")

        subparsers = parser.add_subparsers(dest="command", help="Available commands")

        subparsers.add_parser("norm", parents=[campaign], help="Analytic shadow norms and sample budgets")

        sweep_parser = subparsers.add_parser("sweep", parents=[campaign], help="Norm curves along k, delta or n")
        sweep_parser.add_argument("--axis", choices=["k", "delta", "n"], help="Sweep axis")

        estimate_parser = subparsers.add_parser("estimate", parents=[campaign], help="Sample and estimate operators")
        estimate_parser.add_argument("--dataset-dir", help="Also write one JSON-lines dataset per protocol", type=str)

        validate_parser = subparsers.add_parser("validate", help="Run the self-check suite")
        validate_parser.add_argument("--level", choices=["fast", "full"], default="fast")
        validate_parser.add_argument("--workers", type=int)
        validate_parser.add_argument("--out", type=str)
        validate_parser.add_argument("--format", choices=["csv", "json"], default="csv")

        preset_parser = subparsers.add_parser("preset", help="State and campaign presets")
        preset_subparsers = preset_parser.add_subparsers(dest="preset_command")
        preset_subparsers.add_parser("list", help="List presets")
        return parser

    # campaign plumbing

    def load_config(self, args: argparse.Namespace) -> CampaignConfig:
        if args.config:
            config = CampaignConfig.from_file(args.config)
        else:
            config = campaign_preset(args.preset or DEFAULT_PRESET)
        return config.with_overrides(
            master_seed=args.seed, shots=args.shots, workers=args.workers, output=args.out, format=args.format
        )

    def render_table(self, frame: pl.DataFrame, title: str) -> None:
        table = Table(title=title)
        for name in frame.columns:
            table.add_column(name, style="cyan" if name in ("label", "check", "protocol", "curve") else None)
        floats = {name for name, dtype in zip(frame.columns, frame.dtypes) if dtype in (pl.Float32, pl.Float64)}
        for row in frame.iter_rows(named=True):
            cells = [
                format_float(value, missing_marker(name))
                if name in floats
                else (missing_marker(name) if value is None else str(value))
                for name, value in row.items()
            ]
            table.add_row(*cells)
        self.console.print(table)

    def emit(self, frame: pl.DataFrame, budget: Optional[pl.DataFrame], config: CampaignConfig, title: str) -> None:
        if config.output is None:
            self.render_table(frame, title)
            if budget is not None:
                self.render_table(budget, "budget")
            return
        data_format = config.data_format
        path = campaign_runner.write_report(frame, config.output, data_format)
        self.print_success(f"report written to {path}")
        if budget is not None:
            budget_target = campaign_runner.companion_path(path, "budget")
            budget_path = campaign_runner.write_report(budget, budget_target, data_format)
            self.print_success(f"budget written to {budget_path}")

    def echo(self, config: CampaignConfig, args: argparse.Namespace) -> None:
        if args.echo_config:
            sys.stdout.write(config.to_json())

    # commands

    def norm_command(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        self.echo(config, args)
        norms, budget = campaign_runner.cmd_norm(config)
        self.emit(norms, budget, config, f"shadow norms: {config.name}")
        return EXIT_OK

    def sweep_command(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        self.echo(config, args)
        result = campaign_runner.cmd_sweep(config, args.axis)
        self.emit(result.to_frame(), None, config, f"sweep over {result.axis}")
        return EXIT_OK

    def estimate_command(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        self.echo(config, args)
        report, budget, datasets = campaign_runner.cmd_estimate(config)
        if args.dataset_dir:
            directory = Path(args.dataset_dir)
            for index, dataset in enumerate(datasets):
                path = write_dataset(dataset, directory / f"{config.name}.{index}.jsonl")
                self.print_info(f"dataset written to {path}")
        self.emit(report, budget, config, f"estimates: {config.name}")
        return EXIT_OK

    def validate_command(self, args: argparse.Namespace) -> int:
        report = campaign_runner.cmd_validate(args.level, args.workers)
        frame = report.to_frame()
        if args.out:
            path = campaign_runner.write_report(frame, args.out, DataFormat.from_string(args.format))
            self.print_success(f"validation report written to {path}")
        else:
            self.render_table(frame, f"validation ({args.level})")
        if not report.all_passed():
            raise ValidationFailedError("Validation failed", {"checks": ", ".join(report.failed_names())})
        return EXIT_OK

    def preset_command(self, args: argparse.Namespace) -> int:
        table = Table(title="presets")
        table.add_column("kind", style="cyan")
        table.add_column("name", style="green")
        table.add_column("description")
        for name, description in PRESETS.items():
            table.add_row("state", name, description)
        for name, (description, _) in CAMPAIGN_PRESETS.items():
            table.add_row("campaign", name, description)
        self.console.print(table)
        return EXIT_OK

    def run(self, args: Optional[List[str]] = None) -> int:
        parser = self.create_parser()
        parsed_args = parser.parse_args(args if args is not None else sys.argv[1:])
        if not parsed_args.command:
            parser.print_help()
            return EXIT_OK
        if parsed_args.verbose:
            self.logger.initialize(log_level="DEBUG" if parsed_args.verbose > 1 else "INFO")

        handlers = {
            "norm": self.norm_command,
            "sweep": self.sweep_command,
            "estimate": self.estimate_command,
            "validate": self.validate_command,
            "preset": self.preset_command,
        }
        try:
            return handlers[parsed_args.command](parsed_args)
        except ConfigError as error:
            self.print_error(f"configuration error: {error}")
            return EXIT_CONFIG
        except PydanticValidationError as error:
            self.print_error(f"configuration error: {error.error_count()} invalid field(s)")
            self.logger.debug("rejected configuration", {"errors": error.errors(include_url=False)})
            return EXIT_CONFIG
        except SimulationGuardError as error:
            self.print_error(f"simulation guard: {error}")
            return EXIT_GUARD
        except ValidationFailedError as error:
            self.print_error(str(error))
            return EXIT_VALIDATION
        except ShadowsError as error:
            self.print_error(str(error))
            return EXIT_ERROR


def main(args: Optional[List[str]] = None) -> int:
    return CLI().run(args)


if __name__ == "__main__":
    sys.exit(main())
