"""Campaign execution behind the ``norm``, ``sweep``, ``estimate`` and ``validate`` subcommands."""

import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import polars as pl

from ..domain.model.campaign_config import CampaignConfig, CoveringConfig, ProtocolConfig, SweepConfig
from ..domain.model.covering import Covering
from ..domain.model.data_format import DataFormat
from ..domain.model.errors import ConfigError, ProtocolError
from ..domain.model.estimate import EstimateRow
from ..domain.model.operator_set import OperatorSet
from ..domain.model.pauli_string import PauliString
from ..domain.model.protocol_spec import BasisFamily, ProtocolSpec, ScrambleMode
from ..domain.model.quantum_state import QuantumState
from ..domain.model.shadow_norm import ShadowNorm
from ..domain.model.snapshot import SnapshotDataset
from ..domain.model.sweep_result import SweepResult, SweepRow
from ..domain.model.validation_report import ValidationReport
from ..domain.service import estimation_service, lattice_service
from ..domain.service.channel_service import (
    ASYMPTOTIC_SCALING,
    LN2,
    pauli_baseline_budget,
    phi_from_delta,
    protocol_channel,
    sample_budget,
    scaling_factor,
    shadow_norm_sq,
    shadow_norm_sq_small_delta,
)
from ..domain.service.data_converter_service import DataFormatConverter
from ..infrastructure.logging.shadow_logger import ShadowLogger
from . import estimator
from .sampler import sample_dataset
from .state_presets import prepare_preset
from .validation_suite import ChannelProvider, run_validation

DEFAULT_DELTAS = (0.0, 0.1, math.log(11.0 / 8.0), LN2)
DEFAULT_WEIGHTS = tuple(float(k) for k in range(1, 9))
DEFAULT_BLOCK_SIZES = tuple(float(n) for n in range(1, 9))
DELTA_GRID_POINTS = 8


# construction


def build_covering(config: CoveringConfig, num_qubits: int) -> Covering:
    if config.kind == "singletons":
        return Covering.from_blocks(num_qubits, [[site] for site in range(num_qubits)])
    if config.kind == "dimers":
        return lattice_service.dimer_chain(num_qubits, config.parity, config.periodic)
    if config.kind == "n-mer":
        return lattice_service.n_mer_chain(num_qubits, config.block_size, config.offset)
    if config.kind == "honeycomb":
        assert config.size is not None
        return lattice_service.honeycomb(config.size, config.orientation)[0]
    assert config.blocks is not None
    return Covering.from_blocks(num_qubits, config.blocks)


def build_protocol(config: ProtocolConfig, num_qubits: int) -> ProtocolSpec:
    covering = build_covering(config.covering, num_qubits)
    family = BasisFamily.from_string(config.family)
    phi = config.phi
    if family == BasisFamily.TUNABLE_PHASE:
        if phi is None and config.delta is None:
            raise ConfigError("Tunable protocols need phi or delta", {"family": config.family})
        if phi is None:
            assert config.delta is not None
            phi = phi_from_delta(config.delta)
    elif phi is not None or config.delta is not None:
        raise ConfigError("phi and delta apply to the tunable family only", {"family": config.family})
    if family == BasisFamily.PAULI_LOCAL:
        covering = Covering.from_blocks(num_qubits, [[site] for site in range(num_qubits)])
    return ProtocolSpec.uniform(covering, family, phi, ScrambleMode(config.scramble_mode), config.label)


def build_protocols(config: CampaignConfig) -> List[ProtocolSpec]:
    return [build_protocol(protocol, config.state.num_qubits) for protocol in config.protocols]


def build_operators(config: CampaignConfig, specs: Sequence[ProtocolSpec]) -> OperatorSet:
    n = config.state.num_qubits
    source = config.operators
    operators = OperatorSet.from_labels(source.labels) if source.labels else None
    generated: Optional[OperatorSet] = None
    if source.generator == "contiguous":
        for length in source.lengths:
            batch = lattice_service.contiguous_strings(n, length, source.letters, source.periodic)
            generated = batch if generated is None else generated.merged(batch)
    elif source.generator == "plaquettes":
        size = source.size or next((p.covering.size for p in config.protocols if p.covering.size), None)
        if size is None or 2 * size * size != n:
            raise ConfigError("Plaquettes need a honeycomb size matching the register", {"num_qubits": n})
        generated = lattice_service.honeycomb_plaquettes(size, source.letters)
    elif source.generator == "bonds":
        generated = lattice_service.bond_correlators(specs[0].covering, source.points)
    if operators is None:
        assert generated is not None
        return generated
    return operators if generated is None else operators.merged(generated)


def prepare_state(config: CampaignConfig) -> QuantumState:
    return prepare_preset(config.state.preset, config.state.num_qubits, config.state.seed)


# norms and budgets


def norm_table(operators: OperatorSet, specs: Sequence[ProtocolSpec]) -> pl.DataFrame:
    """Best norm per operator over the campaign protocols, next to the Pauli-shadow norm."""
    channels = [protocol_channel(spec) for spec in specs]
    labels, weights, protocols, cuts, norms, pauli_norms = [], [], [], [], [], []
    for label, pauli in operators.items():
        best, norm = estimator.best_protocol(pauli, channels, label)
        labels.append(label)
        weights.append(pauli.weight())
        protocols.append(specs[best].protocol_id if best is not None else None)
        cuts.append(specs[best].covering.cut_count(pauli) if best is not None else None)
        norms.append(norm.value)
        pauli_norms.append(3.0 ** pauli.weight())
    return pl.DataFrame(
        {
            "label": labels,
            "weight": weights,
            "protocol_id": protocols,
            "cut_count": cuts,
            "norm_sq": norms,
            "pauli_norm_sq": pauli_norms,
        },
        schema={
            "label": pl.Utf8,
            "weight": pl.Int64,
            "protocol_id": pl.Utf8,
            "cut_count": pl.Int64,
            "norm_sq": pl.Float64,
            "pauli_norm_sq": pl.Float64,
        },
    )


def budget_table(operators: OperatorSet, specs: Sequence[ProtocolSpec], epsilon: float) -> pl.DataFrame:
    """
    Samples needed per protocol for the operators assigned to it.

    Rows: one per protocol, then ``total``, ``pauli-baseline`` and ``advantage``.
    ``max_norm_sq`` of the total row is the summed prefactor across protocols;
    the advantage row holds baseline over total for both prefactor and budget.
    """
    channels = [protocol_channel(spec) for spec in specs]
    assigned: List[List[ShadowNorm]] = [[] for _ in specs]
    learnable_weights: List[int] = []
    for label, pauli in operators.items():
        best, norm = estimator.best_protocol(pauli, channels, label)
        if best is not None:
            assigned[best].append(norm)
            learnable_weights.append(pauli.weight())
    names: List[str] = []
    counts: List[Optional[int]] = []
    prefactors: List[Optional[float]] = []
    budgets: List[Optional[float]] = []
    total_prefactor = 0.0
    total_budget = 0
    for spec, group in zip(specs, assigned):
        names.append(spec.protocol_id)
        counts.append(len(group))
        if group:
            worst = max(float(norm.value) for norm in group if norm.value is not None)
            budget = sample_budget(group, epsilon)
            total_prefactor += worst
            total_budget += budget
            prefactors.append(worst)
            budgets.append(float(budget))
        else:
            prefactors.append(None)
            budgets.append(None)
    names.append("total")
    counts.append(sum(len(group) for group in assigned))
    prefactors.append(total_prefactor if learnable_weights else None)
    budgets.append(float(total_budget) if learnable_weights else None)
    if learnable_weights:
        baseline_prefactor = 3.0 ** max(learnable_weights)
        baseline_budget = pauli_baseline_budget(learnable_weights, epsilon)
        names.extend(["pauli-baseline", "advantage"])
        counts.extend([len(learnable_weights), None])
        prefactors.extend([baseline_prefactor, baseline_prefactor / total_prefactor])
        budgets.extend([float(baseline_budget), baseline_budget / total_budget])
    return pl.DataFrame(
        {"protocol": names, "operators": counts, "max_norm_sq": prefactors, "budget": budgets},
        schema={"protocol": pl.Utf8, "operators": pl.Int64, "max_norm_sq": pl.Float64, "budget": pl.Float64},
    )


def cmd_norm(config: CampaignConfig) -> Tuple[pl.DataFrame, pl.DataFrame]:
    """Analytic norms and budgets; nothing is simulated."""
    specs = build_protocols(config)
    operators = build_operators(config, specs)
    return norm_table(operators, specs), budget_table(operators, specs, config.epsilon)


# sweeps


def _chain_string(num_qubits: int, weight: int) -> PauliString:
    return PauliString.from_sparse(num_qubits, {site: "Z" for site in range(weight)})


def _tunable_spec(num_qubits: int, delta: float) -> ProtocolSpec:
    covering = lattice_service.dimer_chain(num_qubits, "even")
    return ProtocolSpec.uniform(covering, BasisFamily.TUNABLE_PHASE, phi_from_delta(delta))


def _approximation(weight: int, cuts: int, delta: float) -> Optional[float]:
    value = shadow_norm_sq_small_delta(weight, cuts, delta)
    return None if math.isinf(value) else value


def _empirical(spec: ProtocolSpec, pauli: PauliString, shots: int, seed: int) -> Tuple[float, float, float]:
    """Second moment, its error and hit frequency on the maximally mixed state."""
    dataset = sample_dataset(QuantumState.maximally_mixed(spec.num_qubits), spec, shots, seed)
    values = estimator.shot_values(pauli, dataset)
    moment = estimation_service.second_moment(values)
    hits = float((values != 0).sum()) / float(values.shape[0])
    return moment.mean, moment.std_error, hits


def _sweep_row(
    axis_value: float,
    curve: str,
    spec: ProtocolSpec,
    pauli: PauliString,
    approximation: Optional[float],
    sweep: SweepConfig,
    epsilon: float,
    seed: int,
    num_operators: int,
) -> SweepRow:
    norm = shadow_norm_sq(pauli, spec)
    row = SweepRow(axis_value=axis_value, curve=curve, analytic=norm.value, approximation=approximation)
    if norm.value is None:
        return row
    update = {"budget": sample_budget([norm], epsilon, max(1, num_operators))}
    if sweep.empirical:
        moment, error, hits = _empirical(spec, pauli, sweep.shots, seed)
        update.update({"empirical": moment, "empirical_error": error, "hit_frequency": hits})
    return row.model_copy(update=update)


def cmd_sweep(config: CampaignConfig, axis: Optional[str] = None) -> SweepResult:
    """
    Norm curves along one axis.

    ``k``: contiguous Z strings on an even dimer chain, one curve per delta.
    ``delta``: fixed weight, delta on an even grid over ``[0, ln 2]``.
    ``n``: per-site norm base of GHZ-n blocks.
    """
    sweep = config.sweep or SweepConfig()
    if axis is not None:
        sweep = sweep.model_copy(update={"axis": axis, "values": [] if axis != sweep.axis else sweep.values})
    result = SweepResult(axis=sweep.axis, epsilon=config.epsilon)
    seed = config.master_seed

    if sweep.axis == "k":
        weights = [int(k) for k in (sweep.values or DEFAULT_WEIGHTS)]
        if min(weights) < 1:
            raise ConfigError("Weights must be positive", {"weights": weights})
        n = 2 * (max(weights) // 2 + 1)
        for delta in sweep.deltas or DEFAULT_DELTAS:
            spec = _tunable_spec(n, delta)
            for k in weights:
                pauli = _chain_string(n, k)
                approximation = _approximation(k, spec.covering.cut_count(pauli), delta)
                row = _sweep_row(
                    float(k), f"delta={delta!r}", spec, pauli, approximation, sweep, config.epsilon, seed, n - k + 1
                )
                result.add_row(row)
        return result

    if sweep.axis == "delta":
        step = LN2 / (DELTA_GRID_POINTS - 1)
        deltas = sweep.values or [min(LN2, i * step) for i in range(DELTA_GRID_POINTS)]
        k = sweep.weight
        n = 2 * (k // 2 + 1)
        pauli = _chain_string(n, k)
        for delta in deltas:
            if not 0.0 <= delta <= LN2 + 1e-15:
                raise ConfigError("delta must lie in [0, ln 2]", {"delta": delta})
            spec = _tunable_spec(n, min(delta, LN2))
            approximation = _approximation(k, spec.covering.cut_count(pauli), delta)
            row = _sweep_row(float(delta), f"k={k}", spec, pauli, approximation, sweep, config.epsilon, seed, n - k + 1)
            result.add_row(row)
        return result

    for value in sweep.values or DEFAULT_BLOCK_SIZES:
        n = int(value)
        if n < 1:
            raise ConfigError("Block sizes must be positive", {"n": n})
        covering = Covering.from_blocks(n, [list(range(n))])
        family = BasisFamily.GHZ if n > 1 else BasisFamily.PAULI_LOCAL
        try:
            spec = ProtocolSpec.uniform(covering, family)
        except ProtocolError as exc:
            raise ConfigError("Invalid GHZ block", {"n": n}) from exc
        row = SweepRow(axis_value=float(n), curve="ghz", analytic=scaling_factor(n), approximation=ASYMPTOTIC_SCALING)
        if sweep.empirical:
            pauli = _chain_string(n, n)
            moment, error, hits = _empirical(spec, pauli, sweep.shots, seed)
            per_site = moment ** (1.0 / n)
            row = row.model_copy(
                update={
                    "empirical": per_site,
                    "empirical_error": per_site * error / (n * moment) if moment > 0 else None,
                    "hit_frequency": hits,
                }
            )
        result.add_row(row)
    return result


# estimation


def estimate_frame(rows: Sequence[EstimateRow]) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "label": [row.label for row in rows],
            "status": [row.status for row in rows],
            "protocol_id": [row.protocol_id for row in rows],
            "mean": [row.estimate.mean if row.estimate else None for row in rows],
            "std_error": [row.estimate.std_error if row.estimate else None for row in rows],
            "median_of_means": [row.estimate.median_of_means if row.estimate else None for row in rows],
            "shots": [row.estimate.shots_used if row.estimate else None for row in rows],
            "norm_sq": [row.norm_sq for row in rows],
            "exact": [row.exact for row in rows],
        },
        schema={
            "label": pl.Utf8,
            "status": pl.Utf8,
            "protocol_id": pl.Utf8,
            "mean": pl.Float64,
            "std_error": pl.Float64,
            "median_of_means": pl.Float64,
            "shots": pl.Int64,
            "norm_sq": pl.Float64,
            "exact": pl.Float64,
        },
    )


def cmd_estimate(
    config: CampaignConfig, workers: Optional[int] = None
) -> Tuple[pl.DataFrame, pl.DataFrame, List[SnapshotDataset]]:
    """
    Sample one dataset per protocol and estimate every operator.

    Protocol ``j`` uses master seed ``master_seed + j``.

    Returns:
        (estimate report, budget table, datasets)
    """
    log = ShadowLogger.get_instance()
    specs = build_protocols(config)
    operators = build_operators(config, specs)
    state = prepare_state(config)
    datasets: List[SnapshotDataset] = []
    for index, spec in enumerate(specs):
        stage = log.log_stage_start("sample", {"protocol": spec.protocol_id, "shots": config.shots})
        try:
            datasets.append(
                sample_dataset(
                    state,
                    spec,
                    config.shots,
                    config.master_seed + index,
                    workers=workers or config.workers,
                    metadata={"campaign": config.name},
                )
            )
        except Exception as exc:
            log.log_stage_end(stage, False, str(exc))
            raise
        log.log_stage_end(stage, True)
    stage = log.log_stage_start("estimate", {"operators": len(operators)})
    rows = estimator.estimate_set(operators, datasets, groups=config.groups, state=state)
    log.log_stage_end(stage, True)
    report = estimate_frame(rows)
    log.log_data("estimate", report)
    return report, budget_table(operators, specs, config.epsilon), datasets


def cmd_validate(
    level: str = "fast", workers: Optional[int] = None, channel_provider: Optional[ChannelProvider] = None
) -> ValidationReport:
    """Run the self-check suite; the caller decides what a failed report means."""
    return run_validation(level, channel_provider, workers)


# output


def render(frame: pl.DataFrame, data_format: DataFormat) -> str:
    rendered = DataFormatConverter.convert(frame, DataFormat.CSV if data_format == DataFormat.POLARS else data_format)
    assert isinstance(rendered, str)
    return rendered


def write_report(frame: pl.DataFrame, path: Union[str, Path], data_format: DataFormat) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render(frame, data_format), encoding="utf-8")
    return target


def companion_path(path: Union[str, Path], suffix: str) -> Path:
    """``report.csv`` -> ``report.<suffix>.csv``."""
    target = Path(path)
    return target.with_name(f"{target.stem}.{suffix}{target.suffix}")
