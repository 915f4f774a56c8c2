"""Self-checks of the channel formulas, the oracles and the Monte Carlo estimators.

``fast`` runs the exact identities and a determinism check. ``full`` adds the
sampled checks: second-moment law, hit frequencies, unbiasedness on small
states, scrambling equivalence and sampler-vs-Born agreement.

Every check receives its channel tables through ``channel_provider`` so a tampered
provider makes the affected checks fail by name.
"""

import itertools
import math
import time
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..domain.model.channel_eigenvalues import ChannelEigenvalues, ShadowChannel
from ..domain.model.config_manager import ConfigManager
from ..domain.model.covering import Covering
from ..domain.model.entanglement_feature import EntanglementFeature
from ..domain.model.errors import ShadowsError
from ..domain.model.pauli_string import PauliString
from ..domain.model.protocol_spec import BasisFamily, BlockBasis, ProtocolSpec, ScrambleMode
from ..domain.model.quantum_state import QuantumState
from ..domain.model.validation_report import CheckResult, ValidationReport
from ..domain.service import estimation_service, lattice_service
from ..domain.service.channel_service import (
    LN2,
    ASYMPTOTIC_SCALING,
    bell_block_eigs,
    channel_norm_sq,
    cphase_single_purity,
    delta_from_phi,
    ef_to_eigs,
    ghz_entanglement_feature,
    ghz_full_pattern_eig,
    pauli_block_eigs,
    phi_from_delta,
    protocol_channel,
    scaling_factor,
    shadow_norm_sq,
    tunable_block_eigs,
)
from ..domain.service.circuit_service import block_circuit, measurement_circuit
from ..domain.service.clifford_group import GROUP_ORDER
from ..domain.service.oracle_service import (
    bell_basis,
    circuit_basis,
    measured_feature,
    oracle_block_table,
    product_basis,
)
from ..infrastructure.backend.dense_backend import born_distribution
from ..infrastructure.logging.shadow_logger import ShadowLogger
from . import estimator
from .sampler import sample_dataset
from .state_presets import prepare_preset

ChannelProvider = Callable[[ProtocolSpec], ShadowChannel]

EXACT_TOLERANCE = 1e-12
MOMENT_RELATIVE_TOLERANCE = 0.03
HIT_RELATIVE_TOLERANCE = 0.02
SIGMA_BOUND = 5.0
BINOMIAL_SIGMA = 4.0
UNBIASED_SHOTS = 200_000
SAMPLER_SHOTS = 100_000
TUNABLE_DELTA = math.log(11.0 / 8.0)
TUNABLE_MOMENT_DELTAS = (0.1, TUNABLE_DELTA)
SEED = 20240601


def scaled_channel_provider(family: BasisFamily, factor: float) -> ChannelProvider:
    """Provider whose tables for ``family`` blocks have every non-identity entry multiplied by ``factor``."""

    def provide(spec: ProtocolSpec) -> ShadowChannel:
        channel = protocol_channel(spec)
        for index, basis in enumerate(spec.bases):
            if basis.family != family:
                continue
            table = channel.blocks[index]
            values = [table.values[0]] + [min(1.0, value * factor) for value in table.values[1:]]
            channel = channel.with_block(index, ChannelEigenvalues.from_values(table.block_size, values))
        return channel

    return provide


def _chain_spec(
    num_qubits: int,
    family: BasisFamily,
    phi: Optional[float] = None,
    mode: ScrambleMode = ScrambleMode.ALL_QUBITS,
) -> ProtocolSpec:
    if family == BasisFamily.PAULI_LOCAL:
        covering = Covering.from_blocks(num_qubits, [[site] for site in range(num_qubits)])
    elif family == BasisFamily.GHZ:
        covering = lattice_service.n_mer_chain(num_qubits, 3)
    else:
        covering = lattice_service.dimer_chain(num_qubits, "even")
    return ProtocolSpec.uniform(covering, family, phi, mode)


def _z_string(num_qubits: int, weight: int) -> PauliString:
    return PauliString.from_sparse(num_qubits, {site: "Z" for site in range(weight)})


def _max_difference(left: Sequence[float], right: Sequence[float]) -> float:
    return float(np.max(np.abs(np.asarray(left, dtype=float) - np.asarray(right, dtype=float))))


def _exact_result(error: float, tolerance: float = EXACT_TOLERANCE) -> CheckResult:
    return CheckResult(name="", passed=error <= tolerance, measured=error, expected=0.0, tolerance=tolerance)


class ValidationSuite:
    """Runs the named checks and collects a :class:`ValidationReport`."""

    def __init__(
        self,
        channel_provider: Optional[ChannelProvider] = None,
        full_shots: Optional[int] = None,
        workers: Optional[int] = None,
        fast_shots: Optional[int] = None,
    ) -> None:
        config = ConfigManager()
        self.channel_provider: ChannelProvider = channel_provider or protocol_channel
        self.fast_shots = int(fast_shots or config.get_setting("validation.fast_shots", 4000) or 4000)
        self.full_shots = int(full_shots or config.get_setting("validation.full_shots", 1_000_000) or 1_000_000)
        self.workers = workers
        self.logger = ShadowLogger.get_instance()

    # plumbing

    def _run_check(self, name: str, check: Callable[[], CheckResult]) -> CheckResult:
        stage = self.logger.log_stage_start(f"check:{name}")
        start = time.perf_counter()
        try:
            result = check()
        except (ShadowsError, ArithmeticError, ValueError) as exc:
            result = CheckResult(name=name, passed=False, detail=f"{type(exc).__name__}: {exc}")
        result = result.model_copy(update={"name": name, "duration": time.perf_counter() - start})
        self.logger.log_stage_end(stage, result.passed, None if result.passed else result.detail)
        return result

    def fast_checks(self) -> List[Tuple[str, Callable[[], CheckResult]]]:
        return [
            ("bell-pauli-oracle", self.check_bell_pauli_oracle),
            ("tunable-endpoints", self.check_tunable_endpoints),
            ("tunable-oracle", self.check_tunable_oracle),
            ("ghz-feature-map", self.check_ghz_feature_map),
            ("uniform-purity-map", self.check_uniform_purity_map),
            ("scaling-table", self.check_scaling_table),
            ("tunable-norm", self.check_tunable_norm),
            ("cphase-calibration", self.check_cphase_calibration),
            ("symplectic-vs-dense", self.check_symplectic_vs_dense),
            ("determinism", self.check_determinism),
        ]

    def full_checks(self) -> List[Tuple[str, Callable[[], CheckResult]]]:
        return [
            ("second-moment-law", self.check_second_moment_law),
            ("hit-frequency", self.check_hit_frequency),
            ("unbiasedness", self.check_unbiasedness),
            ("scrambling-equivalence", self.check_scrambling_equivalence),
            ("sampler-born-rule", self.check_sampler_born_rule),
            ("stabilizer-dense-agreement", self.check_backend_agreement),
        ]

    def run(self, level: str = "fast") -> ValidationReport:
        if level not in ("fast", "full"):
            raise ValueError(f"unknown validation level {level}")
        checks = self.fast_checks() + (self.full_checks() if level == "full" else [])
        report = ValidationReport(level=level)
        for name, check in checks:
            report.add_check(self._run_check(name, check))
        self.logger.info("validation finished", {"level": level, "failed": report.failed_names()})
        return report

    def _block_table(self, spec: ProtocolSpec, index: int = 0) -> ChannelEigenvalues:
        return self.channel_provider(spec).blocks[index]

    # exact checks

    def check_bell_pauli_oracle(self) -> CheckResult:
        bell = self._block_table(_chain_spec(2, BasisFamily.BELL))
        pauli = self._block_table(_chain_spec(1, BasisFamily.PAULI_LOCAL))
        oracle_bell = oracle_block_table(bell_basis())
        oracle_circuit = oracle_block_table(circuit_basis(BlockBasis(family=BasisFamily.BELL, size=2)))
        oracle_pauli = oracle_block_table(product_basis(1))
        error = max(
            _max_difference(bell.values, oracle_bell.values),
            _max_difference(bell.values, oracle_circuit.values),
            _max_difference(pauli.values, oracle_pauli.values),
            _max_difference(bell.values, bell_block_eigs().values),
            _max_difference(pauli.values, pauli_block_eigs().values),
        )
        return _exact_result(error)

    def check_tunable_endpoints(self) -> CheckResult:
        pauli = pauli_block_eigs()
        error = max(
            _max_difference(tunable_block_eigs(0.0).values, bell_block_eigs().values),
            _max_difference(tunable_block_eigs(LN2).values, pauli.tensor(pauli).values),
        )
        return _exact_result(error)

    def check_tunable_oracle(self) -> CheckResult:
        error = 0.0
        for delta in (0.0, 0.1, TUNABLE_DELTA, 0.5, LN2):
            spec = _chain_spec(2, BasisFamily.TUNABLE_PHASE, phi_from_delta(delta))
            oracle = oracle_block_table(circuit_basis(spec.bases[0]))
            error = max(error, _max_difference(self._block_table(spec).values, oracle.values))
        tolerance = 1e-10
        return _exact_result(error, tolerance)

    def check_ghz_feature_map(self) -> CheckResult:
        error = 0.0
        for n in range(2, 13):
            table = ef_to_eigs(ghz_entanglement_feature(n))
            error = max(error, abs(table.values[-1] - ghz_full_pattern_eig(n)))
        measured = ef_to_eigs(measured_feature(circuit_basis(BlockBasis(family=BasisFamily.GHZ, size=3))))
        oracle = oracle_block_table(circuit_basis(BlockBasis(family=BasisFamily.GHZ, size=3)))
        error = max(error, _max_difference(measured.values, oracle.values))
        spec = _chain_spec(3, BasisFamily.GHZ)
        error = max(error, _max_difference(self._block_table(spec).values, oracle.values))
        return _exact_result(error)

    def check_uniform_purity_map(self) -> CheckResult:
        error = 0.0
        for purity in np.linspace(0.5, 1.0, 11):
            table = ef_to_eigs(EntanglementFeature.uniform(3, float(purity)))
            error = max(error, abs(table.values[-1] - (7.0 - 6.0 * purity) / 27.0))
        return _exact_result(error)

    def check_scaling_table(self) -> CheckResult:
        problems: List[str] = []
        expected = {1: 3.0, 2: math.sqrt(3.0), 3: 3.0 * 2.0 ** (-2.0 / 3.0), 4: math.sqrt(3.0)}
        for n, value in expected.items():
            if abs(scaling_factor(n) - value) > EXACT_TOLERANCE:
                problems.append(f"f_{n}")
        for parity in (0, 1):
            sizes = [n for n in range(3, 65) if n % 2 == parity and n >= (4 if parity == 0 else 3)]
            values = [scaling_factor(n) for n in sizes]
            if any(later >= earlier for earlier, later in zip(values, values[1:])):
                problems.append("even" if parity == 0 else "odd")
        if any(scaling_factor(n) <= ASYMPTOTIC_SCALING for n in range(1, 65)):
            problems.append("floor")
        return CheckResult(name="", passed=not problems, detail=", ".join(problems))

    def check_tunable_norm(self) -> CheckResult:
        error = 0.0
        spec = _chain_spec(10, BasisFamily.TUNABLE_PHASE, phi_from_delta(TUNABLE_DELTA))
        channel = self.channel_provider(spec)
        for k in range(1, 9):
            norm = channel_norm_sq(_z_string(10, k), channel)
            target = 4.0 ** (k % 2) * 2.0**k
            if norm.value is None:
                return CheckResult(name="", passed=False, detail=f"k={k} unlearnable")
            error = max(error, abs(norm.value - target) / target)
        tolerance = 1e-12
        return _exact_result(error, tolerance)

    def check_cphase_calibration(self) -> CheckResult:
        error = max(abs(delta_from_phi(math.pi)), abs(delta_from_phi(0.0) - LN2))
        for phi in np.linspace(0.0, math.pi, 20):
            basis = BlockBasis(family=BasisFamily.TUNABLE_PHASE, size=2, phi=float(phi))
            oracle = measured_feature(circuit_basis(basis)).purity(0b01)
            target = (3.0 + math.cos(phi)) / 4.0
            error = max(error, abs(oracle - target), abs(cphase_single_purity(float(phi)) - target))
        return _exact_result(error)

    def check_symplectic_vs_dense(self) -> CheckResult:
        rng = np.random.default_rng(SEED)
        mismatches = 0
        bases = [
            BlockBasis(family=BasisFamily.PAULI_LOCAL, size=1),
            BlockBasis(family=BasisFamily.BELL, size=2),
            BlockBasis(family=BasisFamily.GHZ, size=3),
        ]
        for basis in bases:
            words = ["".join(letters) for letters in itertools.product("IXYZ", repeat=basis.size)][1:]
            if basis.size > 2:
                words = ["ZZZ", "XXX", "ZZI", "YXY", "IXZ"]
            for word in words:
                scramblers = rng.integers(0, GROUP_ORDER, size=(64, basis.size)).astype(np.uint8)
                outcomes = rng.integers(0, 2, size=(64, basis.size)).astype(np.uint8)
                table = estimation_service.block_table(basis, word)
                dense = estimation_service.dense_block_values(table, scramblers, outcomes)
                fast = estimation_service.symplectic_block_values(block_circuit(basis), word, scramblers, outcomes)
                mismatches += int(np.count_nonzero(np.abs(dense - fast) > 1e-9))
        return CheckResult(name="", passed=mismatches == 0, measured=float(mismatches), expected=0.0)

    def check_determinism(self) -> CheckResult:
        state = prepare_preset("ghz", 6)
        spec = _chain_spec(6, BasisFamily.BELL)
        single = sample_dataset(state, spec, self.fast_shots, SEED, workers=1, chunk_size=256)
        pooled = sample_dataset(state, spec, self.fast_shots, SEED, workers=4, chunk_size=256)
        detail = f"1 vs 4 workers, {self.fast_shots} shots"
        return CheckResult(name="", passed=single.same_records(pooled), detail=detail)

    # sampled checks

    def _mixed_moment(self, spec: ProtocolSpec, pauli: PauliString, shots: int) -> Tuple[float, float, float]:
        dataset = sample_dataset(QuantumState.maximally_mixed(spec.num_qubits), spec, shots, SEED, workers=self.workers)
        values = estimator.shot_values(pauli, dataset, self.channel_provider(spec))
        moment = estimation_service.second_moment(values)
        hits = float(np.count_nonzero(values)) / float(values.shape[0])
        return moment.mean, moment.std_error, hits

    def second_moment_cases(self) -> List[Tuple[ProtocolSpec, int]]:
        cases = [(_chain_spec(6, BasisFamily.BELL), k) for k in (2, 4, 6)]
        cases += [(_chain_spec(3, BasisFamily.PAULI_LOCAL), k) for k in (1, 2, 3)]
        cases += [(_chain_spec(3, BasisFamily.GHZ), 3)]
        for delta in TUNABLE_MOMENT_DELTAS:
            cases += [(_chain_spec(4, BasisFamily.TUNABLE_PHASE, phi_from_delta(delta)), k) for k in (2, 3)]
        return cases

    def check_second_moment_law(self) -> CheckResult:
        worst = 0.0
        failures: List[str] = []
        for spec, k in self.second_moment_cases():
            pauli = _z_string(spec.num_qubits, k)
            target = shadow_norm_sq(pauli, spec).value
            assert target is not None
            moment, _, _ = self._mixed_moment(spec, pauli, self.full_shots)
            relative = abs(moment - target) / target
            worst = max(worst, relative)
            if relative > MOMENT_RELATIVE_TOLERANCE:
                failures.append(f"{spec.bases[-1].key()} k={k}: {moment!r} vs {target!r}")
        return CheckResult(
            name="",
            passed=not failures,
            measured=worst,
            expected=0.0,
            tolerance=MOMENT_RELATIVE_TOLERANCE,
            detail="; ".join(failures),
        )

    def check_hit_frequency(self) -> CheckResult:
        cases = [(_chain_spec(4, BasisFamily.BELL), 4), (_chain_spec(2, BasisFamily.PAULI_LOCAL), 2)]
        worst = 0.0
        failures: List[str] = []
        for spec, k in cases:
            _, _, hits = self._mixed_moment(spec, _z_string(spec.num_qubits, k), self.full_shots)
            relative = abs(hits - 1.0 / 9.0) * 9.0
            worst = max(worst, relative)
            if relative > HIT_RELATIVE_TOLERANCE:
                failures.append(f"{spec.bases[-1].key()} k={k}: {hits!r}")
        return CheckResult(
            name="",
            passed=not failures,
            measured=worst,
            expected=0.0,
            tolerance=HIT_RELATIVE_TOLERANCE,
            detail="; ".join(failures),
        )

    def check_unbiasedness(self) -> CheckResult:
        labels = ["ZZIIII", "IIZZII", "XXXXXX", "YYXXXX", "XZIIII", "IIIIZX", "ZYYZII", "IIZYYZ", "ZZZZII", "IXXIII"]
        operators = [PauliString.from_label(label) for label in labels]
        protocols = [
            _chain_spec(6, BasisFamily.BELL),
            _chain_spec(6, BasisFamily.GHZ),
            _chain_spec(6, BasisFamily.TUNABLE_PHASE, phi_from_delta(TUNABLE_DELTA)),
        ]
        worst = 0.0
        failures: List[str] = []
        for preset in ("ghz", "cluster-1d"):
            state = prepare_preset(preset, 6)
            for index, spec in enumerate(protocols):
                channel = self.channel_provider(spec)
                learnable = [op for op in operators if channel_norm_sq(op, channel).value is not None][:5]
                dataset = sample_dataset(state, spec, UNBIASED_SHOTS, SEED + index, workers=self.workers)
                for pauli in learnable:
                    exact = estimator.exact_expectation(state, pauli)
                    assert exact is not None
                    result = estimator.estimate(pauli, dataset, channel)
                    scale = max(result.std_error, 1e-12)
                    sigmas = abs(result.mean - exact) / scale
                    worst = max(worst, sigmas)
                    if sigmas > SIGMA_BOUND:
                        failures.append(f"{preset}/{spec.bases[0].key()}/{pauli.label()}")
        detail = "; ".join(failures)
        return CheckResult(name="", passed=not failures, measured=worst, tolerance=SIGMA_BOUND, detail=detail)

    def check_scrambling_equivalence(self) -> CheckResult:
        pauli = _z_string(4, 4)
        all_qubits = _chain_spec(4, BasisFamily.BELL)
        one_per_block = _chain_spec(4, BasisFamily.BELL, mode=ScrambleMode.ONE_PER_BLOCK)
        first, first_error, _ = self._mixed_moment(all_qubits, pauli, self.full_shots)
        second, second_error, _ = self._mixed_moment(one_per_block, pauli, self.full_shots)
        combined = math.hypot(first_error, second_error)
        sigmas = abs(first - second) / max(combined, 1e-12)
        return CheckResult(name="", passed=sigmas <= SIGMA_BOUND, measured=sigmas, tolerance=SIGMA_BOUND)

    def _assignment_table(self, state: QuantumState, spec: ProtocolSpec) -> np.ndarray:
        """Born distribution per scrambler assignment; rows follow ``combo_indices`` of the scrambled sites."""
        n = spec.num_qubits
        sites = spec.scrambled_sites()
        rows = []
        for assignment in itertools.product(range(GROUP_ORDER), repeat=len(sites)):
            indices = [0] * n
            for site, index in zip(sites, assignment):
                indices[site] = index
            rows.append(born_distribution(state, measurement_circuit(spec, indices)))
        return np.asarray(rows)

    def _outcome_distribution(self, state: QuantumState, spec: ProtocolSpec) -> np.ndarray:
        """Born probabilities averaged over every scrambler assignment."""
        return self._assignment_table(state, spec).mean(axis=0)

    def sampler_cases(self) -> List[Tuple[str, QuantumState, ProtocolSpec]]:
        return [
            ("bell", prepare_preset("ghz", 2), _chain_spec(2, BasisFamily.BELL)),
            (
                "tunable",
                prepare_preset("random-dense", 2, seed=3),
                _chain_spec(2, BasisFamily.TUNABLE_PHASE, phi_from_delta(TUNABLE_DELTA)),
            ),
            ("pauli", prepare_preset("random-dense", 2, seed=5), _chain_spec(2, BasisFamily.PAULI_LOCAL)),
            ("ghz", prepare_preset("random-dense", 3, seed=7), _chain_spec(3, BasisFamily.GHZ)),
        ]

    def check_sampler_born_rule(self) -> CheckResult:
        """Outcome marginals and the joint (scrambler, outcome) law against the Born oracle.

        The joint law is checked through the mean Born probability of the sampled outcome
        given its sampled scramblers, whose exact value is the average collision probability.
        """
        worst = 0.0
        failures: List[str] = []
        for name, state, spec in self.sampler_cases():
            table = self._assignment_table(state, spec)
            expected = table.mean(axis=0)
            dataset = sample_dataset(state, spec, SAMPLER_SHOTS, SEED, workers=self.workers)
            index = estimation_service.outcome_indices(dataset.outcomes)
            observed = np.bincount(index, minlength=expected.shape[0]) / float(dataset.shots)
            sigma = np.sqrt(np.maximum(expected * (1.0 - expected), 1e-12) / dataset.shots)
            marginal = float(np.max(np.abs(observed - expected) / sigma))
            rows = estimation_service.combo_indices(dataset.scramblers[:, list(spec.scrambled_sites())])
            hit = table[rows, index]
            collision = float(np.mean(np.sum(table**2, axis=1)))
            spread = max(float(np.std(hit, ddof=1)) / math.sqrt(dataset.shots), 1e-12)
            joint = abs(float(np.mean(hit)) - collision) / spread
            worst = max(worst, marginal, joint)
            if max(marginal, joint) > BINOMIAL_SIGMA:
                failures.append(f"{name}: marginal {marginal:.2f} joint {joint:.2f}")
        return CheckResult(
            name="", passed=not failures, measured=worst, tolerance=BINOMIAL_SIGMA, detail="; ".join(failures)
        )

    def check_backend_agreement(self) -> CheckResult:
        state = prepare_preset("random-stabilizer", 4, seed=11)
        spec = _chain_spec(4, BasisFamily.BELL)
        shots = SAMPLER_SHOTS
        frequencies = []
        for name, seed in (("stabilizer", SEED), ("dense", SEED + 1)):
            dataset = sample_dataset(state, spec, shots, seed, workers=self.workers, backend_name=name)
            index = estimation_service.outcome_indices(dataset.outcomes)
            frequencies.append(np.bincount(index, minlength=16) / float(shots))
        pooled = (frequencies[0] + frequencies[1]) / 2.0
        sigma = np.sqrt(np.maximum(2.0 * pooled * (1.0 - pooled), 1e-12) / shots)
        worst = float(np.max(np.abs(frequencies[0] - frequencies[1]) / sigma))
        return CheckResult(name="", passed=worst <= BINOMIAL_SIGMA, measured=worst, tolerance=BINOMIAL_SIGMA)


def run_validation(
    level: str = "fast", channel_provider: Optional[ChannelProvider] = None, workers: Optional[int] = None
) -> ValidationReport:
    return ValidationSuite(channel_provider, workers=workers).run(level)
