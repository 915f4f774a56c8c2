"""Analytic shadow-channel eigenvalues, shadow norms and sample budgets.

Eigenvalue tables are indexed by the bitmask of non-identity sites in a block.
For a locally scrambled block they depend on the measured basis only through
its entanglement feature (average subsystem purities):

    lambda_A = (-1/3)^|A| * sum_{B subset A} (-2)^|B| * purity_B
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from ..model.channel_eigenvalues import EIGENVALUE_TOLERANCE, ChannelEigenvalues, ShadowChannel
from ..model.config_manager import ConfigManager
from ..model.covering import Covering
from ..model.entanglement_feature import EntanglementFeature, subsystem_purity
from ..model.errors import ChannelError, PauliAlgebraError, UnlearnableOperatorError
from ..model.pauli_string import PauliString
from ..model.protocol_spec import BasisFamily, BlockBasis, ProtocolSpec
from ..model.shadow_norm import ShadowNorm

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
ASYMPTOTIC_SCALING = 1.5


def zero_threshold() -> float:
    """Eigenvalues below ``numerics.zero_threshold`` count as exact zeros."""
    return float(ConfigManager().get_setting("numerics.zero_threshold", EIGENVALUE_TOLERANCE) or EIGENVALUE_TOLERANCE)


def pauli_block_eigs() -> ChannelEigenvalues:
    return ChannelEigenvalues.from_values(1, (1.0, 1.0 / 3.0))


def bell_block_eigs() -> ChannelEigenvalues:
    return ChannelEigenvalues.from_values(2, (1.0, 0.0, 0.0, 1.0 / 3.0))


def tunable_block_eigs(delta: float) -> ChannelEigenvalues:
    if not 0.0 <= delta <= LN2 + 1e-15:
        raise ChannelError("delta must lie in [0, ln 2]", {"delta": delta})
    growth = math.expm1(delta)
    single = growth / 3.0
    pair = (3.0 - 2.0 * growth) / 9.0
    return ChannelEigenvalues.from_values(2, (1.0, single, single, pair))


def ef_to_eigs(feature: EntanglementFeature) -> ChannelEigenvalues:
    n = feature.block_size
    size = 1 << n
    popcount = np.array([bin(mask).count("1") for mask in range(size)])
    # zeta transform over subsets
    acc = np.asarray(feature.purities, dtype=float) * (-2.0) ** popcount
    for bit in range(n):
        step = 1 << bit
        for mask in range(size):
            if mask & step:
                acc[mask] += acc[mask ^ step]
    values = acc * (-1.0 / 3.0) ** popcount
    values[np.abs(values) < zero_threshold()] = 0.0
    values[0] = 1.0
    return ChannelEigenvalues.from_values(n, values)


def ghz_entanglement_feature(block_size: int) -> EntanglementFeature:
    if block_size < 2:
        raise ChannelError("GHZ blocks need n >= 2", {"n": block_size})
    return EntanglementFeature.uniform(block_size, 0.5)


def ghz_block_eigs(block_size: int) -> ChannelEigenvalues:
    table = ef_to_eigs(ghz_entanglement_feature(block_size))
    full = table.values[-1]
    closed = ghz_full_pattern_eig(block_size)
    if abs(full - closed) > 1e-12:
        raise ChannelError("GHZ eigenvalue disagrees with closed form", {"n": block_size, "table": full})
    return table


def ghz_full_pattern_eig(block_size: int) -> float:
    n = block_size
    return (2.0**n + 1.0 + (-1.0) ** n) / (2.0 * 3.0**n)


def scaling_factor(block_size: int) -> float:
    """Per-weight norm base of GHZ-n blocks; ``f_1 = 3`` is the Pauli case."""
    n = block_size
    if n < 1:
        raise ChannelError("Block size must be positive", {"n": n})
    if n % 2 == 0:
        return 3.0 / (2.0 ** (n - 1) + 1.0) ** (1.0 / n)
    return 3.0 / 2.0 ** (1.0 - 1.0 / n)


def stabilizer_bound_check(block_size: int) -> bool:
    """True when GHZ-n stays above the stabilizer-measurement floor of 3/2 per site."""
    return scaling_factor(block_size) >= ASYMPTOTIC_SCALING


def cphase_single_purity(phi: float) -> float:
    """Average single-qubit purity of the four states CPhase(phi)|+-, +->."""
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    minus = np.array([1.0, -1.0]) / math.sqrt(2.0)
    gate = np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)])
    purities = [subsystem_purity(gate @ np.kron(a, b), 0b01, 2) for a in (plus, minus) for b in (plus, minus)]
    return float(np.mean(purities))


def delta_from_phi(phi: float) -> float:
    if not 0.0 <= phi <= math.pi:
        raise ChannelError("phi must lie in [0, pi]", {"phi": phi})
    delta = LN2 + math.log(cphase_single_purity(phi))
    return min(max(delta, 0.0), LN2)


def phi_from_delta(delta: float) -> float:
    if not 0.0 <= delta <= LN2 + 1e-15:
        raise ChannelError("delta must lie in [0, ln 2]", {"delta": delta})
    cosine = min(max(2.0 * math.exp(delta) - 3.0, -1.0), 1.0)
    return math.acos(cosine)


def block_eigs(basis: BlockBasis) -> ChannelEigenvalues:
    if basis.family == BasisFamily.PAULI_LOCAL:
        return pauli_block_eigs()
    if basis.family == BasisFamily.BELL:
        return bell_block_eigs()
    if basis.family == BasisFamily.TUNABLE_PHASE:
        assert basis.phi is not None
        return tunable_block_eigs(delta_from_phi(basis.phi))
    return ghz_block_eigs(basis.size)


def protocol_channel(spec: ProtocolSpec) -> ShadowChannel:
    cache = {}
    tables = []
    for basis in spec.bases:
        key = basis.key()
        if key not in cache:
            cache[key] = block_eigs(basis)
        tables.append(cache[key])
    return ShadowChannel(spec=spec, blocks=tuple(tables))


def _check_register(pauli: PauliString, covering: Covering) -> None:
    if pauli.num_qubits != covering.num_qubits:
        raise PauliAlgebraError(
            "Operator and protocol act on different registers",
            {"operator": pauli.num_qubits, "protocol": covering.num_qubits},
        )


def pattern_eigenvalues(pauli: PauliString, channel: ShadowChannel) -> List[float]:
    """Eigenvalue of every block the support touches, in block order."""
    covering = channel.spec.covering
    _check_register(pauli, covering)
    return [table.values[mask] for table, mask in zip(channel.blocks, covering.patterns(pauli)) if mask]


def inverse_eigenvalue(pauli: PauliString, channel: ShadowChannel) -> float:
    """Product of 1/lambda over touched blocks; raises when a factor vanishes."""
    factor = 1.0
    threshold = zero_threshold()
    for value in pattern_eigenvalues(pauli, channel):
        if value < threshold:
            raise UnlearnableOperatorError(
                "Operator touches a zero-eigenvalue pattern",
                {"operator": pauli.label(), "protocol": channel.protocol_id},
            )
        factor /= value
    return factor


def channel_norm_sq(pauli: PauliString, channel: ShadowChannel, label: Optional[str] = None) -> ShadowNorm:
    operator_label = label or pauli.label()
    try:
        value = inverse_eigenvalue(pauli, channel)
    except UnlearnableOperatorError:
        return ShadowNorm.unlearnable(operator_label, channel.protocol_id)
    return ShadowNorm(value=value, operator_label=operator_label, protocol_label=channel.protocol_id)


def shadow_norm_sq(pauli: PauliString, spec: ProtocolSpec, label: Optional[str] = None) -> ShadowNorm:
    return channel_norm_sq(pauli, protocol_channel(spec), label)


def shadow_norm_sq_small_delta(weight: int, cuts: int, delta: float) -> float:
    """Leading small-delta form (3 + 2 delta)^(|A|/2) * (sqrt(3)/delta)^(cuts) of the tunable norm."""
    base = (3.0 + 2.0 * delta) ** (weight / 2.0)
    if not cuts:
        return base
    if delta <= 0.0:
        return math.inf
    return base * (math.sqrt(3.0) / delta) ** cuts


def hit_probability(pauli: PauliString, spec: ProtocolSpec) -> float:
    """Probability that a Clifford-block measurement round measures ``pauli`` up to sign."""
    if not spec.is_clifford:
        raise ChannelError("Hit probability is defined for Clifford protocols", {"protocol": spec.protocol_id})
    probability = 1.0
    for value in pattern_eigenvalues(pauli, protocol_channel(spec)):
        probability *= value
    return probability


def sample_budget(norms: Sequence[ShadowNorm], epsilon: float, num_operators: Optional[int] = None) -> int:
    """ceil(ln(M) * max norm / epsilon^2), at least one sample.

    ``num_operators`` overrides M when the norms list is a representative subset.
    """
    if epsilon <= 0.0:
        raise ChannelError("epsilon must be positive", {"epsilon": epsilon})
    if not norms:
        raise ChannelError("Budget needs at least one norm")
    missing = [norm.operator_label for norm in norms if norm.value is None]
    if missing:
        raise UnlearnableOperatorError("Budget requested for unlearnable operators", {"operators": missing[:5]})
    count = num_operators if num_operators is not None else len(norms)
    worst = max(float(norm.value) for norm in norms if norm.value is not None)
    budget = math.ceil(math.log(count) * worst / epsilon**2)
    return max(1, budget)


def sample_budget_split(groups: Sequence[Sequence[ShadowNorm]], epsilon: float) -> int:
    """Total over coverings, each covering budgeted for the operators assigned to it."""
    return sum(sample_budget(group, epsilon) for group in groups if group)


def pauli_baseline_budget(weights: Sequence[int], epsilon: float) -> int:
    """Budget of single-qubit Pauli shadows for operators of the given weights."""
    baseline = [
        ShadowNorm(value=3.0**weight, operator_label=f"w{weight}", protocol_label="pauli") for weight in weights
    ]
    return sample_budget(baseline, epsilon)
