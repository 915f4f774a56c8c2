"""Single-shot estimators and their aggregation over snapshot datasets."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..domain.model.channel_eigenvalues import ShadowChannel
from ..domain.model.config_manager import ConfigManager
from ..domain.model.errors import EstimationError, ShadowsError
from ..domain.model.estimate import Estimate, EstimateRow, ShotValue
from ..domain.model.operator_set import OperatorSet
from ..domain.model.pauli_string import PauliString
from ..domain.model.quantum_state import QuantumState
from ..domain.model.shadow_norm import ShadowNorm
from ..domain.model.snapshot import Snapshot, SnapshotDataset
from ..domain.service import estimation_service
from ..domain.service.channel_service import channel_norm_sq, inverse_eigenvalue, protocol_channel
from ..domain.service.circuit_service import DENSE_UNITARY_QUBIT_LIMIT
from ..domain.service.oracle_service import ORACLE_MAX_BLOCK
from ..infrastructure.backend.dense_backend import expectation_value
from .table_cache import TableCache

logger = logging.getLogger(__name__)

_cache: Optional[TableCache] = None


def table_cache() -> TableCache:
    global _cache
    if _cache is None:
        _cache = TableCache(int(ConfigManager().get_setting("cache.max_tables", 256) or 256))
    return _cache


def _channel_for(dataset: SnapshotDataset, channel: Optional[ShadowChannel]) -> ShadowChannel:
    if channel is None:
        return protocol_channel(dataset.spec)
    if channel.protocol_id != dataset.protocol_id:
        raise EstimationError(
            "Channel belongs to another protocol", {"channel": channel.protocol_id, "dataset": dataset.protocol_id}
        )
    return channel


def shot_values(pauli: PauliString, dataset: SnapshotDataset, channel: Optional[ShadowChannel] = None) -> np.ndarray:
    """
    Per-shot estimator values of ``pauli`` as a vector over the dataset rows.

    Each touched block contributes ``1/lambda`` times the matrix element of the
    block Pauli in the measured state; untouched blocks contribute 1.
    """
    channel = _channel_for(dataset, channel)
    if pauli.num_qubits != dataset.num_qubits:
        raise EstimationError(
            "Operator and dataset sizes differ", {"operator": pauli.num_qubits, "dataset": dataset.num_qubits}
        )
    factor = inverse_eigenvalue(pauli, channel)
    values = np.full(dataset.shots, pauli.sign * factor, dtype=float)
    max_block = int(ConfigManager().get_setting("oracle.max_block_size", ORACLE_MAX_BLOCK) or ORACLE_MAX_BLOCK)
    spec = dataset.spec
    for block, basis, mask in zip(spec.covering.blocks, spec.bases, spec.covering.patterns(pauli)):
        if not mask:
            continue
        columns = list(block)
        letters = "".join(pauli.letter(site) for site in block)
        scramblers = dataset.scramblers[:, columns]
        outcomes = dataset.outcomes[:, columns]
        if basis.size <= max_block:
            table = table_cache().get_or_build(
                (basis.key(), letters), lambda: estimation_service.block_table(basis, letters, max_block)
            )
            values *= estimation_service.dense_block_values(table, scramblers, outcomes)
        else:
            values *= estimation_service.symplectic_block_value(basis, letters, scramblers, outcomes)
    return values


def shot_value(
    pauli: PauliString, snapshot: Snapshot, dataset: SnapshotDataset, channel: Optional[ShadowChannel] = None
) -> ShotValue:
    """Value of one snapshot recorded under ``dataset``'s protocol."""
    if snapshot.protocol_id != dataset.protocol_id:
        raise EstimationError("Snapshot belongs to another protocol", {"snapshot": snapshot.protocol_id})
    single = SnapshotDataset.from_snapshots(dataset.spec, dataset.master_seed, [snapshot], {})
    return ShotValue(value=float(shot_values(pauli, single, channel)[0]))


def estimate(
    pauli: PauliString, dataset: SnapshotDataset, channel: Optional[ShadowChannel] = None, groups: int = 1
) -> Estimate:
    return estimation_service.aggregate(shot_values(pauli, dataset, channel), groups)


def second_moment(pauli: PauliString, dataset: SnapshotDataset, channel: Optional[ShadowChannel] = None) -> Estimate:
    """Empirical mean of the squared shot values with its standard error."""
    return estimation_service.second_moment(shot_values(pauli, dataset, channel))


def hit_frequency(pauli: PauliString, dataset: SnapshotDataset, channel: Optional[ShadowChannel] = None) -> float:
    values = shot_values(pauli, dataset, channel)
    return float(np.count_nonzero(values)) / float(values.shape[0])


def exact_expectation(state: Optional[QuantumState], pauli: PauliString) -> Optional[float]:
    """Reference value when it is cheap to compute, else None."""
    if state is None or state.num_qubits > DENSE_UNITARY_QUBIT_LIMIT:
        return None
    try:
        return expectation_value(state, pauli)
    except ShadowsError:
        return None


def best_protocol(
    pauli: PauliString, channels: Sequence[ShadowChannel], label: Optional[str] = None
) -> Tuple[Optional[int], ShadowNorm]:
    """Index of the channel with the smallest finite norm (first on ties) and that norm."""
    best: Optional[int] = None
    best_norm = ShadowNorm.unlearnable(label or pauli.label())
    for index, channel in enumerate(channels):
        if pauli.num_qubits != channel.spec.num_qubits:
            continue
        norm = channel_norm_sq(pauli, channel, label)
        if norm.value is None:
            continue
        if best_norm.value is None or norm.value < best_norm.value:
            best, best_norm = index, norm
    return best, best_norm


def estimate_set(
    operators: OperatorSet,
    datasets: Sequence[SnapshotDataset],
    channels: Optional[Sequence[Optional[ShadowChannel]]] = None,
    groups: int = 1,
    state: Optional[QuantumState] = None,
) -> List[EstimateRow]:
    """
    Estimate every operator from the dataset whose protocol gives it the smallest norm.

    Ties go to the first dataset. Operators no dataset can learn get an
    UNLEARNABLE row.
    """
    if not datasets:
        raise EstimationError("estimate_set needs at least one dataset")
    resolved = [
        _channel_for(dataset, channel)
        for dataset, channel in zip(datasets, channels if channels is not None else [None] * len(datasets))
    ]
    rows: List[EstimateRow] = []
    for label, pauli in operators.items():
        best, norm = best_protocol(pauli, resolved, label)
        if best is None or norm.value is None:
            logger.debug("operator %s is unlearnable under every protocol", label)
            rows.append(EstimateRow.unlearnable(label))
            continue
        groups_used = min(groups, datasets[best].shots)
        rows.append(
            EstimateRow(
                label=label,
                protocol_id=datasets[best].protocol_id,
                estimate=estimate(pauli, datasets[best], resolved[best], groups_used),
                norm_sq=norm.value,
                exact=exact_expectation(state, pauli),
            )
        )
    return rows
