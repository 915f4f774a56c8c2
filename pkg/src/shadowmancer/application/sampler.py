"""Randomized block measurements of a state: (state, protocol, seed) -> snapshots."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..domain.model.config_manager import ConfigManager
from ..domain.model.errors import DatasetError, SimulationGuardError
from ..domain.model.protocol_spec import ProtocolSpec
from ..domain.model.quantum_state import QuantumState
from ..domain.model.snapshot import Snapshot, SnapshotDataset
from ..domain.service.clifford_group import GROUP_ORDER
from ..domain.service.seeding import shot_seed, shot_seeds, uniform_draws
from ..infrastructure.factory.backend_factory import BackendFactory

logger = logging.getLogger(__name__)


def draw_scramblers(spec: ProtocolSpec, seeds: np.ndarray) -> np.ndarray:
    """Clifford indices from draw counters ``0..N-1``; unscrambled sites stay at 0."""
    n = spec.num_qubits
    seeds = np.asarray(seeds, dtype=np.uint64)
    draws = uniform_draws(seeds, np.arange(n, dtype=np.uint64))
    indices = np.minimum((draws * GROUP_ORDER).astype(np.int64), GROUP_ORDER - 1)
    scramblers = np.zeros((seeds.shape[0], n), dtype=np.uint8)
    sites = list(spec.scrambled_sites())
    scramblers[:, sites] = indices[:, sites]
    return scramblers


def _factory(factory: Optional[BackendFactory]) -> BackendFactory:
    if factory is not None:
        return factory
    limit = ConfigManager().get_setting("sampling.dense_max_qubits", 24)
    return BackendFactory(dense_max_qubits=int(limit or 24))


def sample_snapshot(
    state: QuantumState,
    spec: ProtocolSpec,
    seed: int,
    shot_index: int = 0,
    factory: Optional[BackendFactory] = None,
    backend_name: Optional[str] = None,
) -> Snapshot:
    """One measurement round driven entirely by ``seed``."""
    backend = _factory(factory).select(state, spec, backend_name)
    seeds = np.array([seed], dtype=np.uint64)
    scramblers = draw_scramblers(spec, seeds)
    outcomes = backend.sample_outcomes(state, spec, scramblers, seeds)
    return Snapshot(
        shot_index=shot_index,
        shot_seed=int(seed),
        protocol_id=spec.protocol_id,
        scrambler_indices=tuple(int(v) for v in scramblers[0]),
        outcome_bits=tuple(int(v) for v in outcomes[0]),
    )


def sample_dataset(
    state: QuantumState,
    spec: ProtocolSpec,
    shots: int,
    master_seed: int,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    factory: Optional[BackendFactory] = None,
    backend_name: Optional[str] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> SnapshotDataset:
    """
    Sample ``shots`` rounds; shot ``i`` uses ``shot_seed(master_seed, i)``.

    Chunks are cut from ``sampling.chunk_size`` alone, so the dataset does not
    depend on ``workers``.

    Args:
        state: Input state
        spec: Measurement protocol
        shots: Number of rounds, at least 1
        master_seed: Seed of the whole dataset
        workers: Thread count; defaults to ``ConfigManager().worker_count()``
        chunk_size: Shots per chunk; defaults to ``sampling.chunk_size``

    Returns:
        SnapshotDataset sorted by shot index
    """
    if shots < 1:
        raise DatasetError("A dataset needs at least one shot", {"shots": shots})
    if state.num_qubits != spec.num_qubits:
        raise SimulationGuardError(
            "State and protocol sizes differ", {"state": state.num_qubits, "protocol": spec.num_qubits}
        )
    config = ConfigManager()
    workers = max(1, workers if workers is not None else config.worker_count())
    chunk_size = max(1, int(chunk_size or config.get_setting("sampling.chunk_size", 4096) or 4096))
    backend = _factory(factory).select(state, spec, backend_name)

    indices = np.arange(shots, dtype=np.int64)
    seeds = shot_seeds(master_seed, indices)
    bounds: List[Tuple[int, int]] = [(start, min(shots, start + chunk_size)) for start in range(0, shots, chunk_size)]

    def run(bound: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
        start, stop = bound
        chunk_seeds = seeds[start:stop]
        scramblers = draw_scramblers(spec, chunk_seeds)
        return scramblers, backend.sample_outcomes(state, spec, scramblers, chunk_seeds)

    if workers == 1 or len(bounds) == 1:
        results = [run(bound) for bound in bounds]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(bounds))) as executor:
            results = list(executor.map(run, bounds))

    info: Dict[str, Any] = {"preset": state.preset, "num_qubits": state.num_qubits, "backend": backend.name}
    info.update(metadata or {})
    logger.info("sampled %d shots of %s with %s backend", shots, spec.protocol_id, backend.name)
    return SnapshotDataset.from_arrays(
        spec,
        master_seed,
        indices,
        np.concatenate([scramblers for scramblers, _ in results]),
        np.concatenate([outcomes for _, outcomes in results]),
        info,
    )


def replay_snapshot(state: QuantumState, spec: ProtocolSpec, master_seed: int, shot_index: int) -> Snapshot:
    """Regenerate one shot of a dataset on its own."""
    return sample_snapshot(state, spec, shot_seed(master_seed, shot_index), shot_index)
