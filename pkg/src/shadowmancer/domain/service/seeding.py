"""Counter-based per-shot randomness.

Every shot owns a 64-bit seed derived from ``(master_seed, shot_index)`` with a
splitmix64 avalanche. Draw ``k`` of a shot is ``mix64(seed + (k + 1) * GOLDEN)``,
so any shot can be regenerated alone and the stream does not depend on how shots
are split across workers.

Counter layout per shot on N qubits: draws ``0..N-1`` pick scramblers, draws
``N..2N-1`` resolve measurement outcomes.
"""

from typing import Union

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB

_GOLDEN = np.uint64(GOLDEN)
_MIX_1 = np.uint64(MIX_1)
_MIX_2 = np.uint64(MIX_2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_UNIT = 1.0 / float(1 << 53)

SeedArray = Union[np.ndarray, int]


def mix64(value: int) -> int:
    z = value & MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


def mix64_array(values: np.ndarray) -> np.ndarray:
    z = np.asarray(values, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _MIX_1
        z = (z ^ (z >> _S27)) * _MIX_2
    return z ^ (z >> _S31)


def shot_seed(master_seed: int, shot_index: int) -> int:
    return mix64(mix64(master_seed & MASK64) ^ (shot_index & MASK64))


def shot_seeds(master_seed: int, shot_indices: np.ndarray) -> np.ndarray:
    base = np.uint64(mix64(master_seed & MASK64))
    return mix64_array(np.asarray(shot_indices, dtype=np.uint64) ^ base)


def uniform_draws(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1) of shape ``seeds.shape + counters.shape``."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        offsets = (counters + np.uint64(1)) * _GOLDEN
        states = seeds.reshape(seeds.shape + (1,) * counters.ndim) + offsets
    return (mix64_array(states) >> _S11).astype(np.float64) * _UNIT


def uniform_draw(seed: int, counter: int) -> float:
    return (mix64((seed + (counter + 1) * GOLDEN) & MASK64) >> 11) * _UNIT
