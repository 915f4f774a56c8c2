"""Brute-force Clifford averages of block channel eigenvalues.

For a block basis ``{psi_b}`` (rows) and a Pauli ``P`` on the block the eigenvalue is

    lambda_P = E_K  2^-n  sum_b  <psi_b| K P K^dagger |psi_b>^2

with ``K`` ranging over products of single-qubit Cliffords on the scrambled sites.
Everything is evaluated densely, 24^n terms for ``n`` scrambled sites.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..model.channel_eigenvalues import ChannelEigenvalues, PatternLike, pattern_mask
from ..model.entanglement_feature import EntanglementFeature
from ..model.errors import OracleError
from ..model.protocol_spec import BlockBasis, ScrambleMode
from .circuit_service import basis_states
from .clifford_group import CODE_MATRICES, clifford_table

logger = logging.getLogger(__name__)

ORACLE_MAX_BLOCK = 3
ORTHONORMAL_TOLERANCE = 1e-10
_LETTER_CODES = {"I": 0, "X": 1, "Z": 2, "Y": 3}


def product_basis(block_size: int) -> np.ndarray:
    return np.eye(1 << block_size, dtype=complex)


def bell_basis() -> np.ndarray:
    """Rows Phi+, Phi-, Psi+, Psi-."""
    root = 1.0 / math.sqrt(2.0)
    return np.array(
        [[root, 0, 0, root], [root, 0, 0, -root], [0, root, root, 0], [0, root, -root, 0]],
        dtype=complex,
    )


def circuit_basis(basis: BlockBasis) -> np.ndarray:
    """States C^dagger|b> measured by the canonical circuit of ``basis``."""
    return basis_states(basis)


def measured_feature(states: np.ndarray) -> EntanglementFeature:
    return EntanglementFeature.from_basis(states)


def _check_basis(states: np.ndarray, max_block: int) -> int:
    dimension = states.shape[0]
    size = dimension.bit_length() - 1
    if states.ndim != 2 or states.shape != (dimension, dimension) or (1 << size) != dimension:
        raise OracleError("Basis must be a 2^n x 2^n array of rows", {"shape": list(states.shape)})
    if size > max_block:
        raise OracleError("Block too large for the Clifford average", {"n": size, "limit": max_block})
    gram = states.conj() @ states.T
    if not np.allclose(gram, np.eye(dimension), atol=ORTHONORMAL_TOLERANCE):
        raise OracleError("Basis is not orthonormal", {"n": size})
    return size


def _site_operators(code: int, scrambled: bool) -> np.ndarray:
    """Stack of U sigma U^dagger over the group, or sigma alone for a fixed site."""
    sigma = CODE_MATRICES[code]
    if not scrambled or code == 0:
        return sigma[None, :, :]
    unitaries = clifford_table().unitaries
    return np.einsum("cij,jk,clk->cil", unitaries, sigma, unitaries.conj())


def conjugated_operators(letters: str, scrambled_sites: frozenset) -> np.ndarray:
    """All K P K^dagger for the block Pauli ``letters``, first site most significant."""
    stack = np.ones((1, 1, 1), dtype=complex)
    for site, letter in enumerate(letters):
        local = _site_operators(_LETTER_CODES[letter], site in scrambled_sites)
        combined = np.einsum("aij,ckl->acikjl", stack, local)
        rows = stack.shape[1] * 2
        stack = combined.reshape(stack.shape[0] * local.shape[0], rows, rows)
    return stack


def oracle_block_eig(
    states: np.ndarray,
    pattern: PatternLike,
    letters: Optional[str] = None,
    scramble_mode: ScrambleMode = ScrambleMode.ALL_QUBITS,
    max_block: int = ORACLE_MAX_BLOCK,
) -> float:
    """Clifford-averaged eigenvalue of ``pattern`` for the basis given as rows.

    ``letters`` picks the Pauli realising the active sites (default ``Z`` everywhere);
    under ``ONE_PER_BLOCK`` only the first site is scrambled.
    """
    states = np.asarray(states, dtype=complex)
    size = _check_basis(states, max_block)
    mask = pattern_mask(pattern, size)
    if mask == 0:
        return 1.0
    active = [j for j in range(size) if (mask >> j) & 1]
    if letters is None:
        letters = "Z" * len(active)
    letters = letters.upper()
    if len(letters) != len(active) or any(letter not in "XYZ" for letter in letters):
        raise OracleError("One of X, Y, Z per active site is required", {"letters": letters})
    block_letters = ["I"] * size
    for site, letter in zip(active, letters):
        block_letters[site] = letter
    scrambled = frozenset(range(size)) if scramble_mode == ScrambleMode.ALL_QUBITS else frozenset({0})
    operators = conjugated_operators("".join(block_letters), scrambled)
    elements = np.einsum("bi,cij,bj->cb", states.conj(), operators, states)
    value = float(np.mean(np.abs(elements) ** 2))
    logger.debug("oracle n=%d pattern=%s letters=%s value=%r", size, pattern, letters, value)
    return value


def oracle_block_table(
    states: np.ndarray,
    scramble_mode: ScrambleMode = ScrambleMode.ALL_QUBITS,
    max_block: int = ORACLE_MAX_BLOCK,
) -> ChannelEigenvalues:
    """Every pattern of the block evaluated by :func:`oracle_block_eig`."""
    states = np.asarray(states, dtype=complex)
    size = _check_basis(states, max_block)
    values = [oracle_block_eig(states, mask, None, scramble_mode, max_block) for mask in range(1 << size)]
    return ChannelEigenvalues.from_values(size, [0.0 if abs(v) < 1e-12 else v for v in values])
