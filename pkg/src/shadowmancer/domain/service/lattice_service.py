"""Coverings and operator families for the 1D chain and the honeycomb torus.

Honeycomb indexing: unit cell ``(r, c)`` of an ``L x L`` torus holds sublattice A at
qubit ``2 (r L + c)`` and sublattice B at the next index. Site ``A(r, c)`` bonds to
``B(r, c)``, ``B(r, c - 1)`` and ``B(r - 1, c)``. Hexagon ``(r, c)`` is the cycle
``A(r,c) B(r,c) A(r,c+1) B(r-1,c+1) A(r-1,c+1) B(r-1,c)``.

Hexagons are three-coloured by ``(r - c) mod 3``. The covering of a given
orientation keeps the bonds shared by the two colour classes other than
``orientation``; those hexagons contain three dimers each, while hexagons of the
colour ``orientation`` are cut six times. The colouring closes on the torus only
when ``L`` is a multiple of 3.
"""

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..model.covering import Covering
from ..model.errors import CoveringError, PauliAlgebraError
from ..model.operator_set import OperatorSet
from ..model.pauli_string import PauliString

logger = logging.getLogger(__name__)

HEXAGON_WEIGHT = 6


def dimer_chain(num_qubits: int, parity: str = "even", periodic: bool = False) -> Covering:
    if num_qubits < 2:
        raise CoveringError("Chain needs at least two qubits", {"num_qubits": num_qubits})
    if parity not in ("even", "odd"):
        raise CoveringError("Parity must be 'even' or 'odd'", {"parity": parity})
    start = 0 if parity == "even" else 1
    blocks: List[Tuple[int, ...]] = [(site, site + 1) for site in range(start, num_qubits - 1, 2)]
    used = {site for block in blocks for site in block}
    leftover = [site for site in range(num_qubits) if site not in used]
    if periodic and len(leftover) == 2 and leftover == [0, num_qubits - 1]:
        return Covering.from_blocks(num_qubits, blocks + [(num_qubits - 1, 0)])
    head = [(site,) for site in leftover if site < start]
    tail = [(site,) for site in leftover if site >= start]
    return Covering.from_blocks(num_qubits, head + blocks + tail)


def n_mer_chain(num_qubits: int, block_size: int, offset: int = 0) -> Covering:
    if block_size < 1:
        raise CoveringError("Block size must be positive", {"block_size": block_size})
    if block_size > num_qubits:
        raise CoveringError("Block size exceeds chain length", {"block_size": block_size, "num_qubits": num_qubits})
    if not 0 <= offset < block_size:
        raise CoveringError("Offset must lie in [0, block_size)", {"offset": offset})
    blocks: List[Tuple[int, ...]] = [(site,) for site in range(offset)]
    site = offset
    while site + block_size <= num_qubits:
        blocks.append(tuple(range(site, site + block_size)))
        site += block_size
    blocks.extend((rest,) for rest in range(site, num_qubits))
    return Covering.from_blocks(num_qubits, blocks)


def _site_a(size: int, r: int, c: int) -> int:
    return 2 * ((r % size) * size + (c % size))


def _site_b(size: int, r: int, c: int) -> int:
    return _site_a(size, r, c) + 1


def hexagon_sites(size: int, r: int, c: int) -> List[int]:
    return [
        _site_a(size, r, c),
        _site_b(size, r, c),
        _site_a(size, r, c + 1),
        _site_b(size, r - 1, c + 1),
        _site_a(size, r - 1, c + 1),
        _site_b(size, r - 1, c),
    ]


def hexagon_colour(r: int, c: int) -> int:
    return (r - c) % 3


def _letter_assignment(letters: str, count: int) -> str:
    letters = letters.upper()
    if len(letters) == 1:
        return letters * count
    if len(letters) != count:
        raise PauliAlgebraError("Letter assignment must have one letter or one per site", {"letters": letters})
    return letters


def honeycomb_plaquettes(size: int, letters: str = "Z") -> OperatorSet:
    """All ``L^2`` hexagon operators; ``letters`` is one letter or six in cycle order."""
    if size < 2:
        raise CoveringError("Honeycomb torus needs L >= 2", {"L": size})
    num_qubits = 2 * size * size
    assignment = _letter_assignment(letters, HEXAGON_WEIGHT)
    operators = []
    labels = []
    for r in range(size):
        for c in range(size):
            sites = hexagon_sites(size, r, c)
            operators.append(PauliString.from_sparse(num_qubits, dict(zip(sites, assignment))))
            labels.append(f"hex({r},{c})")
    return OperatorSet.from_operators(operators, labels)


def honeycomb(size: int, orientation: int = 0, letters: str = "Z") -> Tuple[Covering, OperatorSet]:
    if size < 2:
        raise CoveringError("Honeycomb torus needs L >= 2", {"L": size})
    if orientation not in (0, 1, 2):
        raise CoveringError("Orientation must be 0, 1 or 2", {"orientation": orientation})
    if size % 3 != 0:
        raise CoveringError("Honeycomb covering needs L divisible by 3", {"L": size})
    blocks: List[Tuple[int, int]] = []
    for r in range(size):
        for c in range(size):
            # bond -> the two hexagons sharing it
            bonds: Dict[Tuple[int, int], Tuple[Tuple[int, int], Tuple[int, int]]] = {
                (_site_a(size, r, c), _site_b(size, r, c)): ((r, c), (r + 1, c - 1)),
                (_site_a(size, r, c), _site_b(size, r, c - 1)): ((r, c - 1), (r + 1, c - 1)),
                (_site_a(size, r, c), _site_b(size, r - 1, c)): ((r, c), (r, c - 1)),
            }
            chosen = [
                bond
                for bond, (left, right) in bonds.items()
                if orientation not in (hexagon_colour(*left), hexagon_colour(*right))
            ]
            if len(chosen) != 1:
                raise CoveringError("Hexagon colouring is inconsistent", {"cell": (r, c)})
            blocks.append(chosen[0])
    covering = Covering.from_blocks(2 * size * size, blocks)
    logger.debug("honeycomb covering L=%d orientation=%d", size, orientation)
    return covering, honeycomb_plaquettes(size, letters)


def contiguous_strings(
    num_qubits: int,
    length: int,
    letters: str = "Z",
    periodic: bool = False,
    starts: Optional[Sequence[int]] = None,
) -> OperatorSet:
    """Length-``length`` strings on consecutive sites.

    ``letters`` is a single letter, one letter per site, or ``"all"`` for every
    assignment of X, Y, Z.
    """
    if not 1 <= length <= num_qubits:
        raise PauliAlgebraError("String length outside register", {"length": length, "num_qubits": num_qubits})
    if starts is None:
        starts = range(num_qubits) if periodic and length < num_qubits else range(num_qubits - length + 1)
    if letters.lower() == "all":
        assignments = ["".join(word) for word in itertools.product("XYZ", repeat=length)]
    else:
        assignments = [_letter_assignment(letters, length)]
    operators = []
    for start in starts:
        sites = [(start + offset) % num_qubits for offset in range(length)]
        if not periodic and sites[-1] != start + length - 1:
            raise PauliAlgebraError("String wraps around an open chain", {"start": start})
        for assignment in assignments:
            operators.append(PauliString.from_sparse(num_qubits, dict(zip(sites, assignment))))
    return OperatorSet.from_operators(operators)


def bond_correlators(covering: Covering, points: int, blocks: Optional[Sequence[int]] = None) -> OperatorSet:
    """Products of two-body terms on ``points`` distinct dimers, every letter choice."""
    candidates = [index for index, block in enumerate(covering.blocks) if len(block) == 2]
    if blocks is not None:
        candidates = [index for index in blocks if index in candidates]
    if points < 1 or points > len(candidates):
        raise PauliAlgebraError("Not enough dimers for the requested correlator", {"points": points})
    pair_letters = ["".join(word) for word in itertools.product("XYZ", repeat=2)]
    operators = []
    for chosen in itertools.combinations(candidates, points):
        for words in itertools.product(pair_letters, repeat=points):
            letters: Dict[int, str] = {}
            for index, word in zip(chosen, words):
                first, second = covering.blocks[index]
                letters[first] = word[0]
                letters[second] = word[1]
            operators.append(PauliString.from_sparse(covering.num_qubits, letters))
    return OperatorSet.from_operators(operators)
