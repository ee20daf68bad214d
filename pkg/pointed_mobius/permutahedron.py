"""Ordered set partitions and the face poset of the permutahedron.

``Q_p`` is the poset of ordered set partitions of ``{1..p}`` under merging
of adjacent blocks, with a minimum adjoined. For a knapsack partition
``lambda = (lambda_1, ..., lambda_p)`` the filter ``R`` of ``Q_p`` keeps the
ordered partitions in which, whenever ``lambda_i = lambda_j`` with
``i < j``, the block of ``i`` is the block of ``j`` or comes before it. The
map ``f`` sending blocks to their ``lambda``-sums identifies ``R`` with the
compositions of pointed part ``m`` above ``{lambda, m}``; faces whose blocks
hold two equal values are boundary faces.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from .config import get_bounds
from .exceptions import (
    ConstructionMismatch,
    InvalidInput,
    NotInIdeal,
    NotKnapsackInput,
    OutOfRange,
    SizeMismatch,
)
from .knapsack import is_knapsack, unique_decomposition
from .pointed_structures import PointedComposition, PointedIntegerPartition, build_I
from .poset_core import BOTTOM, FinitePoset, PosetFilter

logger = logging.getLogger(__name__)

BOUNDARY_COLOR = "lightcoral"
INTERIOR_COLOR = "lightblue"


@dataclass(frozen=True)
class OrderedSetPartition:
    """Ordered list of disjoint non-empty blocks covering ``{1..p}``."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(block)) for block in self.blocks)
        if any(not block for block in blocks):
            raise InvalidInput("ordered set partition blocks must be non-empty")
        members = sorted(x for block in blocks for x in block)
        if members != list(range(1, len(members) + 1)):
            raise InvalidInput(f"blocks {blocks} do not partition 1..{len(members)}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def p(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_index(self) -> Dict[int, int]:
        return {x: k for k, block in enumerate(self.blocks) for x in block}

    @property
    def key(self) -> str:
        return "".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)

    def __str__(self) -> str:
        return self.key


def build_Q(p: int) -> FinitePoset:
    """Ordered set partitions of ``{1..p}`` under adjacent-block merging, with a minimum.

    Raises:
        OutOfRange: If ``p < 1``
        BoundExceeded: If ``p`` is above ``q_max``
    """
    if p < 1:
        raise OutOfRange(f"p must be at least 1, got {p}")
    get_bounds().require("q_max", p)
    return _build_Q(p)


@lru_cache(maxsize=None)
def _build_Q(p: int) -> FinitePoset:
    elements: List[OrderedSetPartition] = []
    for partition in multiset_partitions(list(range(1, p + 1))):
        for order in permutations(partition):
            elements.append(OrderedSetPartition(tuple(tuple(block) for block in order)))
    elements.sort(key=lambda w: (-len(w.blocks), w.blocks))

    covers = []
    for omega in elements:
        blocks = omega.blocks
        for k in range(len(blocks) - 1):
            merged = blocks[:k] + (blocks[k] + blocks[k + 1],) + blocks[k + 2 :]
            covers.append((omega.key, OrderedSetPartition(merged).key))

    poset = FinitePoset(
        [omega.key for omega in elements],
        covers,
        name=f"Q_{p}",
        payloads={omega.key: omega for omega in elements},
        metadata={"family": "Q", "p": p},
    ).adjoin_bottom()
    logger.info(f"Built Q_{p} with {len(poset) - 1} ordered set partitions")
    return poset


def verify_eulerian(p: int) -> bool:
    """Check ``mu(x, y) = (-1)**(rank(y) - rank(x))`` on every interval of ``Q_p``.

    Raises:
        BoundExceeded: If ``p`` is above ``eulerian_q_max``
    """
    get_bounds().require("eulerian_q_max", p)
    poset = build_Q(p)
    ranks = np.array([poset.rank(x) for x in poset], dtype=np.int64)
    comparable = poset.zeta_matrix().astype(bool)
    expected = np.where((ranks[None, :] - ranks[:, None]) % 2, -1, 1)
    mobius = poset.mobius_matrix()
    mismatches = np.argwhere(comparable & (mobius != expected))
    if mismatches.size:
        i, j = mismatches[0]
        logger.warning(
            f"Q_{p} is not Eulerian at [{poset.elements[i]}, {poset.elements[j]}]: "
            f"mu = {mobius[i, j]}, expected {expected[i, j]}"
        )
        return False
    return True


def _ordered_partition(poset: FinitePoset, label: str) -> OrderedSetPartition:
    return poset.payload(label)


def _respects_ties(omega: OrderedSetPartition, parts: Sequence[int]) -> bool:
    index = omega.block_index()
    p = len(parts)
    return all(
        index[i] <= index[j]
        for i in range(1, p + 1)
        for j in range(i + 1, p + 1)
        if parts[i - 1] == parts[j - 1]
    )


def build_R(parts: Sequence[int]) -> PosetFilter:
    """Filter of ``Q_p`` where tied values of ``parts`` keep their index order across blocks.

    Raises:
        OutOfRange: If ``parts`` is empty
        ConstructionMismatch: If the selected set is not upward closed
    """
    poset = build_Q(len(parts))
    members = frozenset(
        label
        for label in poset
        if label != BOTTOM and _respects_ties(_ordered_partition(poset, label), parts)
    )
    result = PosetFilter(poset, members)
    if not result.is_upward_closed():
        raise ConstructionMismatch(f"R({tuple(parts)}) is not upward closed")
    return result


def _check_size(omega: OrderedSetPartition, parts: Sequence[int]) -> None:
    if omega.p != len(parts):
        raise SizeMismatch(f"ordered partition of {omega.p} points against {len(parts)} parts")


def iso_f(omega: OrderedSetPartition, parts: Sequence[int], pointed: int) -> PointedComposition:
    """Block sums of ``omega`` under ``parts`` followed by the pointed part."""
    _check_size(omega, parts)
    return PointedComposition(
        tuple(sum(parts[i - 1] for i in block) for block in omega.blocks), pointed
    )


def is_boundary(omega: OrderedSetPartition, parts: Sequence[int]) -> bool:
    """True iff some block of ``omega`` holds two indices with equal values."""
    _check_size(omega, parts)
    for block in omega.blocks:
        values = [parts[i - 1] for i in block]
        if len(set(values)) != len(values):
            return True
    return False


def ordered_partition_for(
    composition: PointedComposition, parts: Sequence[int], pointed: int
) -> OrderedSetPartition:
    """The member of ``R`` that ``iso_f`` sends to ``composition``.

    Each entry decomposes uniquely into parts; tied indices are handed out in
    increasing order from block to block.

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
        NotInIdeal: If the entries do not split ``parts`` or the pointed part differs
    """
    if composition.pointed != pointed:
        raise NotInIdeal(f"{composition} does not have pointed part {pointed}")
    free: Dict[int, List[int]] = {}
    for i, value in enumerate(parts, start=1):
        free.setdefault(value, []).append(i)
    blocks = []
    for entry in composition.interior:
        decomposition = unique_decomposition(entry, parts)
        if decomposition is None:
            raise NotInIdeal(f"entry {entry} of {composition} is not a sum of parts of {tuple(parts)}")
        block = []
        for value in decomposition:
            if not free.get(value):
                raise NotInIdeal(f"entries of {composition} do not split {tuple(parts)}")
            block.append(free[value].pop(0))
        blocks.append(tuple(block))
    if any(free.values()):
        raise NotInIdeal(f"entries of {composition} do not use all of {tuple(parts)}")
    return OrderedSetPartition(tuple(blocks))


def mu_via_gamma(parts: Sequence[int], pointed: int, composition: PointedComposition) -> int:
    """``mu(0, c)`` in the composition poset over ``{parts, pointed}`` read off the face structure.

    Zero when ``c`` has a larger pointed part or lies on a boundary face,
    otherwise ``(-1)**(p - k)`` with ``k`` the number of entries of ``c``
    (pointed part included).

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
        NotInIdeal: If ``c`` lies outside the restricted composition poset
    """
    if not is_knapsack(parts).is_knapsack:
        raise NotKnapsackInput(f"{tuple(parts)} is not a knapsack partition")
    n = sum(parts) + pointed
    if composition.n != n:
        raise NotInIdeal(f"{composition} is a composition of {composition.n}, not {n}")
    if composition.pointed < pointed:
        raise NotInIdeal(f"{composition} has pointed part below {pointed}")
    if composition.pointed > pointed:
        lattice = build_I(n)
        generator = PointedIntegerPartition(tuple(parts), pointed).key
        own_type = PointedIntegerPartition(composition.interior, composition.pointed).key
        if not lattice.leq(generator, own_type):
            raise NotInIdeal(f"type of {composition} is not above {{{generator}}}")
        return 0
    omega = ordered_partition_for(composition, parts, pointed)
    if is_boundary(omega, parts):
        return 0
    return -1 if (len(parts) - composition.num_parts) % 2 else 1


def face_colors(parts: Sequence[int]) -> Dict[str, str]:
    """DOT fill colors for the members of ``R``: boundary faces and interior faces."""
    region = build_R(parts)
    return {
        label: BOUNDARY_COLOR if is_boundary(_ordered_partition(region.parent, label), parts) else INTERIOR_COLOR
        for label in region
    }
