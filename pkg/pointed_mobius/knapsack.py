"""Knapsack partitions.

A multiset ``lambda`` with distinct values ``e_i`` of multiplicities ``m_i``
has at most ``prod(m_i + 1)`` distinct sub-multiset sums; it is a knapsack
partition when equality holds, i.e. every reachable sum has a unique
representation. This module recognizes knapsack partitions, builds the two
constructive families, lists the distinct-summand compositions ``V`` and runs
a census over all partitions of ``n``.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, computed_field
from sympy import isprime
from sympy.utilities.iterables import multiset_partitions, partitions

from .config import get_bounds
from .exceptions import (
    ConditionViolated,
    ConstructionMismatch,
    InvalidInput,
    NotKnapsackInput,
    NotPrime,
    OutOfRange,
    SizeMismatch,
    SumTooLarge,
)
from .pointed_structures import PointedComposition

logger = logging.getLogger(__name__)

Multiset = Tuple[int, ...]


class KnapsackCertificate(BaseModel):
    """Outcome of knapsack recognition."""

    partition: str
    parts: List[int]
    pointed: Optional[int] = None
    distinct_sums: int
    capacity: int
    is_knapsack: bool
    collision: Optional[Tuple[List[int], List[int]]] = None


class CensusRow(BaseModel):
    partition: str
    distinct_sums: int
    capacity: int
    is_knapsack: bool


class KnapsackCensus(BaseModel):
    """All partitions of ``n`` in reverse-lexicographic order with their verdicts."""

    n: int
    rows: List[CensusRow]

    @property
    def knapsack_rows(self) -> List[CensusRow]:
        return [row for row in self.rows if row.is_knapsack]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def count(self) -> int:
        return len(self.knapsack_rows)


def _validate(parts: Sequence[int]) -> Multiset:
    values = tuple(parts)
    if any(part < 1 for part in values):
        raise InvalidInput(f"partition parts must be positive, got {values}")
    return values


def _sub_multisets(parts: Multiset) -> Iterator[Tuple[int, Tuple[Tuple[int, int], ...]]]:
    """Yield ``(sum, choice)`` for every sub-multiset, ``choice`` pairing each value with a count."""
    multiplicities = sorted(Counter(parts).items())
    values = [value for value, _ in multiplicities]
    for counts in product(*(range(count + 1) for _, count in multiplicities)):
        yield sum(v * c for v, c in zip(values, counts)), tuple(zip(values, counts))


def _expand(choice: Tuple[Tuple[int, int], ...]) -> List[int]:
    return sorted((value for value, count in choice for _ in range(count)), reverse=True)


def first_collision(parts: Sequence[int]) -> Optional[Tuple[List[int], List[int]]]:
    """Two distinct sub-multisets with equal sums, or ``None`` for a knapsack partition.

    Stops at the first repeated sum.
    """
    seen: Dict[int, Tuple[Tuple[int, int], ...]] = {}
    for total, choice in _sub_multisets(_validate(parts)):
        if total in seen:
            return _expand(seen[total]), _expand(choice)
        seen[total] = choice
    return None


def is_knapsack(parts: Sequence[int], pointed: Optional[int] = None) -> KnapsackCertificate:
    """Compare the number of distinct sub-multiset sums with ``prod(m_i + 1)``.

    Args:
        parts: The multiset ``lambda``
        pointed: Pointed part carried along into the certificate

    Returns:
        Certificate; ``collision`` holds a witness when recognition fails
    """
    values = _validate(parts)
    sums = {total for total, _ in _sub_multisets(values)}
    capacity = prod(count + 1 for count in Counter(values).values())
    knapsack = len(sums) == capacity
    ordered = sorted(values, reverse=True)
    label = ",".join(map(str, ordered)) + ("" if pointed is None else f"|{pointed}")
    return KnapsackCertificate(
        partition=label,
        parts=ordered,
        pointed=pointed,
        distinct_sums=len(sums),
        capacity=capacity,
        is_knapsack=knapsack,
        collision=None if knapsack else first_collision(values),
    )


def _require_knapsack(parts: Sequence[int]) -> None:
    certificate = is_knapsack(parts)
    if not certificate.is_knapsack:
        raise NotKnapsackInput(
            f"{{{certificate.partition}}} is not a knapsack partition "
            f"({certificate.distinct_sums} distinct sums, capacity {certificate.capacity})"
        )


def unique_decomposition(total: int, parts: Sequence[int]) -> Optional[List[int]]:
    """The unique sub-multiset of a knapsack partition summing to ``total``, or ``None``.

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
    """
    _require_knapsack(parts)
    for value, choice in _sub_multisets(_validate(parts)):
        if value == total:
            return _expand(choice)
    return None


def family_weighted(
    values: Sequence[int], multiplicities: Sequence[int], pointed: Optional[int] = None
) -> KnapsackCertificate:
    """Build ``{e_1^m_1, ..., e_q^m_q}`` under ``sum(m_i * e_i for i < j) <= e_j``.

    Raises:
        ConditionViolated: If the inequality fails for some ``j``
        ConstructionMismatch: If the inequality holds but recognition fails
    """
    if len(values) != len(multiplicities):
        raise SizeMismatch(f"{len(values)} values but {len(multiplicities)} multiplicities")
    if any(v < 1 for v in values) or any(m < 1 for m in multiplicities):
        raise InvalidInput("values and multiplicities must be positive")
    weight = 0
    for j, (value, count) in enumerate(zip(values, multiplicities)):
        if j and weight > value:
            raise ConditionViolated(f"sum of m_i*e_i below e_{j + 1} is {weight} > {value}")
        weight += count * value

    parts = [value for value, count in zip(values, multiplicities) for _ in range(count)]
    certificate = is_knapsack(parts, pointed)
    if not certificate.is_knapsack:
        left, right = certificate.collision or ([], [])
        logger.warning(
            f"Weighted construction {{{certificate.partition}}} satisfies its condition "
            f"but is not knapsack: {left} and {right} have equal sums"
        )
        raise ConstructionMismatch(
            f"{{{certificate.partition}}} meets the weighted condition but fails recognition"
        )
    return certificate


def family_modular(parts: Sequence[int], modulus: int, multiplier: int) -> KnapsackCertificate:
    """Scale a knapsack partition by ``multiplier`` modulo a prime larger than its sum.

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
        NotPrime: If ``modulus`` is not prime
        SumTooLarge: If ``modulus`` does not exceed the sum of ``parts``
        OutOfRange: Unless ``1 <= multiplier < modulus``
    """
    _require_knapsack(parts)
    if not isprime(modulus):
        raise NotPrime(f"{modulus} is not prime")
    if modulus <= sum(parts):
        raise SumTooLarge(f"modulus {modulus} must exceed the partition sum {sum(parts)}")
    if not 1 <= multiplier < modulus:
        raise OutOfRange(f"multiplier must satisfy 1 <= j < {modulus}, got {multiplier}")
    scaled = [(multiplier * part) % modulus for part in parts]
    certificate = is_knapsack(scaled)
    if not certificate.is_knapsack:
        raise ConstructionMismatch(f"modular image {{{certificate.partition}}} fails recognition")
    return certificate


@dataclass(frozen=True)
class VSet:
    """Compositions ``(c_1, ..., c_{k-1}, m)`` whose entries split ``lambda`` into distinct-valued blocks."""

    parts: Multiset
    pointed: int
    members: Tuple[PointedComposition, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[PointedComposition]:
        return iter(self.members)

    def __contains__(self, composition: object) -> bool:
        return composition in self.members

    def keys(self) -> List[str]:
        return [member.key for member in self.members]


def build_V(parts: Sequence[int], pointed: int) -> VSet:
    """List the compositions with pointed part ``pointed`` built from distinct-valued blocks of ``parts``.

    Every set partition of the index set whose blocks hold pairwise different
    values is taken in every block order; block sums give the interior.

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
    """
    values = _validate(parts)
    if pointed < 0:
        raise OutOfRange(f"pointed part must be non-negative, got {pointed}")
    _require_knapsack(values)
    found = set()
    if not values:
        found.add(PointedComposition((), pointed))
    else:
        for blocks in multiset_partitions(list(range(len(values)))):
            sums = []
            for block in blocks:
                block_values = [values[i] for i in block]
                if len(set(block_values)) != len(block_values):
                    break
                sums.append(sum(block_values))
            else:
                for order in permutations(sums):
                    found.add(PointedComposition(tuple(order), pointed))
    members = tuple(sorted(found, key=lambda c: (-c.num_parts, c.interior)))
    logger.debug(f"V({values}, {pointed}) has {len(members)} members")
    return VSet(values, pointed, members)


def census(n: int) -> KnapsackCensus:
    """Run recognition on every partition of ``n`` in reverse-lexicographic order.

    Raises:
        BoundExceeded: If ``n`` is above ``census_max``
    """
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    get_bounds().require("census_max", n)
    rows = []
    for multiplicities in partitions(n):
        parts = sorted(
            (part for part, count in dict(multiplicities).items() for _ in range(count)), reverse=True
        )
        certificate = is_knapsack(parts)
        rows.append(
            CensusRow(
                partition=certificate.partition,
                distinct_sums=certificate.distinct_sums,
                capacity=certificate.capacity,
                is_knapsack=certificate.is_knapsack,
            )
        )
    result = KnapsackCensus(n=n, rows=rows)
    logger.info(f"Census of {n}: {result.count} knapsack partitions out of {len(rows)}")
    return result
