"""Permutations, descent sets and the beta statistic.

``beta`` counts permutations by exact descent set. Three routes are provided
and must always agree: filtering a full enumeration of ``S_n``, inclusion and
exclusion over multinomial coefficients, and counting permutations of
``S_{n+1}`` that fix their last letter.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import AbstractSet, Dict, FrozenSet, List, Sequence, Tuple

from .config import get_bounds
from .exceptions import MalformedPermutation, OutOfRange, ParseError, SumMismatch, checked_int
from .pointed_structures import PointedComposition

logger = logging.getLogger(__name__)

DescentComposition = Tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    """One-line notation ``tau(1), ..., tau(n)`` of a bijection of ``{1..n}``."""

    word: Tuple[int, ...]

    def __post_init__(self) -> None:
        word = tuple(self.word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise MalformedPermutation(f"{word} is not a permutation of 1..{len(word)}")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse the canonical text form ``"3 1 2"``."""
        try:
            return cls(tuple(int(item) for item in text.split()))
        except ValueError as e:
            raise ParseError(f"cannot parse permutation '{text}'") from e

    @property
    def n(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.word)


def _descents(word: Sequence[int]) -> FrozenSet[int]:
    return frozenset(i + 1 for i in range(len(word) - 1) if word[i] > word[i + 1])


def descent_set(tau: Permutation) -> FrozenSet[int]:
    """Positions ``i`` in ``1..n-1`` with ``tau(i) > tau(i+1)``."""
    return _descents(tau.word)


def descent_set_to_composition(n: int, positions: AbstractSet[int]) -> DescentComposition:
    """Gaps between consecutive members of ``{0} | positions | {n}``.

    Raises:
        OutOfRange: If a position lies outside ``1..n-1``
    """
    ordered = sorted(positions)
    if ordered and (ordered[0] < 1 or ordered[-1] > n - 1):
        raise OutOfRange(f"descent positions {ordered} must lie in 1..{n - 1}")
    bounds = [0] + ordered + [n]
    return tuple(b - a for a, b in zip(bounds, bounds[1:])) if n else ()


def composition_to_descent_set(parts: Sequence[int]) -> FrozenSet[int]:
    """Partial sums of ``parts`` without the total."""
    sums = []
    total = 0
    for part in parts[:-1]:
        total += part
        sums.append(total)
    return frozenset(sums)


def descent_composition(tau: Permutation) -> DescentComposition:
    return descent_set_to_composition(tau.n, descent_set(tau))


def multinomial(n: int, parts: Sequence[int]) -> int:
    """``n! / (c_1! ... c_k!)``, the number of permutations with descents inside the partial sums.

    Raises:
        SumMismatch: If the parts do not sum to ``n``
        OutOfRange: If a part is negative
    """
    if any(part < 0 for part in parts):
        raise OutOfRange(f"multinomial parts must be non-negative, got {tuple(parts)}")
    if sum(parts) != n:
        raise SumMismatch(f"parts {tuple(parts)} sum to {sum(parts)}, not {n}")
    result = 1
    remaining = n
    for part in parts:
        result *= comb(remaining, part)
        remaining -= part
    return checked_int(result, f"multinomial({n}; {tuple(parts)})")


def enumerate_by_descent_composition(n: int) -> Dict[DescentComposition, int]:
    """Count all permutations of ``S_n`` by descent composition.

    Raises:
        BoundExceeded: If ``n`` is above ``enumeration_max``
    """
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    get_bounds().require("enumeration_max", n)
    return dict(_enumerate_by_descent_composition(n))


@lru_cache(maxsize=None)
def _enumerate_by_descent_composition(n: int) -> Tuple[Tuple[DescentComposition, int], ...]:
    counts: Counter = Counter()
    for word in permutations(range(1, n + 1)):
        counts[descent_set_to_composition(n, _descents(word))] += 1
    logger.debug(f"Enumerated S_{n}: {len(counts)} descent compositions")
    return tuple(sorted(counts.items()))


def _beta_by_enumeration(composition: PointedComposition) -> int:
    return enumerate_by_descent_composition(composition.n).get(composition.parts, 0)


def beta(composition: PointedComposition) -> int:
    """Number of permutations of ``S_n`` whose descent set is the partial-sum set of ``composition``.

    ``beta((0)) = 1``; a composition with at least two entries and pointed
    part 0 has ``beta = 0``. Small ``n`` is answered by enumeration, larger
    ``n`` by inclusion and exclusion.
    """
    if composition.is_zero():
        return 1
    if composition.pointed == 0:
        return 0
    bounds = get_bounds()
    if composition.n <= min(bounds.beta_enumeration_cutoff, bounds.enumeration_max):
        return _beta_by_enumeration(composition)
    return beta_by_inclusion_exclusion(composition)


def beta_by_inclusion_exclusion(composition: PointedComposition) -> int:
    """Signed sum of multinomials over the coarsenings of ``composition``.

    Each subset ``T`` of the partial sums contributes
    ``(-1)**(|S| - |T|) * multinomial(n, gaps of T)``. When the pointed part is
    0 the sum telescopes to 0.
    """
    n = composition.n
    sums = composition.partial_sums()
    total = 0
    for size in range(len(sums) + 1):
        sign = -1 if (len(sums) - size) % 2 else 1
        for subset in combinations(sums, size):
            bounds = (0,) + subset + (n,)
            gaps = [b - a for a, b in zip(bounds, bounds[1:])]
            total = checked_int(total + sign * multinomial(n, gaps), f"beta({composition})")
    return total


def beta_fixed_last(composition: PointedComposition) -> int:
    """Count ``tau`` in ``S_{n+1}`` with ``tau(n+1) = n+1`` and descent composition
    ``(c_1, ..., c_{k-1}, c_k + 1)``.

    Raises:
        BoundExceeded: If ``n`` is above ``enumeration_max``
    """
    n = composition.n
    get_bounds().require("enumeration_max", n)
    target = composition.interior + (composition.pointed + 1,)
    return dict(_fixed_last_counts(n)).get(target, 0)


@lru_cache(maxsize=None)
def _fixed_last_counts(n: int) -> Tuple[Tuple[DescentComposition, int], ...]:
    counts: Counter = Counter()
    for word in permutations(range(1, n + 1)):
        extended = word + (n + 1,)
        counts[descent_set_to_composition(n + 1, _descents(extended))] += 1
    return tuple(sorted(counts.items()))


def permutations_with_descent_set(n: int, positions: AbstractSet[int]) -> List[Permutation]:
    """All permutations of ``S_n`` with descent set exactly ``positions``, in lexicographic order.

    Raises:
        BoundExceeded: If ``n`` is above ``enumeration_max``
    """
    get_bounds().require("enumeration_max", n)
    target = frozenset(positions)
    return [Permutation(word) for word in permutations(range(1, n + 1)) if _descents(word) == target]
