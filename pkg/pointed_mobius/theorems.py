"""Möbius values of type-restricted pointed set partition posets.

Every closed form here is paired with the brute-force recursion on
``Pi_n(F) + 0``:

* ``mu_descent_formula`` sums ``(-1)**rho(c, 1) * mu(0, c) * beta(c)`` over the
  restricted composition poset ``C_n(F)``;
* ``mu_knapsack`` is ``(-1)**(p - 1)`` times the beta-sum over ``V`` when the
  filter is generated by a single knapsack partition;
* ``mu_r_divisible`` and ``mu_divisible_lattice`` cover filters generated by
  ``{r, ..., r, m}``;
* ``stirling2``/``eulerian`` feed the identity for filters bounded by the
  number of parts.
"""

import logging
from functools import lru_cache
from math import comb, factorial
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field

from .exceptions import (
    BoundExceeded,
    DivisibilityMismatch,
    EmptyFilter,
    MismatchedN,
    NotKnapsackInput,
    OutOfRange,
    checked_int,
    checked_sum,
)
from .knapsack import build_V, is_knapsack
from .perm_stats import beta, beta_fixed_last
from .pointed_structures import (
    PointedComposition,
    PointedIntegerPartition,
    build_C,
    build_Pi,
    r_divisible_generator,
    restrict_by_type,
)
from .poset_core import BOTTOM, PosetFilter

logger = logging.getLogger(__name__)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _check_filter(n: int, type_filter: PosetFilter) -> None:
    if not type_filter.members:
        raise EmptyFilter("the Möbius value of an empty filter is not defined")
    filter_n = type_filter.parent.metadata.get("n")
    if filter_n != n:
        raise MismatchedN(f"filter lives in I_{filter_n}, not I_{n}")


def mu_bruteforce(n: int, type_filter: PosetFilter) -> int:
    """``mu(0, 1)`` of ``Pi_n(F)`` with a minimum adjoined, by direct recursion.

    Raises:
        EmptyFilter: If ``F`` is empty
        BoundExceeded: If ``n`` is above ``pi_max``
    """
    _check_filter(n, type_filter)
    poset = restrict_by_type(build_Pi(n), type_filter).adjoin_bottom()
    top = poset.top()
    if top is None:
        raise OutOfRange(f"{poset.name} has no maximum")
    value = poset.mobius(BOTTOM, top)
    logger.debug(f"Brute-force mu over {len(poset)} elements: {value}")
    return value


class DescentTerm(BaseModel):
    """One summand ``sign * mu * beta`` of the descent formula."""

    composition: str
    sign: int
    mobius: int
    beta: int

    @computed_field  # type: ignore[prop-decorator]
    @property
    def value(self) -> int:
        return self.sign * self.mobius * self.beta


def descent_formula_terms(n: int, type_filter: PosetFilter) -> List[DescentTerm]:
    """Summands of the descent formula, one per composition of ``C_n(F)``.

    ``rho(c, 1)`` is the number of entries of ``c`` minus one; ``mu(0, c)`` is
    always computed by recursion on the restricted composition poset.

    Raises:
        EmptyFilter: If ``F`` is empty
        BoundExceeded: If ``n`` is above ``c_max``
    """
    _check_filter(n, type_filter)
    poset = restrict_by_type(build_C(n), type_filter).adjoin_bottom()
    row = poset.mobius_from(BOTTOM)
    terms = []
    for label in poset:
        if label == BOTTOM:
            continue
        composition: PointedComposition = poset.payload(label)
        mobius = row[label]
        terms.append(
            DescentTerm(
                composition=label,
                sign=_sign(composition.num_parts - 1),
                mobius=mobius,
                beta=beta(composition) if mobius else 0,
            )
        )
    return terms


def mu_descent_formula(n: int, type_filter: PosetFilter) -> int:
    """Möbius value of ``Pi_n(F) + 0`` through the descent formula over ``C_n(F)``."""
    terms = descent_formula_terms(n, type_filter)
    return checked_sum((term.value for term in terms), f"descent formula at n={n}")


mu_theorem1 = mu_descent_formula


def mu_r_divisible(n: int, r: int, m: int) -> int:
    """``(-1)**(p + 1) * beta(r, ..., r, m)`` for the filter generated by ``{r^p, m}``, ``n = r*p + m``.

    Raises:
        DivisibilityMismatch: If ``n - m`` is not a positive multiple of ``r``
    """
    generator = r_divisible_generator(n, r, m)
    p = len(generator.parts)
    return _sign(p + 1) * beta(PointedComposition(generator.parts, m))


def mu_divisible_lattice(n: int, r: int) -> int:
    """``(-1)**p`` times the permutations of ``S_n`` fixing ``n`` with descent set ``{r, 2r, ..., n - r}``.

    This is the Möbius value of the lattice of set partitions of an ``n``-set
    with block sizes divisible by ``r`` (minimum adjoined), ``n = r*p``.

    Raises:
        OutOfRange: If ``r < 2``
        DivisibilityMismatch: If ``n`` is not a positive multiple of ``r``
    """
    if r < 2:
        raise OutOfRange(f"r must be at least 2, got {r}")
    if n <= 0 or n % r:
        raise DivisibilityMismatch(f"n = {n} is not a positive multiple of r = {r}")
    p = n // r
    count = beta_fixed_last(PointedComposition((r,) * (p - 1), r - 1))
    return _sign(p) * count


def mu_knapsack(parts: List[int], pointed: int) -> int:
    """``(-1)**(p - 1)`` times the beta-sum over ``V(parts, pointed)``.

    Raises:
        NotKnapsackInput: If ``parts`` is not a knapsack partition
    """
    if not is_knapsack(parts).is_knapsack:
        raise NotKnapsackInput(f"{tuple(parts)} is not a knapsack partition")
    vset = build_V(parts, pointed)
    total = checked_sum((beta(c) for c in vset), f"knapsack sum for {tuple(parts)}")
    return _sign(len(parts) - 1) * total


@lru_cache(maxsize=None)
def _stirling2(n: int, j: int) -> int:
    if n == j:
        return 1
    if j == 0 or j > n:
        return 0
    return j * _stirling2(n - 1, j) + _stirling2(n - 1, j - 1)


@lru_cache(maxsize=None)
def _eulerian(n: int, j: int) -> int:
    if n == 0:
        return 1 if j == 0 else 0
    if j < 1 or j > n:
        return 0
    return j * _eulerian(n - 1, j) + (n - j + 1) * _eulerian(n - 1, j - 1)


def _check_range(n: int, j: int) -> None:
    if not 0 <= j <= n:
        raise OutOfRange(f"need 0 <= j <= n, got n={n}, j={j}")


def stirling2(n: int, j: int) -> int:
    """Set partitions of an ``n``-set into ``j`` blocks."""
    _check_range(n, j)
    return checked_int(_stirling2(n, j), f"S({n},{j})")


def eulerian(n: int, j: int) -> int:
    """Permutations of ``S_n`` with ``j - 1`` descents."""
    _check_range(n, j)
    return checked_int(_eulerian(n, j), f"A({n},{j})")


def mu_max_parts(n: int, k: int) -> int:
    """Möbius value of the filter of pointed partitions of ``n`` with at most ``k`` parts.

    ``-sum((-1)**(j-1) * (j-1)! * S(n+1, j) for j in 1..k)``.

    Raises:
        OutOfRange: Unless ``1 <= k <= n + 1``
    """
    if not 1 <= k <= n + 1:
        raise OutOfRange(f"need 1 <= k <= n + 1, got n={n}, k={k}")
    return -checked_sum(
        (_sign(j - 1) * factorial(j - 1) * stirling2(n + 1, j) for j in range(1, k + 1)),
        f"max-parts sum n={n}, k={k}",
    )


def eulerian_side(n: int, k: int) -> int:
    """``(-1)**k * sum(C(n-j, n-k) * A(n, j) for j in 1..k)``."""
    if not 1 <= k <= n:
        raise OutOfRange(f"need 1 <= k <= n, got n={n}, k={k}")
    return _sign(k) * checked_sum(
        (comb(n - j, n - k) * eulerian(n, j) for j in range(1, k + 1)),
        f"Eulerian sum n={n}, k={k}",
    )


def verify_eulerian_stirling(n: int, k: int) -> bool:
    """True iff the Stirling and Eulerian expressions for the max-parts filter agree."""
    left = mu_max_parts(n, k)
    right = eulerian_side(n, k)
    if left != right:
        logger.warning(f"Stirling/Eulerian mismatch at n={n}, k={k}: {left} != {right}")
    return left == right


def rank_selected_mobius(n: int, k: int, j: int) -> int:
    """``mu(0, c)`` for a composition with ``j`` entries when ``F`` allows at most ``k`` parts.

    ``(-1)**(k - j + 1) * C(n - j, n - k)``.

    Raises:
        OutOfRange: Unless ``1 <= j <= k <= n``
    """
    if not 1 <= j <= k <= n:
        raise OutOfRange(f"need 1 <= j <= k <= n, got n={n}, k={k}, j={j}")
    return _sign(k - j + 1) * comb(n - j, n - k)


class MobiusReport(BaseModel):
    """Möbius value of one filter computed by every applicable method."""

    n: int
    generators: List[str]
    value_bruteforce: Optional[int] = Field(None, serialization_alias="bruteforce")
    value_descent_formula: int = Field(serialization_alias="theorem1")
    value_knapsack: Optional[int] = Field(None, serialization_alias="knapsack")
    value_closed_form: Optional[int] = Field(None, serialization_alias="closed_form")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def agree(self) -> bool:
        values = {
            value
            for value in (
                self.value_bruteforce,
                self.value_descent_formula,
                self.value_knapsack,
                self.value_closed_form,
            )
            if value is not None
        }
        return len(values) == 1

    def to_dict(self) -> Dict[str, Any]:
        """Serialized form; ``closed_form`` appears only when it was computed."""
        exclude = {"value_closed_form"} if self.value_closed_form is None else set()
        return self.model_dump(by_alias=True, exclude=exclude)

    def to_json(self) -> str:
        exclude = {"value_closed_form"} if self.value_closed_form is None else set()
        return self.model_dump_json(by_alias=True, exclude=exclude, indent=2)


def compare_methods(
    n: int,
    type_filter: PosetFilter,
    *,
    closed_form: Optional[int] = None,
) -> MobiusReport:
    """Evaluate the brute force, the descent formula and, when it applies, the knapsack form.

    The knapsack form applies when the filter has a single generator whose
    parts form a knapsack partition. The brute force is skipped with a
    warning when ``n`` is above ``pi_max``.
    """
    _check_filter(n, type_filter)
    generators = type_filter.generators()
    bruteforce: Optional[int]
    try:
        bruteforce = mu_bruteforce(n, type_filter)
    except BoundExceeded as e:
        logger.warning(f"Skipping brute force: {e}")
        bruteforce = None

    knapsack: Optional[int] = None
    if len(generators) == 1:
        generator: PointedIntegerPartition = type_filter.parent.payload(generators[0])
        if is_knapsack(generator.parts).is_knapsack:
            knapsack = mu_knapsack(list(generator.parts), generator.pointed)

    report = MobiusReport(
        n=n,
        generators=generators,
        value_bruteforce=bruteforce,
        value_descent_formula=mu_descent_formula(n, type_filter),
        value_knapsack=knapsack,
        value_closed_form=closed_form,
    )
    level = logging.INFO if report.agree else logging.ERROR
    logger.log(level, f"Möbius report for n={n}, generators {generators}: agree={report.agree}")
    return report
