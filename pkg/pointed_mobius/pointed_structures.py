"""Pointed integer partitions, pointed set partitions and pointed compositions.

Defines the three element kinds, their canonical text keys, the builders for
the posets they form under merging, the type maps sending set partitions and
compositions to pointed integer partitions, and restriction of a poset to the
elements whose type lies in a filter of pointed integer partitions.

Canonical keys:

* pointed integer partition: parts non-increasing, then ``|m`` (``"2,1,1|0"``)
* pointed set partition: blocks sorted by minimum, then the zero block
  (``"{1,3}{2}|{4,5}"``; an empty zero block is ``|{}``)
* pointed composition: entries in order, the pointed part after ``|``
  (``"1,4,1,1|2"``; the composition of zero is ``"|0"``)
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_partitions, partitions

from .config import get_bounds
from .exceptions import (
    ConstructionMismatch,
    DivisibilityMismatch,
    EmptyFilter,
    InvalidInput,
    MalformedComposition,
    MismatchedN,
    OutOfRange,
    ParseError,
)
from .poset_core import FinitePoset, PosetFilter

logger = logging.getLogger(__name__)

Blocks = Tuple[Tuple[int, ...], ...]


def _parse_int_list(body: str, what: str) -> List[int]:
    body = body.strip()
    if not body:
        return []
    try:
        return [int(item.strip()) for item in body.split(",")]
    except ValueError as e:
        raise ParseError(f"cannot parse {what} '{body}': {e}") from e


@dataclass(frozen=True)
class PointedIntegerPartition:
    """A multiset of positive parts plus a non-negative pointed part."""

    parts: Tuple[int, ...]
    pointed: int

    def __post_init__(self) -> None:
        if any(part < 1 for part in self.parts):
            raise InvalidInput(f"partition parts must be positive, got {self.parts}")
        if self.pointed < 0:
            raise InvalidInput(f"pointed part must be non-negative, got {self.pointed}")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts) + self.pointed

    @property
    def num_parts(self) -> int:
        """Number of parts, the pointed part included."""
        return len(self.parts) + 1

    @property
    def key(self) -> str:
        return ",".join(str(part) for part in self.parts) + f"|{self.pointed}"

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class PointedSetPartition:
    """A set partition of ``{1..n}`` minus a zero block, plus the zero block itself."""

    blocks: Blocks
    zero_block: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        blocks = tuple(sorted(tuple(sorted(block)) for block in self.blocks))
        zero = tuple(sorted(self.zero_block))
        if any(not block for block in blocks):
            raise InvalidInput("ordinary blocks must be non-empty")
        seen = [x for block in blocks for x in block] + list(zero)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise InvalidInput(f"blocks {blocks} with zero block {zero} do not partition 1..{self.n}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "zero_block", zero)

    @classmethod
    def from_extended(cls, blocks: Iterable[Sequence[int]], n: int) -> "PointedSetPartition":
        """Inverse of the insertion map: the block holding ``n + 1`` becomes the zero block."""
        ordinary = []
        zero: Tuple[int, ...] = ()
        for block in blocks:
            if n + 1 in block:
                zero = tuple(x for x in block if x != n + 1)
            else:
                ordinary.append(tuple(block))
        return cls(tuple(ordinary), zero, n)

    def extended(self) -> Blocks:
        """Insertion map to a set partition of ``{1..n+1}``: add ``n + 1`` to the zero block."""
        return tuple(sorted(self.blocks + (self.zero_block + (self.n + 1,),)))

    @property
    def num_blocks(self) -> int:
        """Number of blocks, the zero block included."""
        return len(self.blocks) + 1

    @property
    def key(self) -> str:
        ordinary = "".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)
        return ordinary + "|{" + ",".join(map(str, self.zero_block)) + "}"

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class PointedComposition:
    """Positive interior entries followed by a non-negative pointed last entry."""

    interior: Tuple[int, ...]
    pointed: int

    def __post_init__(self) -> None:
        if any(part < 1 for part in self.interior):
            raise MalformedComposition(f"interior parts must be positive, got {self.interior}")
        if self.pointed < 0:
            raise MalformedComposition(f"pointed part must be non-negative, got {self.pointed}")
        object.__setattr__(self, "interior", tuple(self.interior))

    @classmethod
    def from_partial_sums(cls, n: int, sums: Iterable[int]) -> "PointedComposition":
        """Composition of ``n`` whose partial sums ``c_1, c_1 + c_2, ...`` are ``sums``."""
        ordered = sorted(set(sums))
        if ordered and (ordered[0] < 1 or ordered[-1] > n):
            raise OutOfRange(f"partial sums {ordered} must lie in 1..{n}")
        previous = 0
        interior = []
        for value in ordered:
            interior.append(value - previous)
            previous = value
        return cls(tuple(interior), n - previous)

    @property
    def n(self) -> int:
        return sum(self.interior) + self.pointed

    @property
    def parts(self) -> Tuple[int, ...]:
        return self.interior + (self.pointed,)

    @property
    def num_parts(self) -> int:
        """Number of entries, the pointed part included."""
        return len(self.interior) + 1

    def partial_sums(self) -> Tuple[int, ...]:
        sums = []
        total = 0
        for part in self.interior:
            total += part
            sums.append(total)
        return tuple(sums)

    def is_zero(self) -> bool:
        """True for the composition ``(0)`` of zero."""
        return not self.interior and self.pointed == 0

    @property
    def key(self) -> str:
        return ",".join(str(part) for part in self.interior) + f"|{self.pointed}"

    def __str__(self) -> str:
        return self.key


def parse_pointed_partition(text: str) -> PointedIntegerPartition:
    """Parse ``"a,b,c|m"``; the parts may be listed in any order.

    Raises:
        ParseError: On a missing ``|``, non-integers or invalid parts
    """
    body, sep, pointed = text.strip().partition("|")
    if not sep:
        raise ParseError(f"pointed partition '{text}' needs a '|m' pointed part")
    parts = _parse_int_list(body, "partition")
    pointed_values = _parse_int_list(pointed, "pointed part")
    if len(pointed_values) != 1:
        raise ParseError(f"pointed partition '{text}' needs exactly one pointed part")
    try:
        return PointedIntegerPartition(tuple(parts), pointed_values[0])
    except InvalidInput as e:
        raise ParseError(str(e)) from e


def parse_pointed_composition(text: str) -> PointedComposition:
    """Parse ``"c1,c2|ck"`` (``"|0"`` is the composition of zero).

    Raises:
        ParseError: On a missing ``|`` or non-integers
        MalformedComposition: On a non-positive interior or negative pointed part
    """
    body, sep, pointed = text.strip().partition("|")
    if not sep:
        raise ParseError(f"pointed composition '{text}' needs a '|ck' pointed part")
    pointed_values = _parse_int_list(pointed, "pointed part")
    if len(pointed_values) != 1:
        raise ParseError(f"pointed composition '{text}' needs exactly one pointed part")
    return PointedComposition(tuple(_parse_int_list(body, "composition")), pointed_values[0])


def parse_partition(text: str) -> Tuple[int, ...]:
    """Parse an unpointed multiset literal ``"1,1,1,4"`` keeping the given order."""
    parts = tuple(_parse_int_list(text, "partition"))
    if any(part < 1 for part in parts):
        raise ParseError(f"partition '{text}' must have positive parts")
    return parts


def type_of_set_partition(partition: PointedSetPartition) -> PointedIntegerPartition:
    """Block sizes as parts, the zero block size as pointed part."""
    return PointedIntegerPartition(
        tuple(len(block) for block in partition.blocks), len(partition.zero_block)
    )


def type_of_composition(composition: PointedComposition) -> PointedIntegerPartition:
    """Interior entries as parts, the last entry as pointed part."""
    return PointedIntegerPartition(composition.interior, composition.pointed)


Element = Union[PointedSetPartition, PointedComposition]


def type_of(element: Element) -> PointedIntegerPartition:
    if isinstance(element, PointedSetPartition):
        return type_of_set_partition(element)
    return type_of_composition(element)


# -- builders ---------------------------------------------------------------


def build_I(n: int) -> FinitePoset:
    """Poset of pointed integer partitions of ``n`` under merging of parts.

    Raises:
        BoundExceeded: If ``n`` is above ``i_max``
    """
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    get_bounds().require("i_max", n)
    return _build_I(n)


@lru_cache(maxsize=None)
def _build_I(n: int) -> FinitePoset:
    elements: List[PointedIntegerPartition] = []
    for pointed in range(n + 1):
        for multiplicities in partitions(n - pointed):
            parts = [part for part, count in multiplicities.items() for _ in range(count)]
            elements.append(PointedIntegerPartition(tuple(parts), pointed))
    elements.sort(key=lambda x: (-x.num_parts, x.key))

    covers = set()
    for x in elements:
        parts = x.parts
        for i, j in combinations(range(len(parts)), 2):
            rest = parts[:i] + parts[i + 1 : j] + parts[j + 1 :]
            covers.add((x.key, PointedIntegerPartition(rest + (parts[i] + parts[j],), x.pointed).key))
        for i, part in enumerate(parts):
            covers.add((x.key, PointedIntegerPartition(parts[:i] + parts[i + 1 :], x.pointed + part).key))

    poset = FinitePoset(
        [x.key for x in elements],
        sorted(covers),
        name=f"I_{n}",
        payloads={x.key: x for x in elements},
        metadata={"family": "I", "n": n},
    )
    logger.info(f"Built I_{n} with {len(poset)} pointed integer partitions")
    return poset


def build_Pi(n: int) -> FinitePoset:
    """Poset of pointed set partitions of ``{1..n}`` under refinement.

    Built from the set partitions of ``{1..n+1}``; the block holding ``n + 1``
    becomes the zero block, and covers are merges of two blocks.

    Raises:
        BoundExceeded: If ``n`` is above ``pi_max``
    """
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    get_bounds().require("pi_max", n)
    return _build_Pi(n)


@lru_cache(maxsize=None)
def _build_Pi(n: int) -> FinitePoset:
    extended: List[Blocks] = [
        tuple(sorted(tuple(block) for block in partition))
        for partition in multiset_partitions(list(range(1, n + 2)))
    ]
    extended.sort(key=lambda blocks: (-len(blocks), blocks))
    payloads: Dict[str, PointedSetPartition] = {}
    keys: Dict[Blocks, str] = {}
    for blocks in extended:
        element = PointedSetPartition.from_extended(blocks, n)
        keys[blocks] = element.key
        payloads[element.key] = element

    covers = []
    for blocks in extended:
        for i, j in combinations(range(len(blocks)), 2):
            merged = [block for k, block in enumerate(blocks) if k not in (i, j)]
            merged.append(tuple(sorted(blocks[i] + blocks[j])))
            covers.append((keys[blocks], keys[tuple(sorted(merged))]))

    poset = FinitePoset(
        [keys[blocks] for blocks in extended],
        covers,
        name=f"Pi_{n}",
        payloads=payloads,
        metadata={"family": "Pi", "n": n},
    )
    logger.info(f"Built Pi_{n} with {len(poset)} pointed set partitions and {len(covers)} covers")
    return poset


def build_C(n: int) -> FinitePoset:
    """Poset of the ``2**n`` pointed compositions of ``n`` under adjacent merging.

    Merging ``c_i`` and ``c_{i+1}`` removes one partial sum, so the poset is
    the Boolean algebra on the partial-sum sets, ordered by reverse inclusion.

    Raises:
        BoundExceeded: If ``n`` is above ``c_max``
    """
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    get_bounds().require("c_max", n)
    return _build_C(n)


@lru_cache(maxsize=None)
def _build_C(n: int) -> FinitePoset:
    masks = sorted(range(1 << n), key=lambda mask: (-bin(mask).count("1"), mask))
    keys: Dict[int, str] = {}
    payloads: Dict[str, PointedComposition] = {}
    for mask in masks:
        element = PointedComposition.from_partial_sums(
            n, (bit + 1 for bit in range(n) if (mask >> bit) & 1)
        )
        keys[mask] = element.key
        payloads[element.key] = element

    covers = [
        (keys[mask], keys[mask & ~(1 << bit)])
        for mask in masks
        for bit in range(n)
        if (mask >> bit) & 1
    ]
    poset = FinitePoset(
        [keys[mask] for mask in masks],
        covers,
        name=f"C_{n}",
        payloads=payloads,
        metadata={"family": "C", "n": n},
    )
    logger.info(f"Built C_{n} with {len(poset)} pointed compositions")
    return poset


# -- filters of I_n and restriction by type ---------------------------------


@lru_cache(maxsize=None)
def _type_keys(family: str, n: int) -> Dict[str, str]:
    source = _build_Pi(n) if family == "Pi" else _build_C(n)
    return {label: type_of(source.payload(label)).key for label in source}


def restrict_by_type(poset: FinitePoset, type_filter: PosetFilter) -> FinitePoset:
    """Induced subposet of the elements whose type lies in ``type_filter``.

    Args:
        poset: Output of ``build_Pi`` or ``build_C``
        type_filter: Filter of ``build_I(n)`` for the same ``n``

    Raises:
        MismatchedN: If the filter lives in ``I_m`` for ``m != n``
    """
    family = poset.metadata.get("family")
    if family not in ("Pi", "C"):
        raise InvalidInput(f"restriction by type needs a Pi or C poset, got {poset.name or 'poset'}")
    if type_filter.parent.metadata.get("family") != "I":
        raise InvalidInput("type filter must be a filter of pointed integer partitions")
    n = poset.metadata["n"]
    filter_n = type_filter.parent.metadata["n"]
    if n != filter_n:
        raise MismatchedN(f"filter lives in I_{filter_n} but the poset is {family}_{n}")

    types = _type_keys(family, n)
    members = [label for label in poset if types[label] in type_filter.members]
    logger.debug(f"Restricting {poset.name} to {len(members)} of {len(poset)} elements")
    return poset.induced(members, name=f"{poset.name}(F)")


def type_filter(n: int, generators: Sequence[PointedIntegerPartition]) -> PosetFilter:
    """Filter of ``I_n`` generated by pointed integer partitions of ``n``.

    Raises:
        EmptyFilter: If no generator is given
        MismatchedN: If a generator is a pointed partition of another integer
    """
    if not generators:
        raise EmptyFilter("a filter needs at least one generator")
    for generator in generators:
        if generator.n != n:
            raise MismatchedN(f"generator {generator} is a pointed partition of {generator.n}, not {n}")
    return build_I(n).filter_generated(generator.key for generator in generators)


def filter_by_max_parts(n: int, k: int) -> PosetFilter:
    """Pointed integer partitions of ``n`` with at most ``k`` parts (pointed part included).

    Raises:
        OutOfRange: Unless ``1 <= k <= n + 1``
    """
    if not 1 <= k <= n + 1:
        raise OutOfRange(f"k must satisfy 1 <= k <= {n + 1}, got {k}")
    poset = build_I(n)
    members = frozenset(label for label in poset if poset.payload(label).num_parts <= k)
    result = PosetFilter(poset, members)
    if not result.is_upward_closed():
        raise ConstructionMismatch(f"partitions of {n} with at most {k} parts are not upward closed")
    return result


def r_divisible_generator(n: int, r: int, m: int) -> PointedIntegerPartition:
    """The pointed partition ``{r, ..., r, m}`` of ``n = r*p + m``.

    Raises:
        OutOfRange: If ``r < 1`` or ``m < 0``
        DivisibilityMismatch: If ``n - m`` is not a positive multiple of ``r``
    """
    if r < 1 or m < 0:
        raise OutOfRange(f"need r >= 1 and m >= 0, got r={r}, m={m}")
    if n - m <= 0 or (n - m) % r:
        raise DivisibilityMismatch(f"n - m = {n - m} is not a positive multiple of r = {r}")
    return PointedIntegerPartition((r,) * ((n - m) // r), m)
