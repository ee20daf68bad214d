"""Generic finite poset engine.

Builds a poset from cover relations, answers order and rank queries,
generates filters, adjoins a minimum, and computes the Möbius function. It is
the brute-force oracle every closed form in the package is checked against.

Elements are opaque canonical strings produced by the domain modules. Each
element keeps the bitmask of everything below it (its down-set); masks are
indexed by a deterministic linear extension, so ``x <= y`` is a single bit
test and the Möbius recursion sums over a down-set with numpy.
"""

import logging
import threading
import warnings
from dataclasses import dataclass
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx
import numpy as np
from pydantic import BaseModel

from .config import get_bounds
from .exceptions import (
    INT64_MAX,
    CycleDetected,
    InvalidInput,
    NotComparable,
    NotGraded,
    UnknownElement,
    checked_int,
    checked_sum,
)
from .text_formatting import format_dot

BOTTOM = "0^"

Cover = Tuple[str, str]


class RedundantCover(UserWarning):
    """Issued when supplied covers contain transitive edges; those edges are pruned."""


class PosetDocument(BaseModel):
    """JSON export of a poset: elements in linear-extension order, covers by index."""

    elements: List[str]
    covers: List[Tuple[int, int]]


def fresh_bottom_label(poset: "FinitePoset") -> str:
    """``BOTTOM``, primed until it is not an element of ``poset``."""
    label = BOTTOM
    while label in poset:
        label += "'"
    return label


def _mask_indices(mask: int) -> np.ndarray:
    """Return the positions of the set bits of ``mask`` in increasing order."""
    if mask == 0:
        return np.empty(0, dtype=np.int64)
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little"))


class FinitePoset:
    """An immutable finite poset given by its cover relations.

    Construction is single-writer; afterwards every query is read-only apart
    from the memo caches, which are guarded by a lock, so queries may run
    concurrently.
    """

    def __init__(
        self,
        elements: Sequence[str],
        covers: Iterable[Cover],
        *,
        name: str = "",
        payloads: Optional[Mapping[str, Any]] = None,
        metadata: Optional[Mapping[str, Any]] = None,
    ) -> None:
        """Build a poset, rejecting cycles and pruning transitive covers.

        Args:
            elements: Element labels; their order breaks ties in the linear extension
            covers: Pairs ``(x, y)`` meaning ``x`` is covered by ``y``
            name: Display name used in logs and exports
            payloads: Optional domain object for each label
            metadata: Free-form facts about the poset (family, ground size, ...)

        Raises:
            UnknownElement: If a cover mentions a label that is not an element
            CycleDetected: If the cover digraph has a directed cycle
        """
        self.logger = logging.getLogger(__name__)
        position: Dict[str, int] = {}
        for label in elements:
            if label in position:
                raise InvalidInput(f"duplicate element '{label}'")
            position[label] = len(position)

        graph = nx.DiGraph()
        graph.add_nodes_from(position)
        for x, y in covers:
            for label in (x, y):
                if label not in position:
                    raise UnknownElement(f"cover ({x}, {y}) mentions unknown element '{label}'")
            if x == y:
                raise CycleDetected(f"self-loop on '{x}'")
            graph.add_edge(x, y)

        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise CycleDetected("cover relation has a cycle: " + " -> ".join(u for u, _ in cycle))

        order = list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))
        index = {label: i for i, label in enumerate(order)}
        lower: List[List[int]] = [sorted(index[u] for u in graph.predecessors(x)) for x in order]

        down: List[int] = []
        for i, preds in enumerate(lower):
            mask = 1 << i
            for p in preds:
                mask |= down[p]
            down.append(mask)

        pruned = self._prune_transitive(lower, down)
        if pruned:
            pairs = [(order[x], order[y]) for x, y in pruned]
            warnings.warn(
                f"{len(pairs)} transitive cover(s) pruned from {name or 'poset'}: {pairs[:3]}",
                RedundantCover,
                stacklevel=2,
            )
            self.logger.warning(f"Pruned {len(pairs)} redundant covers from {name or 'poset'}")
        self.pruned_covers: Tuple[Cover, ...] = tuple((order[x], order[y]) for x, y in pruned)

        self._assemble(order, lower, down, name, payloads, metadata)

    @staticmethod
    def _prune_transitive(lower: List[List[int]], down: List[int]) -> List[Tuple[int, int]]:
        """Drop covers ``x -> y`` where ``x`` lies below another lower cover of ``y``."""
        pruned: List[Tuple[int, int]] = []
        for y, preds in enumerate(lower):
            if len(preds) < 2:
                continue
            prefix = [0]
            for p in preds:
                prefix.append(prefix[-1] | down[p])
            suffix = [0]
            for p in reversed(preds):
                suffix.append(suffix[-1] | down[p])
            suffix.reverse()
            keep = []
            for k, p in enumerate(preds):
                others = prefix[k] | suffix[k + 1]
                if (others >> p) & 1:
                    pruned.append((p, y))
                else:
                    keep.append(p)
            lower[y] = keep
        return pruned

    def _assemble(
        self,
        order: Sequence[str],
        lower: List[List[int]],
        down: List[int],
        name: str,
        payloads: Optional[Mapping[str, Any]],
        metadata: Optional[Mapping[str, Any]],
    ) -> None:
        self.logger = logging.getLogger(__name__)
        self.name = name
        self.metadata: Dict[str, Any] = dict(metadata or {})
        self._elements: Tuple[str, ...] = tuple(order)
        self._index: Dict[str, int] = {label: i for i, label in enumerate(order)}
        self._lower = lower
        self._upper: List[List[int]] = [[] for _ in order]
        for y, preds in enumerate(lower):
            for x in preds:
                self._upper[x].append(y)
        self._down = down
        self._up: Optional[List[int]] = None
        self._heights: Optional[Tuple[List[int], List[int]]] = None
        self._payloads: Dict[str, Any] = dict(payloads or {})
        self._mobius_rows: Dict[int, np.ndarray] = {}
        self._down_index_cache: Dict[int, np.ndarray] = {}
        self._lock = threading.RLock()
        if not hasattr(self, "pruned_covers"):
            self.pruned_covers = ()
        self.logger.debug(f"Poset {name or '<anonymous>'} built with {len(order)} elements")

    @classmethod
    def _from_parts(
        cls,
        order: Sequence[str],
        lower: List[List[int]],
        down: List[int],
        *,
        name: str,
        payloads: Optional[Mapping[str, Any]],
        metadata: Optional[Mapping[str, Any]],
    ) -> "FinitePoset":
        """Assemble a poset from an already validated linear extension and closure."""
        poset = cls.__new__(cls)
        poset.pruned_covers = ()
        poset._assemble(order, lower, down, name, payloads, metadata)
        return poset

    @classmethod
    def from_cover_relations(
        cls,
        elements: Sequence[str],
        covers: Iterable[Cover],
        *,
        name: str = "",
        payloads: Optional[Mapping[str, Any]] = None,
        metadata: Optional[Mapping[str, Any]] = None,
    ) -> "FinitePoset":
        """Build a poset from elements and cover pairs (see ``__init__``)."""
        return cls(elements, covers, name=name, payloads=payloads, metadata=metadata)

    # -- basic access -------------------------------------------------------

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self._elements)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __repr__(self) -> str:
        return f"FinitePoset(name={self.name!r}, elements={len(self)})"

    @property
    def elements(self) -> Tuple[str, ...]:
        """Element labels in linear-extension order."""
        return self._elements

    @property
    def covers(self) -> Tuple[Cover, ...]:
        """Cover pairs ordered by the index of the lower, then the upper element."""
        return tuple(
            (self._elements[x], self._elements[y])
            for x, ups in enumerate(self._upper)
            for y in sorted(ups)
        )

    def index(self, label: str) -> int:
        """Position of ``label`` in the linear extension.

        Raises:
            UnknownElement: If the label is not an element
        """
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"'{label}' is not an element of {self.name or 'the poset'}") from None

    def payload(self, label: str) -> Any:
        """Domain object attached to ``label`` (``None`` when none was supplied)."""
        self.index(label)
        return self._payloads.get(label)

    # -- order queries ------------------------------------------------------

    def leq(self, x: str, y: str) -> bool:
        """True iff ``x <= y``."""
        return bool((self._down[self.index(y)] >> self.index(x)) & 1)

    def lt(self, x: str, y: str) -> bool:
        """True iff ``x < y``."""
        return x != y and self.leq(x, y)

    def lower_covers(self, label: str) -> List[str]:
        return [self._elements[i] for i in self._lower[self.index(label)]]

    def upper_covers(self, label: str) -> List[str]:
        return [self._elements[i] for i in sorted(self._upper[self.index(label)])]

    def down_set(self, label: str) -> FrozenSet[str]:
        """All elements ``z <= label``."""
        return frozenset(self._elements[i] for i in _mask_indices(self._down[self.index(label)]))

    def up_set(self, label: str) -> FrozenSet[str]:
        """All elements ``z >= label``."""
        return frozenset(self._elements[i] for i in _mask_indices(self._up_masks()[self.index(label)]))

    def _up_masks(self) -> List[int]:
        with self._lock:
            if self._up is None:
                up = [0] * len(self._elements)
                for i in range(len(up) - 1, -1, -1):
                    mask = 1 << i
                    for j in self._upper[i]:
                        mask |= up[j]
                    up[i] = mask
                self._up = up
            return self._up

    def minimal_elements(self) -> List[str]:
        return [self._elements[i] for i, preds in enumerate(self._lower) if not preds]

    def maximal_elements(self) -> List[str]:
        return [self._elements[i] for i, ups in enumerate(self._upper) if not ups]

    def has_top(self) -> bool:
        return len(self.maximal_elements()) == 1

    def has_bottom(self) -> bool:
        return len(self.minimal_elements()) == 1

    def top(self) -> Optional[str]:
        maximal = self.maximal_elements()
        return maximal[0] if len(maximal) == 1 else None

    def bottom(self) -> Optional[str]:
        minimal = self.minimal_elements()
        return minimal[0] if len(minimal) == 1 else None

    def atoms(self) -> List[str]:
        """Elements covering the minimum, or the minimal elements when there is no minimum."""
        bottom = self.bottom()
        if bottom is None:
            return self.minimal_elements()
        return self.upper_covers(bottom)

    # -- rank ---------------------------------------------------------------

    def _chain_heights(self) -> Tuple[List[int], List[int]]:
        """Shortest and longest chain length from a minimal element to each element."""
        with self._lock:
            if self._heights is None:
                lo: List[int] = []
                hi: List[int] = []
                for preds in self._lower:
                    if preds:
                        lo.append(min(lo[p] for p in preds) + 1)
                        hi.append(max(hi[p] for p in preds) + 1)
                    else:
                        lo.append(0)
                        hi.append(0)
                self._heights = (lo, hi)
            return self._heights

    def rank(self, label: str) -> int:
        """Length of the maximal chains from a minimal element up to ``label``.

        Raises:
            NotGraded: If chains below ``label`` have different lengths
        """
        i = self.index(label)
        lo, hi = self._chain_heights()
        if lo[i] != hi[i]:
            raise NotGraded(f"maximal chains below '{label}' have lengths {lo[i]}..{hi[i]}")
        return hi[i]

    def is_graded(self) -> bool:
        """True iff every maximal chain of the poset has the same length."""
        if not self._elements:
            return True
        lo, hi = self._chain_heights()
        if lo != hi:
            return False
        return len({hi[i] for i, ups in enumerate(self._upper) if not ups}) == 1

    def rank_difference(self, x: str, y: str) -> int:
        """Common length of the maximal chains of the interval ``[x, y]``.

        Raises:
            NotComparable: If ``x`` is not below ``y``
            NotGraded: If the interval has maximal chains of different lengths
        """
        i, j = self.index(x), self.index(y)
        if not (self._down[j] >> i) & 1:
            raise NotComparable(f"'{x}' is not below '{y}'")
        members = [z for z in _mask_indices(self._down[j]) if (self._down[z] >> i) & 1]
        lo: Dict[int, int] = {i: 0}
        hi: Dict[int, int] = {i: 0}
        for z in members:
            if z == i:
                continue
            preds = [p for p in self._lower[z] if p in lo]
            lo[z] = min(lo[p] for p in preds) + 1
            hi[z] = max(hi[p] for p in preds) + 1
        if lo[j] != hi[j]:
            raise NotGraded(f"interval [{x}, {y}] has maximal chains of lengths {lo[j]}..{hi[j]}")
        return hi[j]

    # -- Möbius function ----------------------------------------------------

    def _strict_down_indices(self, z: int) -> np.ndarray:
        with self._lock:
            cached = self._down_index_cache.get(z)
        if cached is None:
            cached = _mask_indices(self._down[z])[:-1]
            with self._lock:
                self._down_index_cache[z] = cached
        return cached

    def _mobius_row(self, i: int) -> np.ndarray:
        """Values ``mu(i, z)`` for every element ``z`` (zero where ``z`` is not above ``i``)."""
        with self._lock:
            cached = self._mobius_rows.get(i)
        if cached is not None:
            return cached
        row = np.zeros(len(self._elements), dtype=np.int64)
        row[i] = 1
        context = f"mobius row of {self._elements[i]}"
        for z in range(i + 1, len(self._elements)):
            if not (self._down[z] >> i) & 1:
                continue
            values = row[self._strict_down_indices(z)]
            if values.size and int(np.abs(values).max()) * values.size > INT64_MAX:
                total = checked_sum((int(v) for v in values), context)
            else:
                total = int(values.sum())
            row[z] = checked_int(-total, context)
        row.setflags(write=False)
        with self._lock:
            self._mobius_rows[i] = row
        return row

    def mobius(self, x: str, y: str) -> int:
        """Möbius function ``mu(x, y)``.

        ``mu(x, x) = 1`` and ``mu(x, y) = -sum(mu(x, z) for x <= z < y)``. Whole
        rows ``mu(x, .)`` are memoized, so repeated queries from the same lower
        end are lookups.

        Raises:
            NotComparable: If ``x`` is not below ``y``
        """
        i, j = self.index(x), self.index(y)
        if not (self._down[j] >> i) & 1:
            raise NotComparable(f"mu({x}, {y}) is undefined: '{x}' is not below '{y}'")
        return int(self._mobius_row(i)[j])

    def mobius_from(self, x: str) -> Dict[str, int]:
        """Mapping ``z -> mu(x, z)`` for every ``z >= x``."""
        i = self.index(x)
        row = self._mobius_row(i)
        return {
            self._elements[z]: int(row[z])
            for z in range(i, len(self._elements))
            if (self._down[z] >> i) & 1
        }

    def mobius_matrix(self) -> np.ndarray:
        """Matrix ``M[i, j] = mu(i, j)`` in linear-extension order (0 off the order)."""
        return np.vstack([self._mobius_row(i) for i in range(len(self._elements))])

    def zeta_matrix(self) -> np.ndarray:
        """Matrix ``Z[i, j] = 1`` iff element ``i <= j``, in linear-extension order."""
        size = len(self._elements)
        zeta = np.zeros((size, size), dtype=np.int64)
        for j, mask in enumerate(self._down):
            zeta[_mask_indices(mask), j] = 1
        return zeta

    def mobius_by_zeta_inversion(self) -> np.ndarray:
        """Möbius matrix obtained by inverting the zeta matrix (test oracle, small posets only).

        Raises:
            BoundExceeded: If the poset is larger than ``zeta_oracle_max``
        """
        size = get_bounds().require("zeta_oracle_max", len(self._elements))
        # Unitriangular in linear-extension order: exact back-substitution over Python ints.
        zeta = self.zeta_matrix().astype(object)
        inverse = np.zeros((size, size), dtype=object)
        for i in range(size - 1, -1, -1):
            inverse[i, i] = 1
            if i + 1 < size:
                inverse[i] -= zeta[i, i + 1 :].dot(inverse[i + 1 :])
        return inverse.astype(np.int64)

    # -- derived posets -----------------------------------------------------

    def adjoin_bottom(self, label: str = BOTTOM) -> "FinitePoset":
        """New poset with a minimum ``label`` covered by exactly the minimal elements."""
        if label in self._index:
            raise InvalidInput(f"bottom label '{label}' is already an element")
        order = (label,) + self._elements
        lower: List[List[int]] = [[]]
        for preds in self._lower:
            lower.append([p + 1 for p in preds] if preds else [0])
        down = [1] + [(mask << 1) | 1 for mask in self._down]
        metadata = {**self.metadata, "bottom": label}
        name = f"{self.name} + {label}" if self.name else label
        return FinitePoset._from_parts(
            order, lower, down, name=name, payloads=self._payloads, metadata=metadata
        )

    def filter_generated(self, generators: Iterable[str]) -> "PosetFilter":
        """The filter ``{y : x <= y for some generator x}``.

        Raises:
            UnknownElement: If a generator is not an element
        """
        up = self._up_masks()
        mask = 0
        for label in generators:
            mask |= up[self.index(label)]
        return PosetFilter(self, frozenset(self._elements[i] for i in _mask_indices(mask)))

    def induced(self, members: Iterable[str], *, name: str = "") -> "FinitePoset":
        """Induced subposet on ``members`` with the inherited order."""
        keep = sorted({self.index(label) for label in members})
        kept = set(keep)
        new_index = {old: new for new, old in enumerate(keep)}
        closed = all(u in kept for x in keep for u in self._upper[x]) or all(
            p in kept for x in keep for p in self._lower[x]
        )
        lower: List[List[int]] = []
        if closed:
            # covers of an upper or lower set are the inherited covers
            for y in keep:
                lower.append([new_index[p] for p in self._lower[y] if p in kept])
        else:
            keep_mask = 0
            for i in keep:
                keep_mask |= 1 << i
            for y in keep:
                below = [int(z) for z in _mask_indices(self._down[y] & keep_mask) if z != y]
                lower.append(
                    [
                        new_index[x]
                        for x in below
                        if not any((self._down[z] >> x) & 1 for z in below if z != x)
                    ]
                )
        down: List[int] = []
        for i, preds in enumerate(lower):
            mask = 1 << i
            for p in preds:
                mask |= down[p]
            down.append(mask)
        order = [self._elements[i] for i in keep]
        payloads = {label: self._payloads[label] for label in order if label in self._payloads}
        return FinitePoset._from_parts(
            order, lower, down, name=name or f"{self.name}|induced", payloads=payloads,
            metadata=dict(self.metadata),
        )

    # -- lattice checks -----------------------------------------------------

    def is_lattice(self) -> bool:
        """True iff every pair of elements has a join and a meet."""
        size = len(self._elements)
        if size == 0:
            return False
        up = self._up_masks()
        down = self._down
        for i in range(size):
            for j in range(i + 1, size):
                common_up = up[i] & up[j]
                if not common_up:
                    return False
                least = (common_up & -common_up).bit_length() - 1
                if common_up & ~up[least]:
                    self.logger.debug(f"No join for {self._elements[i]}, {self._elements[j]}")
                    return False
                common_down = down[i] & down[j]
                if not common_down:
                    return False
                greatest = common_down.bit_length() - 1
                if common_down & ~down[greatest]:
                    self.logger.debug(f"No meet for {self._elements[i]}, {self._elements[j]}")
                    return False
        return True

    # -- export -------------------------------------------------------------

    def to_document(self) -> PosetDocument:
        return PosetDocument(
            elements=list(self._elements),
            covers=[(x, y) for x, ups in enumerate(self._upper) for y in sorted(ups)],
        )

    def to_json(self) -> str:
        """``{"elements": [...], "covers": [[i, j], ...]}`` with stable ordering."""
        return self.to_document().model_dump_json(indent=2)

    def to_dot(self, colors: Optional[Mapping[str, str]] = None) -> str:
        """Rank-layered DOT rendering of the Hasse diagram.

        Args:
            colors: Optional fill color per element label
        """
        _, hi = self._chain_heights()
        layers: Dict[int, List[str]] = {}
        for i, label in enumerate(self._elements):
            layers.setdefault(hi[i], []).append(label)
        return format_dot(
            self.name or "poset",
            [layers[level] for level in sorted(layers)],
            self.covers,
            colors or {},
        )


@dataclass(frozen=True, eq=False)
class PosetFilter:
    """An upward-closed subset of a poset."""

    parent: FinitePoset
    members: FrozenSet[str]

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return (label for label in self.parent.elements if label in self.members)

    def generators(self) -> List[str]:
        """Minimal members, in linear-extension order."""
        return [
            label
            for label in self
            if not any(lower in self.members for lower in self.parent.lower_covers(label))
        ]

    def is_upward_closed(self) -> bool:
        return all(
            upper in self.members for label in self.members for upper in self.parent.upper_covers(label)
        )
