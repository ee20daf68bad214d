"""Named verification suites behind ``pointed-mobius verify``.

Each suite recomputes an identity or structural fact two independent ways
over every instance up to a size ceiling and records the instances where
they differ. Suites are addressable by name; the size ceiling of each suite
is clamped to a configured bound with a notice instead of failing.
"""

import logging
import random
import warnings
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, computed_field
from sympy import bell, primerange
from sympy.functions.combinatorial.numbers import stirling
from sympy.utilities.iterables import partitions

from .config import get_bounds
from .exceptions import ConstructionMismatch, InvalidInput, PointedMobiusError
from .knapsack import build_V, family_modular, family_weighted, first_collision, is_knapsack
from .perm_stats import (
    beta,
    beta_by_inclusion_exclusion,
    beta_fixed_last,
    composition_to_descent_set,
    enumerate_by_descent_composition,
    multinomial,
    permutations_with_descent_set,
)
from .permutahedron import build_Q, build_R, is_boundary, iso_f, mu_via_gamma, verify_eulerian
from .pointed_structures import (
    PointedComposition,
    PointedIntegerPartition,
    build_C,
    build_I,
    build_Pi,
    filter_by_max_parts,
    r_divisible_generator,
    restrict_by_type,
    type_filter,
    type_of,
)
from .poset_core import BOTTOM, FinitePoset, RedundantCover, fresh_bottom_label
from .theorems import (
    eulerian,
    mu_bruteforce,
    mu_knapsack,
    mu_max_parts,
    mu_r_divisible,
    mu_divisible_lattice,
    mu_descent_formula,
    rank_selected_mobius,
    stirling2,
    descent_formula_terms,
    verify_eulerian_stirling,
)

logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 25
TANGENT_VALUE = 272


class SuiteResult(BaseModel):
    name: str
    description: str
    n_max: int
    checks: int = 0
    failures: List[str] = []
    notes: List[str] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.failures


class VerificationSummary(BaseModel):
    seed: int
    suites: List[SuiteResult]
    notices: List[str] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)


class _Recorder:
    """Collects check outcomes for one suite."""

    def __init__(self, result: SuiteResult) -> None:
        self.result = result
        self._dropped = 0

    def check(self, ok: bool, instance: str) -> None:
        self.result.checks += 1
        if ok:
            return
        if len(self.result.failures) < MAX_REPORTED_FAILURES:
            self.result.failures.append(instance)
        else:
            self._dropped += 1

    def equal(self, left: object, right: object, instance: str) -> None:
        self.check(left == right, f"{instance}: {left} != {right}")

    def finish(self) -> SuiteResult:
        if self._dropped:
            self.result.notes.append(f"{self._dropped} further failures not listed")
        return self.result


# -- instance generators ----------------------------------------------------


def _integer_partitions(total: int) -> Iterator[Tuple[int, ...]]:
    for multiplicities in partitions(total):
        yield tuple(
            sorted((part for part, count in dict(multiplicities).items() for _ in range(count)), reverse=True)
        )


def _knapsack_instances(limit: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Knapsack partitions ``lambda`` and pointed parts ``m`` with ``sum + m <= limit``."""
    for total in range(limit + 1):
        for parts in _integer_partitions(total):
            if is_knapsack(parts).is_knapsack:
                for pointed in range(limit - total + 1):
                    yield parts, pointed


def _extended_set_partitions(size: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Set partitions of ``{1..size}`` from restricted growth strings."""
    found = []

    def extend(labels: List[int], top: int) -> None:
        if len(labels) == size:
            blocks: Dict[int, List[int]] = {}
            for element, label in enumerate(labels, start=1):
                blocks.setdefault(label, []).append(element)
            found.append(tuple(sorted(tuple(block) for block in blocks.values())))
            return
        for label in range(top + 2):
            extend(labels + [label], max(top, label))

    if size == 0:
        return [()]
    extend([0], 0)
    return found


def _ordered_bell(p: int) -> int:
    values = [1]
    for size in range(1, p + 1):
        values.append(sum(comb(size, k) * values[size - k] for k in range(1, size + 1)))
    return values[p]


# -- suites -----------------------------------------------------------------


def _suite_poset_core(rec: _Recorder, n: int, rng: random.Random) -> None:
    samples: List[FinitePoset] = [build_C(k) for k in range(min(n, 5) + 1)]
    samples += [build_I(k) for k in range(min(n, 6) + 1)]
    samples += [build_Pi(k) for k in range(min(n, 4) + 1)] + [build_Q(3)]
    for _ in range(12):
        size = rng.randint(1, 9)
        labels = [f"v{i}" for i in range(size)]
        covers = [(labels[i], labels[j]) for i, j in combinations(range(size), 2) if rng.random() < 0.35]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RedundantCover)
            samples.append(FinitePoset(labels, covers, name=f"random-{size}"))

    for poset in samples:
        if len(poset) > get_bounds().zeta_oracle_max:
            continue
        mobius = poset.mobius_matrix()
        rec.check(
            np.array_equal(mobius, poset.mobius_by_zeta_inversion()),
            f"{poset.name}: recursion differs from zeta inversion",
        )
        rec.check(
            np.array_equal(mobius @ poset.zeta_matrix(), np.eye(len(poset), dtype=np.int64)),
            f"{poset.name}: interval sums of mu do not vanish",
        )
        generators = rng.sample(list(poset.elements), k=min(2, len(poset)))
        rec.check(
            poset.filter_generated(generators).is_upward_closed(),
            f"{poset.name}: filter generated by {generators} is not upward closed",
        )
        bottom = fresh_bottom_label(poset)
        bottomed = poset.adjoin_bottom(bottom)
        for atom in bottomed.atoms():
            rec.equal(bottomed.mobius(bottom, atom), -1, f"{poset.name}: mu({bottom}, {atom})")


def _suite_beta(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(n + 1):
        for label in build_C(size):
            c: PointedComposition = build_C(size).payload(label)
            value = beta(c)
            rec.equal(value, beta_by_inclusion_exclusion(c), f"beta vs inclusion-exclusion at ({c})")
            rec.equal(value, beta_fixed_last(c), f"beta vs fixed last point at ({c})")
        counts = enumerate_by_descent_composition(size)
        rec.equal(sum(counts.values()), factorial(size), f"descent classes of S_{size}")
        if size <= 7:
            for parts in counts:
                allowed = composition_to_descent_set(parts)
                contained = sum(
                    count for other, count in counts.items() if composition_to_descent_set(other) <= allowed
                )
                rec.equal(multinomial(size, parts), contained, f"multinomial({size}; {parts})")


def _suite_structures(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(n + 1):
        rec.equal(len(build_Pi(size)), int(bell(size + 1)), f"|Pi_{size}| vs Bell({size + 1})")

    for size in range(min(12, get_bounds().c_max) + 1):
        poset = build_C(size)
        rec.equal(len(poset), 2**size, f"|C_{size}|")
        sums = {label: frozenset(poset.payload(label).partial_sums()) for label in poset}
        rec.equal(len(set(sums.values())), 2**size, f"C_{size} partial-sum map is injective")
        rec.equal(len(poset.covers), size * 2 ** max(size - 1, 0), f"cover count of C_{size}")
        rec.check(
            all(sums[y] < sums[x] and len(sums[x] - sums[y]) == 1 for x, y in poset.covers),
            f"C_{size} covers are not single partial-sum deletions",
        )

    for size in range(min(n, 6) + 1):
        pointed = build_Pi(size)
        image = {label: pointed.payload(label).extended() for label in pointed}
        independent = _extended_set_partitions(size + 1)
        rec.equal(sorted(image.values()), sorted(independent), f"insertion map onto Pi_{size + 1}")
        merges = set()
        for blocks in independent:
            for i, j in combinations(range(len(blocks)), 2):
                rest = [b for k, b in enumerate(blocks) if k not in (i, j)]
                merges.add((blocks, tuple(sorted(rest + [tuple(sorted(blocks[i] + blocks[j]))]))))
        rec.equal(
            {(image[x], image[y]) for x, y in pointed.covers} == merges,
            True,
            f"covers of Pi_{size} match merges in Pi_{size + 1}",
        )
        for builder in (build_I, build_Pi, build_C):
            poset = builder(size)
            rec.check(poset.is_graded(), f"{poset.name} is not graded")
        lattice = build_I(size)
        for family in (pointed, build_C(size)):
            rec.check(
                all(lattice.leq(type_of(family.payload(x)).key, type_of(family.payload(y)).key)
                    for x, y in family.covers),
                f"type map is not order preserving on {family.name}",
            )


def _suite_knapsack(rec: _Recorder, n: int, rng: random.Random) -> None:
    for total in range(n + 1):
        for parts in _integer_partitions(total):
            rec.equal(
                is_knapsack(parts).is_knapsack,
                first_collision(parts) is None,
                f"recognition vs collision oracle on {parts}",
            )

    mismatches = 0
    for _ in range(60):
        q = rng.randint(1, 3)
        values, counts, weight = [], [], 0
        for j in range(q):
            low = max(weight, 1) if j else 1
            value = rng.randint(low, low + 3)
            count = rng.randint(1, 3)
            values.append(value)
            counts.append(count)
            weight += value * count
        if weight > 14:
            continue
        strict = all(
            sum(v * c for v, c in zip(values[:j], counts[:j])) < values[j] for j in range(1, q)
        )
        try:
            certificate = family_weighted(values, counts)
            rec.check(certificate.is_knapsack, f"family_weighted{tuple(values), tuple(counts)}")
        except ConstructionMismatch:
            mismatches += 1
            rec.check(not strict, f"strict weighted condition fails recognition for {values}, {counts}")
    if mismatches:
        rec.result.notes.append(
            f"{mismatches} weighted instances met the condition with equality and failed recognition"
        )

    for total in range(min(n, 10) + 1):
        for parts in _integer_partitions(total):
            if not parts or not is_knapsack(parts).is_knapsack:
                continue
            for q in primerange(total + 1, 24):
                for j in range(1, q):
                    rec.check(
                        family_modular(parts, q, j).is_knapsack,
                        f"family_modular({parts}, q={q}, j={j})",
                    )

    for parts, pointed in _knapsack_instances(min(n, 8)):
        vset = build_V(parts, pointed)
        size = sum(parts) + pointed
        members = set(vset.keys())
        generated = type_filter(size, [PointedIntegerPartition(parts, pointed)])
        for c in vset:
            rec.check(type_of(c).key in generated, f"type of ({c}) outside the filter of {parts}|{pointed}")
            reverse = PointedComposition(tuple(reversed(c.interior)), pointed)
            rec.check(reverse.key in members, f"V({parts}, {pointed}) not closed under reversal at ({c})")


def _suite_permutahedron(rec: _Recorder, n: int, rng: random.Random) -> None:
    for p in range(1, n + 1):
        rec.check(verify_eulerian(p), f"Q_{p} is not Eulerian")
    for p in range(1, min(n + 2, get_bounds().q_max) + 1):
        rec.equal(len(build_Q(p)) - 1, _ordered_bell(p), f"|Q_{p}| - 1 vs ordered Bell number")

    for parts, pointed in _knapsack_instances(8):
        if not parts or pointed or len(parts) > min(n, get_bounds().q_max):
            continue
        region = build_R(parts)
        size = sum(parts)
        composition_poset = restrict_by_type(
            build_C(size), type_filter(size, [PointedIntegerPartition(parts, 0)])
        )
        ideal = {label for label in composition_poset if composition_poset.payload(label).pointed == 0}
        image = {label: iso_f(region.parent.payload(label), parts, 0).key for label in region}
        rec.equal(sorted(image.values()), sorted(ideal), f"f maps R({parts}) onto the ideal")
        for x in region:
            for y in region:
                rec.check(
                    region.parent.leq(x, y) == composition_poset.leq(image[x], image[y]),
                    f"f is not an order isomorphism at {x}, {y} for {parts}",
                )
        members = set(build_V(parts, 0).keys())
        for label in region:
            rec.equal(
                is_boundary(region.parent.payload(label), parts),
                image[label] not in members,
                f"boundary face {label} vs V membership for {parts}",
            )


def _suite_gamma(rec: _Recorder, n: int, rng: random.Random) -> None:
    for parts, pointed in _knapsack_instances(n):
        size = sum(parts) + pointed
        generator = PointedIntegerPartition(parts, pointed)
        poset = restrict_by_type(build_C(size), type_filter(size, [generator])).adjoin_bottom()
        row = poset.mobius_from(BOTTOM)
        for label in poset:
            if label == BOTTOM:
                continue
            rec.equal(
                mu_via_gamma(parts, pointed, poset.payload(label)),
                row[label],
                f"face route at ({label}) for {{{generator}}}",
            )


def _suite_descent_formula(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(n + 1):
        lattice = build_I(size)
        for label in lattice:
            generated = lattice.filter_generated([label])
            rec.equal(mu_descent_formula(size, generated), mu_bruteforce(size, generated), f"n={size}, F=<{label}>")
    for size in range(min(n, 6) + 1):
        lattice = build_I(size)
        for x, y in combinations(lattice.elements, 2):
            if lattice.leq(x, y) or lattice.leq(y, x):
                continue
            generated = lattice.filter_generated([x, y])
            rec.equal(
                mu_descent_formula(size, generated), mu_bruteforce(size, generated), f"n={size}, F=<{x}, {y}>"
            )


def _suite_knapsack_formula(rec: _Recorder, n: int, rng: random.Random) -> None:
    for parts, pointed in _knapsack_instances(n):
        size = sum(parts) + pointed
        generated = type_filter(size, [PointedIntegerPartition(parts, pointed)])
        value = mu_knapsack(list(parts), pointed)
        rec.equal(value, mu_bruteforce(size, generated), f"knapsack vs brute force for {parts}|{pointed}")
        rec.equal(value, mu_descent_formula(size, generated), f"knapsack vs descent formula for {parts}|{pointed}")
        sign = -1 if (len(parts) - 1) % 2 else 1
        rec.check(value == 0 or value * sign > 0, f"sign of mu for {parts}|{pointed} is {value}")


def _suite_r_divisible(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(1, n + 1):
        for r in range(1, size + 1):
            for m in range(0, size):
                if (size - m) % r:
                    continue
                generated = type_filter(size, [r_divisible_generator(size, r, m)])
                rec.equal(
                    mu_r_divisible(size, r, m), mu_bruteforce(size, generated), f"n={size}, r={r}, m={m}"
                )
                poset = restrict_by_type(build_C(size), generated).adjoin_bottom()
                if len(poset.atoms()) == 1:
                    nonzero = [t for t in descent_formula_terms(size, generated) if t.mobius]
                    rec.equal(len(nonzero), 1, f"unique-atom term count n={size}, r={r}, m={m}")


def _suite_eulerian_stirling(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(1, n + 1):
        for k in range(1, size + 1):
            rec.check(verify_eulerian_stirling(size, k), f"Stirling/Eulerian identity n={size}, k={k}")
        rec.equal(mu_max_parts(size, size), (-1) ** size * factorial(size), f"k=n value at n={size}")
        for j in range(size + 1):
            rec.equal(stirling2(size, j), int(stirling(size, j)), f"S({size},{j})")
    for size in range(1, min(n, 8) + 1):
        counts = enumerate_by_descent_composition(size)
        for j in range(1, size + 1):
            direct = sum(count for parts, count in counts.items() if len(parts) == j)
            rec.equal(eulerian(size, j), direct, f"A({size},{j}) vs descent enumeration")
    for size in range(1, min(n, 6) + 1):
        for k in range(1, size + 2):
            bounded = filter_by_max_parts(size, k)
            rec.equal(mu_max_parts(size, k), mu_bruteforce(size, bounded), f"max-parts filter n={size}, k={k}")
            if k > size:
                continue
            poset = restrict_by_type(build_C(size), bounded).adjoin_bottom()
            row = poset.mobius_from(BOTTOM)
            for label, value in row.items():
                if label == BOTTOM:
                    continue
                j = poset.payload(label).num_parts
                rec.equal(value, rank_selected_mobius(size, k, j), f"rank-selected mu at ({label}), k={k}")


def _suite_full_lattice(rec: _Recorder, n: int, rng: random.Random) -> None:
    for size in range(1, n + 1):
        rec.equal(
            mu_bruteforce(size, filter_by_max_parts(size, size)),
            (-1) ** size * factorial(size),
            f"mu of Pi_{size + 1}",
        )


def _suite_tangent(rec: _Recorder, n: int, rng: random.Random) -> None:
    witnesses = [tau for tau in permutations_with_descent_set(8, {2, 4, 6}) if tau(8) == 8]
    rec.equal(len(witnesses), TANGENT_VALUE, "permutations of S_8 with descents {2,4,6} fixing 8")
    rec.equal(mu_divisible_lattice(8, 2), TANGENT_VALUE, "2-divisible partition lattice on 8 points")
    rec.equal(mu_r_divisible(7, 2, 1), mu_divisible_lattice(8, 2), "pointed form at n=7 vs 2-divisible form")
    if get_bounds().pi_max >= 7:
        generated = type_filter(7, [r_divisible_generator(7, 2, 1)])
        rec.equal(mu_bruteforce(7, generated), TANGENT_VALUE, "brute force for the 2-divisible filter")


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    run: Callable[[_Recorder, int, random.Random], None]
    default_n: int
    ceiling: str


SUITES: Dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite("poset-core", "recursion vs zeta inversion, filters, adjoined minimum", _suite_poset_core, 5, "verify_n_max"),
        Suite("beta", "beta by enumeration, inclusion-exclusion and fixed last point", _suite_beta, 8, "beta_enumeration_cutoff"),
        Suite("structures", "Bell and Boolean counts, insertion isomorphism, type maps", _suite_structures, 8, "verify_n_max"),
        Suite("knapsack", "recognition, constructive families, V set", _suite_knapsack, 14, "census_max"),
        Suite("permutahedron", "Eulerian Q_p, ordered Bell numbers, isomorphism f", _suite_permutahedron, 4, "eulerian_q_max"),
        Suite("gamma", "face-route Möbius values vs recursion", _suite_gamma, 9, "c_max"),
        Suite("descent-formula", "descent formula vs brute force", _suite_descent_formula, 8, "verify_n_max"),
        Suite("knapsack-formula", "knapsack closed form vs brute force", _suite_knapsack_formula, 8, "verify_n_max"),
        Suite("r-divisible", "r-divisible closed form and unique-atom terms", _suite_r_divisible, 8, "verify_n_max"),
        Suite("eulerian-stirling", "Stirling/Eulerian identity and max-parts filters", _suite_eulerian_stirling, 10, "i_max"),
        Suite("full-lattice", "mu of the full partition lattice", _suite_full_lattice, 7, "verify_n_max"),
        Suite("tangent", "alternating permutations and the 2-divisible lattice", _suite_tangent, 8, "enumeration_max"),
    )
}


def run_verification(
    only: Optional[Sequence[str]] = None, n_max: Optional[int] = None, seed: int = 0
) -> VerificationSummary:
    """Run the selected suites (all by default).

    Args:
        only: Suite names to run
        n_max: Size ceiling applied to every selected suite instead of its default
        seed: Seed for the randomized instances

    Raises:
        InvalidInput: On an unknown suite name
    """
    names = list(only) if only else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise InvalidInput(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")

    bounds = get_bounds()
    notices: List[str] = []
    results = []
    for name in names:
        suite = SUITES[name]
        requested = suite.default_n if n_max is None else n_max
        limit = getattr(bounds, suite.ceiling)
        if requested > limit:
            notice = f"{name}: n_max={requested} exceeds configured bound {limit} ({suite.ceiling}); clamped"
            logger.warning(notice)
            notices.append(notice)
            requested = limit
        recorder = _Recorder(SuiteResult(name=name, description=suite.description, n_max=requested))
        try:
            suite.run(recorder, requested, random.Random(seed))
        except PointedMobiusError as e:
            recorder.check(False, f"{type(e).__name__}: {e}")
        except Exception as e:
            logger.exception(f"Suite {name} aborted by an unexpected error")
            recorder.check(False, f"{type(e).__name__}: {e}")
        result = recorder.finish()
        logger.info(f"Suite {name}: {result.checks} checks, {len(result.failures)} failures")
        results.append(result)
    return VerificationSummary(seed=seed, suites=results, notices=notices)
