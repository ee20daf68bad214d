"""Test configuration and fixtures for pointed-mobius."""

import warnings
from typing import Generator

import pytest

from pointed_mobius.config import Bounds, get_bounds, set_bounds
from pointed_mobius.pointed_structures import PointedComposition, build_C, build_I
from pointed_mobius.poset_core import FinitePoset, RedundantCover


@pytest.fixture(autouse=True)
def restore_bounds() -> Generator[Bounds, None, None]:
    """Reset the process-wide bounds after every test (the CLI may replace them)."""
    previous = get_bounds()
    set_bounds(Bounds())
    yield get_bounds()
    set_bounds(previous)


@pytest.fixture
def chain3() -> FinitePoset:
    """The 3-chain a < b < c."""
    return FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")], name="chain3")


@pytest.fixture
def antichain2() -> FinitePoset:
    """Two incomparable elements."""
    return FinitePoset(["a", "b"], [], name="antichain2")


@pytest.fixture
def diamond() -> FinitePoset:
    """The Boolean algebra B_2: 0 < x, y < 1."""
    return FinitePoset(
        ["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")], name="B2"
    )


@pytest.fixture
def ungraded() -> FinitePoset:
    """Chains of lengths 1 and 2 ending at the same maximum: a < b < d and c < d."""
    return FinitePoset(["a", "b", "c", "d"], [("a", "b"), ("b", "d"), ("c", "d")], name="ungraded")


@pytest.fixture
def with_transitive_cover() -> FinitePoset:
    """A 3-chain supplied with the redundant cover (a, c)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RedundantCover)
        return FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")], name="transitive")


@pytest.fixture
def boolean3() -> FinitePoset:
    """C_3, the Boolean algebra on the partial-sum sets of compositions of 3."""
    return build_C(3)


@pytest.fixture
def integer_partitions4() -> FinitePoset:
    """I_4, the twelve pointed integer partitions of 4."""
    return build_I(4)


@pytest.fixture
def running_composition() -> PointedComposition:
    """The composition (1, 4, 1, 1 | 2) built from the knapsack partition {1, 1, 1, 4}."""
    return PointedComposition((1, 4, 1, 1), 2)
