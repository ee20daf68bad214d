"""Tests for the generic finite poset engine."""

import json
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pointed_mobius.config import bounds_override
from pointed_mobius.exceptions import (
    BoundExceeded,
    CycleDetected,
    InvalidInput,
    NotComparable,
    NotGraded,
    UnknownElement,
)
from pointed_mobius.pointed_structures import build_I
from pointed_mobius.poset_core import BOTTOM, FinitePoset, RedundantCover, fresh_bottom_label

from .test_utils import mobius_by_definition


class TestConstruction:
    """Test cases for building posets from cover relations."""

    def test_singleton(self):
        """Test a one-element poset."""
        poset = FinitePoset(["a"], [])
        assert len(poset) == 1
        assert poset.leq("a", "a")
        assert poset.covers == ()

    def test_chain_transitivity(self, chain3):
        """Test that the order is the transitive closure of the covers."""
        assert chain3.leq("a", "c")
        assert chain3.lt("a", "c")
        assert not chain3.leq("c", "a")
        assert chain3.elements == ("a", "b", "c")
        assert chain3.covers == (("a", "b"), ("b", "c"))

    def test_cycle_rejected(self):
        """Test that a directed cycle raises CycleDetected."""
        with pytest.raises(CycleDetected):
            FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])

    def test_self_loop_rejected(self):
        """Test that a self-loop is a cycle."""
        with pytest.raises(CycleDetected):
            FinitePoset(["a"], [("a", "a")])

    def test_unknown_element_in_cover(self):
        """Test that covers may only mention declared elements."""
        with pytest.raises(UnknownElement):
            FinitePoset(["a"], [("a", "z")])

    def test_duplicate_element(self):
        """Test that element labels must be unique."""
        with pytest.raises(InvalidInput):
            FinitePoset(["a", "a"], [])

    def test_transitive_cover_pruned_with_warning(self):
        """Test that a transitive cover is dropped and reported."""
        with pytest.warns(RedundantCover):
            poset = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
        assert poset.covers == (("a", "b"), ("b", "c"))
        assert poset.pruned_covers == (("a", "c"),)

    def test_pruned_poset_keeps_order(self, with_transitive_cover):
        """Test that pruning does not change the order relation."""
        assert with_transitive_cover.leq("a", "c")
        assert with_transitive_cover.mobius("a", "c") == 0


class TestOrderQueries:
    """Test cases for order, rank and extremal queries."""

    def test_reflexive(self, diamond):
        """Test that every element is below itself."""
        assert all(diamond.leq(x, x) for x in diamond)

    def test_antichain_incomparable(self, antichain2):
        """Test that antichain members are incomparable."""
        assert not antichain2.leq("a", "b")
        assert not antichain2.leq("b", "a")

    def test_unknown_label(self, chain3):
        """Test that queries on unknown labels raise UnknownElement."""
        with pytest.raises(UnknownElement):
            chain3.leq("a", "z")

    def test_covers_and_sets(self, diamond):
        """Test lower and upper covers, down-sets and up-sets."""
        assert diamond.lower_covers("1") == ["x", "y"]
        assert diamond.upper_covers("0") == ["x", "y"]
        assert diamond.down_set("x") == {"0", "x"}
        assert diamond.up_set("x") == {"x", "1"}

    def test_extremal_elements(self, diamond, antichain2):
        """Test top, bottom and atoms."""
        assert diamond.top() == "1"
        assert diamond.bottom() == "0"
        assert diamond.atoms() == ["x", "y"]
        assert antichain2.top() is None
        assert not antichain2.has_top()
        assert antichain2.minimal_elements() == ["a", "b"]

    def test_rank_graded(self, diamond):
        """Test ranks in a graded poset."""
        assert diamond.is_graded()
        assert diamond.rank("0") == 0
        assert diamond.rank("1") == 2
        assert diamond.rank_difference("x", "1") == 1

    def test_rank_not_graded(self, ungraded):
        """Test that chains of different lengths make the rank undefined."""
        assert not ungraded.is_graded()
        assert ungraded.rank("b") == 1
        with pytest.raises(NotGraded):
            ungraded.rank("d")

    def test_rank_difference_on_graded_interval(self, ungraded):
        """Test that intervals are graded even when the poset is not."""
        assert ungraded.rank_difference("a", "d") == 2
        assert ungraded.rank_difference("c", "d") == 1
        with pytest.raises(NotComparable):
            ungraded.rank_difference("a", "c")

    def test_rank_difference_ungraded_interval(self):
        """Test an interval with maximal chains of lengths 2 and 3."""
        poset = FinitePoset(
            ["0", "a", "b", "c", "1"],
            [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        )
        with pytest.raises(NotGraded):
            poset.rank_difference("0", "1")


class TestMobius:
    """Test cases for the Möbius function."""

    def test_diagonal(self, diamond):
        """Test that mu(x, x) = 1."""
        assert all(diamond.mobius(x, x) == 1 for x in diamond)

    def test_chain(self, chain3):
        """Test the Möbius function of a chain."""
        assert chain3.mobius("a", "b") == -1
        assert chain3.mobius("a", "c") == 0
        assert chain3.mobius_from("a") == {"a": 1, "b": -1, "c": 0}

    def test_boolean_algebras(self, diamond, boolean3):
        """Test mu(0, 1) = (-1)**n on Boolean algebras."""
        assert diamond.mobius("0", "1") == 1
        assert boolean3.mobius("1,1,1|0", "|3") == -1

    def test_not_comparable(self, chain3, antichain2):
        """Test that mu(x, y) requires x <= y."""
        with pytest.raises(NotComparable):
            chain3.mobius("c", "a")
        with pytest.raises(NotComparable):
            antichain2.mobius("a", "b")

    def test_matches_definition(self, ungraded):
        """Test the cached recursion against the textbook recursion."""
        for x in ungraded:
            for y in ungraded:
                if ungraded.leq(x, y):
                    assert ungraded.mobius(x, y) == mobius_by_definition(ungraded, x, y)

    def test_zeta_inversion(self, boolean3, integer_partitions4):
        """Test the recursion against the inverse of the zeta matrix."""
        for poset in (boolean3, integer_partitions4):
            assert np.array_equal(poset.mobius_matrix(), poset.mobius_by_zeta_inversion())

    def test_zeta_inversion_is_exact(self):
        """Test that the zeta inverse is an exact integer inverse."""
        poset = build_I(4).adjoin_bottom()
        inverse = poset.mobius_by_zeta_inversion()
        assert inverse.dtype == np.int64
        assert np.array_equal(inverse @ poset.zeta_matrix(), np.eye(len(poset), dtype=np.int64))
        assert np.array_equal(inverse, poset.mobius_matrix())

    def test_zeta_inversion_bound(self, diamond):
        """Test that the zeta oracle refuses posets above its bound."""
        with bounds_override(zeta_oracle_max=3):
            with pytest.raises(BoundExceeded):
                diamond.mobius_by_zeta_inversion()

    def test_concurrent_queries(self, integer_partitions4):
        """Test that concurrent queries return the same values as serial ones."""
        poset = integer_partitions4
        bottom = "1,1,1,1|0"
        expected = {y: poset.mobius(bottom, y) for y in poset}
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda y: (y, poset.mobius(bottom, y)), list(poset)))
        assert dict(results) == expected

    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(
        st.integers(min_value=1, max_value=7).flatmap(
            lambda size: st.tuples(
                st.just(size),
                st.lists(
                    st.tuples(
                        st.integers(min_value=0, max_value=size - 1),
                        st.integers(min_value=0, max_value=size - 1),
                    ),
                    max_size=12,
                ),
            )
        )
    )
    def test_interval_sums_vanish(self, case):
        """Test that mu @ zeta is the identity on random posets."""
        size, pairs = case
        labels = [f"v{i}" for i in range(size)]
        covers = sorted({(labels[i], labels[j]) for i, j in pairs if i < j})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RedundantCover)
            poset = FinitePoset(labels, covers)
        product = poset.mobius_matrix() @ poset.zeta_matrix()
        assert np.array_equal(product, np.eye(size, dtype=np.int64))


class TestDerivedPosets:
    """Test cases for adjoined minima, filters and induced subposets."""

    def test_adjoin_bottom_antichain(self, antichain2):
        """Test that the new minimum is covered by the old minimal elements."""
        poset = antichain2.adjoin_bottom()
        assert len(poset) == 3
        assert poset.bottom() == BOTTOM
        assert poset.upper_covers(BOTTOM) == ["a", "b"]
        assert poset.mobius(BOTTOM, "a") == -1

    def test_adjoin_bottom_singleton(self):
        """Test that a singleton becomes a 2-chain."""
        poset = FinitePoset(["a"], []).adjoin_bottom()
        assert poset.covers == ((BOTTOM, "a"),)

    def test_adjoin_bottom_twice(self, chain3):
        """Test that the bottom label must be new."""
        with pytest.raises(InvalidInput):
            chain3.adjoin_bottom().adjoin_bottom()

    def test_fresh_bottom_label(self, chain3):
        """Test that a poset already holding the bottom label gets a primed one."""
        assert fresh_bottom_label(chain3) == BOTTOM
        bottomed = chain3.adjoin_bottom()
        label = fresh_bottom_label(bottomed)
        assert label == BOTTOM + "'"
        twice = bottomed.adjoin_bottom(label)
        assert twice.bottom() == label
        assert twice.mobius(label, BOTTOM) == -1

    def test_filter_generated(self, chain3, diamond):
        """Test filters generated by one or more elements."""
        generated = chain3.filter_generated(["b"])
        assert generated.members == {"b", "c"}
        assert generated.generators() == ["b"]
        assert generated.is_upward_closed()
        assert diamond.filter_generated(["1"]).members == {"1"}
        assert len(diamond.filter_generated(["0"])) == 4

    def test_filter_of_unknown_element(self, chain3):
        """Test that generators must be elements."""
        with pytest.raises(UnknownElement):
            chain3.filter_generated(["z"])

    def test_induced_upper_set(self, diamond):
        """Test the induced subposet on an upper set."""
        poset = diamond.induced(["x", "y", "1"])
        assert poset.covers == (("x", "1"), ("y", "1"))

    def test_induced_recomputes_covers(self, diamond):
        """Test that removing the middle rank joins 0 and 1 by a cover."""
        poset = diamond.induced(["0", "1"], name="ends")
        assert poset.name == "ends"
        assert poset.covers == (("0", "1"),)
        assert poset.mobius("0", "1") == -1

    def test_is_lattice(self, diamond, antichain2, ungraded):
        """Test lattice recognition."""
        assert diamond.is_lattice()
        assert not antichain2.is_lattice()
        assert not ungraded.is_lattice()
        assert not build_I(3).is_lattice()


class TestExport:
    """Test cases for JSON and DOT export."""

    def test_to_json(self, chain3):
        """Test the JSON document with index-based covers."""
        document = json.loads(chain3.to_json())
        assert document == {"elements": ["a", "b", "c"], "covers": [[0, 1], [1, 2]]}

    def test_to_dot(self, diamond):
        """Test the layered DOT rendering."""
        dot = diamond.to_dot({"x": "lightblue"})
        assert dot.startswith('digraph "B2" {')
        assert "rankdir=BT;" in dot
        assert '"0" -> "x";' in dot
        assert '"x" [style=filled, fillcolor="lightblue"];' in dot
        assert '{ rank=same; "x" "y" }' in dot
