"""Tests for ordered set partitions, the filter R and the face route to Möbius values."""

import pytest

from pointed_mobius.config import bounds_override
from pointed_mobius.exceptions import (
    BoundExceeded,
    InvalidInput,
    NotInIdeal,
    NotKnapsackInput,
    OutOfRange,
    SizeMismatch,
)
from pointed_mobius.permutahedron import (
    BOUNDARY_COLOR,
    INTERIOR_COLOR,
    OrderedSetPartition,
    build_Q,
    build_R,
    face_colors,
    is_boundary,
    iso_f,
    mu_via_gamma,
    ordered_partition_for,
    verify_eulerian,
)
from pointed_mobius.pointed_structures import (
    PointedIntegerPartition,
    build_C,
    parse_pointed_composition,
    restrict_by_type,
    type_filter,
)
from pointed_mobius.poset_core import BOTTOM


class TestOrderedSetPartition:
    """Test cases for the ordered set partition type."""

    def test_key_sorts_within_blocks(self):
        """Test that blocks keep their order but their members are sorted."""
        omega = OrderedSetPartition(((3, 1), (2,)))
        assert omega.key == "{1,3}{2}"
        assert omega.p == 3
        assert omega.block_index() == {1: 0, 3: 0, 2: 1}

    @pytest.mark.parametrize("blocks", [((1,), ()), ((1,), (3,)), ((1, 2), (2,))])
    def test_invalid_blocks(self, blocks):
        """Test empty blocks, gaps and repeated points."""
        with pytest.raises(InvalidInput):
            OrderedSetPartition(blocks)


class TestQ:
    """Test cases for the ordered partition lattice Q_p."""

    @pytest.mark.parametrize("p,size", [(1, 2), (2, 4), (3, 14)])
    def test_sizes(self, p, size):
        """Test ordered Bell numbers plus the adjoined minimum."""
        assert len(build_Q(p)) == size

    def test_covers_of_q2(self):
        """Test that both orders of two singletons merge into one block."""
        poset = build_Q(2)
        assert set(poset.covers) == {
            (BOTTOM, "{1}{2}"),
            (BOTTOM, "{2}{1}"),
            ("{1}{2}", "{1,2}"),
            ("{2}{1}", "{1,2}"),
        }

    def test_only_adjacent_blocks_merge(self):
        """Test that {1}{2}{3} is not covered by {1,3}{2}."""
        poset = build_Q(3)
        assert "{1,3}{2}" not in poset.upper_covers("{1}{2}{3}")
        assert set(poset.upper_covers("{1}{2}{3}")) == {"{1,2}{3}", "{1}{2,3}"}

    def test_top_mobius(self):
        """Test mu(0, 1) = (-1)**3 on Q_3."""
        poset = build_Q(3)
        assert poset.mobius(BOTTOM, poset.top()) == -1

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_eulerian(self, p):
        """Test that every interval of Q_p has mu = (-1)**length."""
        assert verify_eulerian(p)

    def test_bounds(self):
        """Test p below one and above q_max."""
        with pytest.raises(OutOfRange):
            build_Q(0)
        with bounds_override(q_max=2):
            with pytest.raises(BoundExceeded):
                build_Q(3)
        with pytest.raises(BoundExceeded):
            verify_eulerian(6)


class TestRegion:
    """Test cases for the filter R and the block-sum map f."""

    def test_tied_values(self):
        """Test that for (1, 1) the block of 1 may not follow the block of 2."""
        assert set(build_R([1, 1])) == {"{1}{2}", "{1,2}"}

    def test_distinct_values_keep_everything(self):
        """Test that distinct values select all of Q_p."""
        assert len(build_R([1, 2, 4])) == 13
        assert build_R([1, 2, 4]).is_upward_closed()

    def test_empty_parts(self):
        """Test that R needs at least one part."""
        with pytest.raises(OutOfRange):
            build_R([])

    def test_iso_f(self):
        """Test block sums followed by the pointed part."""
        omega = OrderedSetPartition(((1, 3), (2,)))
        assert iso_f(omega, [1, 1, 4], 2).key == "5,1|2"
        with pytest.raises(SizeMismatch):
            iso_f(omega, [1, 1], 2)

    def test_is_boundary(self):
        """Test that a block holding two equal values is a boundary face."""
        assert is_boundary(OrderedSetPartition(((1, 2), (3,))), [1, 1, 4])
        assert not is_boundary(OrderedSetPartition(((1, 3), (2,))), [1, 1, 4])

    def test_ordered_partition_for(self):
        """Test the inverse of f on compositions of V and beyond."""
        parts = [1, 1, 1, 4]
        assert ordered_partition_for(parse_pointed_composition("1,4,1,1|0"), parts, 0).key == "{1}{4}{2}{3}"
        assert ordered_partition_for(parse_pointed_composition("7|0"), parts, 0).key == "{1,2,3,4}"
        with pytest.raises(NotInIdeal):
            ordered_partition_for(parse_pointed_composition("7|1"), parts, 0)
        with pytest.raises(NotInIdeal):
            ordered_partition_for(parse_pointed_composition("2,2,3|0"), parts, 0)

    def test_face_colors(self):
        """Test interior and boundary colors on R(1, 1)."""
        assert face_colors([1, 1]) == {"{1}{2}": INTERIOR_COLOR, "{1,2}": BOUNDARY_COLOR}


class TestGammaRoute:
    """Test cases for Möbius values read off the face structure."""

    @pytest.mark.parametrize(
        "parts,pointed,text,expected",
        [
            ([1, 2], 0, "1,2|0", -1),
            ([1, 2], 0, "3|0", 1),
            ([1, 2], 0, "2|1", 0),
            ([1, 1, 1, 4], 2, "1,4,1,1|2", -1),
            ([1, 1, 1, 4], 2, "7|2", 0),
            ([1, 1, 1, 4], 2, "2,5|2", 0),
            ([1, 1, 1, 4], 2, "5,1,1|2", 1),
        ],
    )
    def test_values(self, parts, pointed, text, expected):
        """Test interior faces, boundary faces and larger pointed parts."""
        assert mu_via_gamma(parts, pointed, parse_pointed_composition(text)) == expected

    def test_matches_recursion(self):
        """Test the face route against recursion on C_6 restricted to <3,1,1 | 1>."""
        parts, pointed = [1, 1, 3], 1
        poset = restrict_by_type(
            build_C(6), type_filter(6, [PointedIntegerPartition(tuple(parts), pointed)])
        ).adjoin_bottom()
        row = poset.mobius_from(BOTTOM)
        for label in poset:
            if label != BOTTOM:
                assert mu_via_gamma(parts, pointed, poset.payload(label)) == row[label]

    def test_errors(self):
        """Test non-knapsack input and compositions outside the poset."""
        with pytest.raises(NotKnapsackInput):
            mu_via_gamma([1, 2, 3], 0, parse_pointed_composition("6|0"))
        with pytest.raises(NotInIdeal):
            mu_via_gamma([1, 2], 0, parse_pointed_composition("1,1|0"))
        with pytest.raises(NotInIdeal):
            mu_via_gamma([1, 2], 1, parse_pointed_composition("4|0"))
        with pytest.raises(NotInIdeal):
            mu_via_gamma([2, 2], 0, parse_pointed_composition("3|1"))
