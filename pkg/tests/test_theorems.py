"""Tests for the Möbius closed forms and the method comparison report."""

import json
from math import factorial

import pytest

from pointed_mobius.config import bounds_override
from pointed_mobius.exceptions import (
    DivisibilityMismatch,
    EmptyFilter,
    MismatchedN,
    NotKnapsackInput,
    OutOfRange,
)
from pointed_mobius.pointed_structures import (
    build_I,
    filter_by_max_parts,
    parse_pointed_partition,
    r_divisible_generator,
    type_filter,
)
from pointed_mobius.poset_core import PosetFilter
from pointed_mobius.theorems import (
    compare_methods,
    descent_formula_terms,
    eulerian,
    eulerian_side,
    mu_bruteforce,
    mu_descent_formula,
    mu_divisible_lattice,
    mu_knapsack,
    mu_max_parts,
    mu_r_divisible,
    mu_theorem1,
    rank_selected_mobius,
    stirling2,
    verify_eulerian_stirling,
)

from .test_utils import assert_report_agrees


def _generated(n, *texts):
    return type_filter(n, [parse_pointed_partition(text) for text in texts])


class TestBruteForce:
    """Test cases for the recursion on the restricted set partition poset."""

    def test_full_filter_vanishes(self):
        """Test that keeping all of Pi_n leaves a chain below its old minimum."""
        for n in range(1, 5):
            assert mu_bruteforce(n, filter_by_max_parts(n, n + 1)) == 0

    def test_empty_ground_set(self):
        """Test that Pi_0 with a minimum adjoined is a 2-chain."""
        assert mu_bruteforce(0, filter_by_max_parts(0, 1)) == -1

    @pytest.mark.parametrize("n", range(1, 6))
    def test_partition_lattice(self, n):
        """Test mu of the set partitions of n + 1 points."""
        assert mu_bruteforce(n, filter_by_max_parts(n, n)) == (-1) ** n * factorial(n)

    def test_filter_errors(self):
        """Test empty filters and filters of another size."""
        lattice = build_I(3)
        with pytest.raises(EmptyFilter):
            mu_bruteforce(3, PosetFilter(lattice, frozenset()))
        with pytest.raises(MismatchedN):
            mu_bruteforce(4, filter_by_max_parts(3, 2))


class TestDescentFormula:
    """Test cases for the sum over restricted compositions."""

    @pytest.mark.parametrize(
        "n,generators",
        [
            (3, ["2,1|0"]),
            (4, ["2,2|0"]),
            (4, ["1,1|2"]),
            (4, ["2,1,1|0", "1,1,1|1"]),
            (5, ["3,1|1"]),
            (5, ["2,2|1", "3,1,1|0"]),
        ],
    )
    def test_matches_brute_force(self, n, generators):
        """Test the descent formula against recursion on Pi_n(F)."""
        generated = _generated(n, *generators)
        assert mu_descent_formula(n, generated) == mu_bruteforce(n, generated)

    def test_unique_atom(self):
        """Test that <2,2 | 0> has a single nonzero term and value zero."""
        generated = _generated(4, "2,2|0")
        terms = descent_formula_terms(4, generated)
        nonzero = [term for term in terms if term.mobius]
        assert [term.composition for term in nonzero] == ["2,2|0"]
        assert nonzero[0].beta == 0
        assert mu_descent_formula(4, generated) == 0

    def test_term_value(self):
        """Test that each term is sign times mu times beta."""
        for term in descent_formula_terms(3, _generated(3, "1,1|1")):
            assert term.value == term.sign * term.mobius * term.beta

    def test_all_but_bottom(self):
        """Test the at-most-four-parts filter of n = 4."""
        assert mu_descent_formula(4, _generated(4, "2,1,1|0", "1,1,1|1")) == 24

    def test_theorem1_alias(self):
        """Test that mu_theorem1 is the descent formula."""
        assert mu_theorem1 is mu_descent_formula
        assert mu_theorem1(3, _generated(3, "2,1|0")) == mu_bruteforce(3, _generated(3, "2,1|0"))


class TestKnapsackForm:
    """Test cases for the knapsack closed form."""

    def test_pointed_part_zero(self):
        """Test that every beta vanishes when the pointed part is zero."""
        assert mu_knapsack([1, 2], 0) == 0

    def test_two_parts(self):
        """Test -(beta(1,2|1) + beta(2,1|1) + beta(3|1))."""
        assert mu_knapsack([1, 2], 1) == -11
        assert mu_bruteforce(4, _generated(4, "2,1|1")) == -11

    def test_single_part(self):
        """Test the sign for p = 1."""
        assert mu_knapsack([3], 1) == 3

    def test_repeated_values(self):
        """Test a knapsack partition with multiplicities against the recursion."""
        assert mu_knapsack([1, 1, 3], 1) == mu_bruteforce(6, _generated(6, "3,1,1|1"))

    def test_not_knapsack(self):
        """Test that {3, 2, 1} is refused."""
        with pytest.raises(NotKnapsackInput):
            mu_knapsack([1, 2, 3], 0)


class TestDivisibleForms:
    """Test cases for filters generated by {r, ..., r | m}."""

    def test_tangent_number(self):
        """Test the alternating permutations of S_7."""
        assert mu_r_divisible(7, 2, 1) == 272
        assert mu_divisible_lattice(8, 2) == 272

    def test_small_cases(self):
        """Test the pointed form at n = 3 against the divisible lattice on 4 points."""
        assert mu_r_divisible(3, 2, 1) == 2
        assert mu_divisible_lattice(4, 2) == 2
        assert mu_bruteforce(3, type_filter(3, [r_divisible_generator(3, 2, 1)])) == 2

    @pytest.mark.parametrize("n,r,m", [(4, 2, 0), (5, 2, 1), (6, 3, 0), (5, 1, 2), (6, 2, 2)])
    def test_matches_brute_force(self, n, r, m):
        """Test the closed form against recursion."""
        generated = type_filter(n, [r_divisible_generator(n, r, m)])
        assert mu_r_divisible(n, r, m) == mu_bruteforce(n, generated)

    def test_errors(self):
        """Test indivisible sizes and r below two."""
        with pytest.raises(DivisibilityMismatch):
            mu_r_divisible(7, 2, 0)
        with pytest.raises(DivisibilityMismatch):
            mu_divisible_lattice(5, 2)
        with pytest.raises(OutOfRange):
            mu_divisible_lattice(4, 1)


class TestStirlingEulerian:
    """Test cases for Stirling and Eulerian numbers and the max-parts filter."""

    def test_numbers(self):
        """Test a few Stirling and Eulerian numbers."""
        assert stirling2(4, 2) == 7
        assert stirling2(0, 0) == 1
        assert stirling2(4, 0) == 0
        assert eulerian(3, 2) == 4
        assert eulerian(0, 0) == 1
        assert [eulerian(4, j) for j in range(1, 5)] == [1, 11, 11, 1]
        with pytest.raises(OutOfRange):
            stirling2(3, 4)

    def test_max_parts(self):
        """Test one part, n parts and every part."""
        assert mu_max_parts(4, 1) == -1
        assert mu_max_parts(3, 2) == 6
        assert mu_max_parts(4, 4) == 24
        assert mu_max_parts(4, 5) == 0
        with pytest.raises(OutOfRange):
            mu_max_parts(4, 6)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_identity(self, n):
        """Test the Stirling and Eulerian sides for every k."""
        for k in range(1, n + 1):
            assert mu_max_parts(n, k) == eulerian_side(n, k)
            assert verify_eulerian_stirling(n, k)

    @pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2), (4, 3)])
    def test_max_parts_brute_force(self, n, k):
        """Test the max-parts value against recursion."""
        assert mu_max_parts(n, k) == mu_bruteforce(n, filter_by_max_parts(n, k))

    def test_rank_selected(self):
        """Test the Boolean rank-selection values."""
        assert rank_selected_mobius(4, 2, 2) == -1
        assert rank_selected_mobius(4, 2, 1) == 3
        with pytest.raises(OutOfRange):
            rank_selected_mobius(4, 2, 3)


class TestReport:
    """Test cases for the method comparison report."""

    def test_knapsack_generator(self):
        """Test a report where all three methods apply."""
        report = compare_methods(4, _generated(4, "2,1|1"))
        assert report.value_knapsack == -11
        assert_report_agrees(report.to_dict(), -11)

    def test_closed_form(self):
        """Test a report carrying a closed form."""
        report = compare_methods(4, filter_by_max_parts(4, 4), closed_form=mu_max_parts(4, 4))
        data = report.to_dict()
        assert data["closed_form"] == 24
        assert data["knapsack"] is None
        assert_report_agrees(data, 24)

    def test_json_keys(self):
        """Test the serialized field names."""
        document = json.loads(compare_methods(3, _generated(3, "2,1|0")).to_json())
        assert set(document) == {"n", "generators", "bruteforce", "theorem1", "knapsack", "agree"}
        assert document["generators"] == ["2,1|0"]

    def test_disagreement(self):
        """Test that a wrong closed form is reported."""
        report = compare_methods(3, _generated(3, "2,1|0"), closed_form=99)
        assert not report.agree

    def test_brute_force_skipped_above_bound(self):
        """Test that the brute force is left out above pi_max."""
        with bounds_override(pi_max=2):
            report = compare_methods(3, _generated(3, "1,1|1"))
        assert report.value_bruteforce is None
        assert report.agree
