"""Pointed Mobius - Möbius functions of type-restricted pointed set partition posets.

This package computes the Möbius function of pointed set partition posets
restricted by a filter of pointed integer partitions, by brute force and by
the descent-statistic formula over pointed compositions, together with the
knapsack-partition closed form and its permutahedron geometry.
"""

__version__ = "0.1.0"
