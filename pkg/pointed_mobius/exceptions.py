"""Exception hierarchy for pointed-mobius.

Every error raised by the library derives from ``PointedMobiusError`` and
carries the process exit code the command-line front end uses for it.
"""

import logging
from typing import Iterable, Optional

INT64_MAX = 2**63 - 1


class PointedMobiusError(Exception):
    """Base exception for all pointed-mobius errors."""

    exit_code = 1


class InvalidInput(PointedMobiusError):
    """Raised when caller-supplied data is malformed or violates a precondition."""

    exit_code = 2


class ParseError(InvalidInput):
    """Raised when a literal (partition, composition, bounds) cannot be parsed."""


class BoundExceeded(PointedMobiusError):
    """Raised when a size exceeds the configured enumeration bound."""

    exit_code = 3

    def __init__(self, what: str, value: int, limit: int) -> None:
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what}={value} exceeds configured bound {limit}")


class Disagreement(PointedMobiusError):
    """Raised when independent computations of the same quantity disagree."""

    exit_code = 4


class CycleDetected(InvalidInput):
    """Raised when a cover relation contains a directed cycle."""


class UnknownElement(InvalidInput):
    """Raised when an element label is not part of the poset."""


class NotComparable(InvalidInput):
    """Raised when an interval [x, y] is requested with x not below y."""


class NotGraded(PointedMobiusError):
    """Raised when chain lengths disagree so no rank is defined."""


class MalformedComposition(InvalidInput):
    """Raised for a pointed composition with a non-positive interior part."""


class MalformedPermutation(InvalidInput):
    """Raised when a word is not a permutation of 1..n."""


class SumMismatch(InvalidInput):
    """Raised when parts do not sum to the stated total."""


class MismatchedN(InvalidInput):
    """Raised when a filter and a poset belong to different ground sizes."""


class EmptyFilter(InvalidInput):
    """Raised when a Möbius value is requested for an empty filter."""


class OutOfRange(InvalidInput):
    """Raised when an index argument lies outside its admissible range."""


class ConditionViolated(InvalidInput):
    """Raised when a constructive family's hypothesis does not hold."""


class ConstructionMismatch(PointedMobiusError):
    """Raised when a construction's hypothesis holds but its output fails recognition."""


class NotPrime(InvalidInput):
    """Raised when a modulus is required to be prime and is not."""


class NotKnapsackInput(InvalidInput):
    """Raised when an operation requires a knapsack partition."""


class SumTooLarge(InvalidInput):
    """Raised when the modulus does not exceed the partition sum."""


class SizeMismatch(InvalidInput):
    """Raised when an ordered partition and a partition have different sizes."""


class NotInIdeal(InvalidInput):
    """Raised when a composition lies outside the restricted composition poset."""


class DivisibilityMismatch(InvalidInput):
    """Raised when n - m is not a positive multiple of r."""


class ArithmeticOverflow(PointedMobiusError):
    """Raised when an exact value leaves the signed 64-bit range."""


def checked_int(value: int, context: str = "") -> int:
    """Return ``value`` unchanged after checking it fits in a signed 64-bit word.

    Args:
        value: Exact integer to check
        context: Context string for the error message and log (default: "")

    Returns:
        The value itself

    Raises:
        ArithmeticOverflow: If ``|value|`` exceeds the 64-bit range
    """
    if -INT64_MAX - 1 <= value <= INT64_MAX:
        return value
    context_msg = f" in {context}" if context else ""
    logging.getLogger(__name__).error(f"64-bit overflow{context_msg}: {value}")
    raise ArithmeticOverflow(f"value {value} overflows 64 bits{context_msg}")


def checked_sum(values: Iterable[int], context: str = "", start: Optional[int] = None) -> int:
    """Sum integers exactly, checking every partial sum against the 64-bit range."""
    total = 0 if start is None else start
    for value in values:
        total = checked_int(total + value, context)
    return total
