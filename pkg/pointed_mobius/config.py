"""Size bounds for the exhaustive builders and enumerators.

The defaults keep every brute-force oracle at desk scale. They are
configuration values, not hard limits: the environment variable
``POINTED_MOBIUS_BOUNDS`` and the ``--bounds`` command-line flag raise or
lower them using the grammar ``name=value[,name=value...]``.
"""

import logging
import os
import threading
from contextlib import contextmanager
from typing import Dict, Generator, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .exceptions import BoundExceeded, ParseError

BOUNDS_ENV_VAR = "POINTED_MOBIUS_BOUNDS"

logger = logging.getLogger(__name__)


class Bounds(BaseModel):
    """Enumeration limits read by every builder."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    i_max: int = Field(20, ge=0, description="largest n for I_n (pointed integer partitions)")
    pi_max: int = Field(9, ge=0, description="largest n for Pi_n (pointed set partitions)")
    c_max: int = Field(16, ge=0, description="largest n for C_n (pointed compositions)")
    q_max: int = Field(7, ge=1, description="largest p for the ordered partition lattice")
    eulerian_q_max: int = Field(5, ge=1, description="largest p for the exhaustive Eulerian check")
    enumeration_max: int = Field(10, ge=0, description="largest n for full S_n enumeration")
    beta_enumeration_cutoff: int = Field(
        8, ge=0, description="beta uses enumeration up to this n, inclusion-exclusion above"
    )
    census_max: int = Field(40, ge=0, description="largest n for the knapsack census")
    zeta_oracle_max: int = Field(500, ge=1, description="largest poset inverted as a zeta matrix")
    verify_n_max: int = Field(8, ge=0, description="default n ceiling for the heavy verify suites")

    @classmethod
    def parse_overrides(cls, text: str) -> Dict[str, int]:
        """Parse ``name=value`` pairs into an override mapping.

        Args:
            text: Comma separated assignments, e.g. ``"pi_max=8,c_max=12"``

        Returns:
            Mapping of field name to integer value

        Raises:
            ParseError: On unknown names or non-integer values
        """
        overrides: Dict[str, int] = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, value = item.partition("=")
            name = name.strip()
            if not sep or name not in cls.model_fields:
                raise ParseError(f"unknown bound assignment '{item}'")
            try:
                overrides[name] = int(value.strip())
            except ValueError as e:
                raise ParseError(f"bound '{name}' needs an integer, got '{value}'") from e
        return overrides

    def with_overrides(self, text: Optional[str]) -> "Bounds":
        """Return a copy with the assignments in ``text`` applied.

        Raises:
            ParseError: On a malformed assignment or a value the field rejects
        """
        if not text:
            return self
        try:
            return self.model_validate({**self.model_dump(), **self.parse_overrides(text)})
        except ValidationError as e:
            errors = "; ".join(f"{'.'.join(map(str, error['loc']))}: {error['msg']}" for error in e.errors())
            raise ParseError(f"invalid bound override '{text}': {errors}") from e

    @classmethod
    def from_env(cls) -> "Bounds":
        """Build bounds from the defaults plus ``POINTED_MOBIUS_BOUNDS``."""
        text = os.environ.get(BOUNDS_ENV_VAR, "")
        bounds = cls().with_overrides(text)
        if text:
            logger.info(f"Bounds overridden from {BOUNDS_ENV_VAR}: {text}")
        return bounds

    def require(self, name: str, value: int) -> int:
        """Check ``value`` against the bound called ``name``.

        Raises:
            BoundExceeded: If the value is above the bound
        """
        limit = getattr(self, name)
        if value > limit:
            raise BoundExceeded(name.removesuffix("_max"), value, limit)
        return value


_lock = threading.Lock()
_active: Optional[Bounds] = None


def get_bounds() -> Bounds:
    """Return the process-wide bounds, loading them from the environment once."""
    global _active
    with _lock:
        if _active is None:
            _active = Bounds.from_env()
        return _active


def set_bounds(bounds: Bounds) -> None:
    """Replace the process-wide bounds."""
    global _active
    with _lock:
        _active = bounds


@contextmanager
def bounds_override(**values: int) -> Generator[Bounds, None, None]:
    """Temporarily apply bound overrides (used by tests and the verify runner)."""
    previous = get_bounds()
    updated = previous.model_validate({**previous.model_dump(), **values})
    set_bounds(updated)
    try:
        yield updated
    finally:
        set_bounds(previous)
