"""Named verification checks, grouped into suites."""

from __future__ import annotations

from .base import CheckContext, CheckSpec, CheckSuite, Outcome
from .runner import CheckRunner, derive_seed


def all_suites() -> list[CheckSuite]:
    from .algebraic import suite as algebraic_suite
    from .numeric import suite as numeric_suite
    from .symbolic import suite as symbolic_suite

    return [numeric_suite, symbolic_suite, algebraic_suite]


__all__ = [
    "CheckContext",
    "CheckSpec",
    "CheckSuite",
    "Outcome",
    "CheckRunner",
    "derive_seed",
    "all_suites",
]
