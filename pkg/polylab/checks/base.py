"""Blueprint-style registration of named checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterator, Mapping, Optional

import numpy as np

from ..calculus import RewriteEngine
from ..current import GreenEvaluator
from ..lattice import Lattice
from ..reports import RunConfig, parse_complex


@dataclass(frozen=True)
class Outcome:
    """What a check function returns.

    ``passed`` is left as ``None`` for numeric checks; the runner then compares
    ``residual`` with the configured tolerance.
    """

    residual: float
    passed: Optional[bool] = None
    details: Mapping[str, Any] = field(default_factory=dict)
    reason: Optional[str] = None

    @classmethod
    def from_assertions(cls, assertions: Mapping[str, bool], **details: Any) -> "Outcome":
        failed = [name for name, ok in assertions.items() if not ok]
        return cls(
            residual=float(len(failed)),
            passed=not failed,
            details={"assertions": len(assertions), **details},
            reason=f"failed assertions: {', '.join(failed)}" if failed else None,
        )


CheckFunc = Callable[..., Outcome]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    func: CheckFunc = field(repr=False)
    defaults: Mapping[str, Any] = field(default_factory=dict)
    tolerance: Optional[str] = None
    description: str = ""


class CheckContext:
    """Per-run services handed to a check: seeded RNG, evaluators and engine."""

    def __init__(self, config: RunConfig, seed: int) -> None:
        self.config = config
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self._evaluators: dict[complex, GreenEvaluator] = {}

    def lattice(self, tau: Any) -> Lattice:
        return Lattice.from_tau(parse_complex(tau) if isinstance(tau, str) else complex(tau))

    def evaluator(self, tau: Any) -> GreenEvaluator:
        lattice = self.lattice(tau)
        key = lattice.tau
        if key not in self._evaluators:
            self._evaluators[key] = GreenEvaluator.for_lattice(
                lattice,
                singular_radius=self.config.singular_radius,
                truncation_bound=self.config.truncation_bound,
                target_eps=self.config.precision_target,
            )
        return self._evaluators[key]

    @cached_property
    def engine(self) -> RewriteEngine:
        return RewriteEngine(budget=self.config.rewrite_budget)


class CheckSuite:
    """A named group of checks, registered on a runner like a blueprint."""

    def __init__(self, name: str) -> None:
        self.name = name
        self._checks: dict[str, CheckSpec] = {}

    def check(
        self,
        name: str,
        *,
        tolerance: Optional[str] = None,
        defaults: Optional[Mapping[str, Any]] = None,
        description: str = "",
    ) -> Callable[[CheckFunc], CheckFunc]:
        def register(func: CheckFunc) -> CheckFunc:
            if name in self._checks:
                raise ValueError(f"check {name!r} registered twice in suite {self.name!r}")
            self._checks[name] = CheckSpec(
                name, func, dict(defaults or {}), tolerance, description or (func.__doc__ or "").strip()
            )
            return func

        return register

    @property
    def names(self) -> list[str]:
        return list(self._checks)

    def __iter__(self) -> Iterator[CheckSpec]:
        return iter(self._checks.values())

    def __len__(self) -> int:
        return len(self._checks)


__all__ = ["Outcome", "CheckSpec", "CheckContext", "CheckSuite"]
