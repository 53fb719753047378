"""Run registered checks and turn their outcomes into reports."""

from __future__ import annotations

import hashlib
import logging
import math
import time
from typing import Any, Iterable, Mapping, Optional

from ..exceptions import LabError
from ..reports import CheckReport, RunConfig
from .base import CheckContext, CheckSpec, CheckSuite

logger = logging.getLogger(__name__)


def derive_seed(master_seed: int, name: str) -> int:
    """Per-check seed: the first 8 bytes of ``sha256("master:name")``."""

    digest = hashlib.sha256(f"{master_seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class CheckRunner:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self._checks: dict[str, CheckSpec] = {}

    def register_suite(self, suite: CheckSuite) -> None:
        for spec in suite:
            if spec.name in self._checks:
                raise ValueError(f"check {spec.name!r} is already registered")
            self._checks[spec.name] = spec

    @property
    def names(self) -> list[str]:
        return list(self._checks)

    def get(self, name: str) -> CheckSpec:
        try:
            return self._checks[name]
        except KeyError:
            raise ValueError(
                f"unknown check {name!r}; choose from {', '.join(self.names)}"
            ) from None

    def applicable(self, name: str, params: Mapping[str, Any]) -> dict[str, Any]:
        """The subset of ``params`` that check ``name`` accepts (``None`` values dropped)."""

        defaults = self.get(name).defaults
        return {
            key: value
            for key, value in params.items()
            if value is not None and (key in defaults or key == "tolerance")
        }

    def run(self, name: str, params: Optional[Mapping[str, Any]] = None) -> CheckReport:
        spec = self.get(name)
        params = {key: value for key, value in (params or {}).items() if value is not None}
        tolerance = params.pop("tolerance", None)
        unknown = sorted(set(params) - set(spec.defaults))
        if unknown:
            raise ValueError(f"check {name!r} does not accept {', '.join(unknown)}")
        if tolerance is None and spec.tolerance:
            tolerance = self.config.tolerance(spec.tolerance)
        if tolerance is not None and not tolerance > 0:
            raise ValueError("tolerance must be positive")

        arguments = {**spec.defaults, **params}
        seed = derive_seed(self.config.seed, name)
        echo = {**arguments, "seed": seed, "master_seed": self.config.seed}
        if tolerance is not None:
            echo["tolerance"] = tolerance

        logger.info("check %s started (seed %s)", name, seed)
        started = time.perf_counter()
        try:
            outcome = spec.func(CheckContext(self.config, seed), **arguments)
        except LabError as exc:
            logger.warning("check %s failed: %s", name, exc)
            return CheckReport(
                check=name,
                params=echo,
                max_abs_residual=None,
                passed=False,
                runtime_ms=self._elapsed(started),
                engine_version=self.config.engine_version,
                reason=f"{type(exc).__name__}: {exc}",
            )

        residual = float(outcome.residual)
        passed = outcome.passed
        reason = outcome.reason
        if passed is None:
            passed = tolerance is not None and math.isfinite(residual) and residual < tolerance
            if tolerance is None:
                reason = reason or f"no tolerance configured for check {name!r}"
            elif not passed:
                reason = reason or f"residual {residual:.3e} is not below tolerance {tolerance:.1e}"
        report = CheckReport(
            check=name,
            params={**echo, **outcome.details},
            max_abs_residual=residual,
            passed=bool(passed),
            runtime_ms=self._elapsed(started),
            engine_version=self.config.engine_version,
            reason=None if passed else reason,
        )
        logger.info("check %s finished: pass=%s residual=%.3e", name, report.passed, residual)
        return report

    def run_many(self, entries: Iterable[tuple[str, Mapping[str, Any]]]) -> list[CheckReport]:
        return [self.run(name, params) for name, params in entries]

    def run_suite(
        self, suite: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
    ) -> list[CheckReport]:
        """Run every entry of a loaded suite; ``overrides`` apply where a check accepts them."""

        overrides = overrides or {}
        entries = []
        for entry in suite["checks"]:
            name = entry["check"]
            params = {**entry.get("params", {}), **self.applicable(name, overrides)}
            entries.append((name, params))
        return self.run_many(entries)

    def _elapsed(self, started: float) -> int:
        if not self.config.record_timing:
            return 0
        return int(round((time.perf_counter() - started) * 1000))


__all__ = ["CheckRunner", "derive_seed"]
