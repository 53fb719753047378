"""Check reports, run configuration and the report sinks.

Reports are written one JSON object per line, or as a flat comma-separated
table. Complex numbers are written in the ``a+bi`` syntax accepted by the
command line.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Any, Iterable, Mapping, Optional

ENGINE_VERSION = "0.4.0"
REPORT_FORMATS = ("jsonl", "csv")
REPORT_KEYS = ("check", "params", "max_abs_residual", "pass", "runtime_ms", "engine_version", "reason")

_COMPLEX_CHARS = re.compile(r"^[0-9.eE+-]*[ij]?$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` (optional scientific notation); ``i`` alone is ``1j``.

    Accepted: ``0.3+0.4i``, ``i``, ``-2i``, ``1e-8``, ``0.5+.866i``.
    """

    cleaned = str(text).strip().replace(" ", "")
    if not cleaned or not _COMPLEX_CHARS.match(cleaned):
        raise ValueError(f"cannot parse {text!r} as a complex number (expected a+bi)")
    if cleaned[-1] in "ij":
        coefficient = cleaned[:-1]
        if not coefficient or coefficient[-1] in "+-":
            coefficient += "1"
        cleaned = coefficient + "j"
    try:
        value = complex(cleaned)
    except ValueError:
        raise ValueError(f"cannot parse {text!r} as a complex number (expected a+bi)") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{text!r} is not finite")
    return value


def _format_float(value: float) -> str:
    return repr(float(value))


def format_complex(value: complex) -> str:
    """Inverse of :func:`parse_complex` for finite values."""

    value = complex(value)
    if value.imag == 0:
        return _format_float(value.real)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{_format_float(value.real)}{sign}{_format_float(abs(value.imag))}i"


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, complex):
        return format_complex(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return str(value)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check run; ``params`` echoes every input needed to reproduce it."""

    check: str
    params: Mapping[str, Any]
    max_abs_residual: Optional[float]
    passed: bool
    runtime_ms: int = 0
    engine_version: str = ENGINE_VERSION
    reason: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        residual = self.max_abs_residual
        return {
            "check": self.check,
            "params": _jsonable(dict(self.params)),
            "max_abs_residual": None if residual is None else _jsonable(float(residual)),
            "pass": bool(self.passed),
            "runtime_ms": int(self.runtime_ms),
            "engine_version": self.engine_version,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "CheckReport":
        missing = [key for key in REPORT_KEYS if key not in payload]
        if missing:
            raise ValueError(f"report is missing keys: {', '.join(missing)}")
        residual = payload["max_abs_residual"]
        return cls(
            check=str(payload["check"]),
            params=dict(payload["params"]),
            max_abs_residual=None if residual is None else float(residual),
            passed=bool(payload["pass"]),
            runtime_ms=int(payload["runtime_ms"]),
            engine_version=str(payload["engine_version"]),
            reason=payload["reason"],
        )


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every check of a run."""

    precision_target: float
    tolerances: Mapping[str, float]
    seed: int
    report_format: str = "jsonl"
    output_path: Optional[Path] = None
    record_timing: bool = True
    singular_radius: float = 0.05
    truncation_bound: int = 30
    rewrite_budget: int = 10_000
    sheaf_budget: int = 20_000
    suite_dir: Optional[Path] = None
    default_suite: str = "acceptance"
    engine_version: str = ENGINE_VERSION
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.precision_target <= 0:
            raise ValueError("precision target must be positive")
        bad = [name for name, value in self.tolerances.items() if not value > 0]
        if bad:
            raise ValueError(f"tolerances must be positive: {', '.join(sorted(bad))}")
        if self.report_format not in REPORT_FORMATS:
            raise ValueError(f"report format must be one of {', '.join(REPORT_FORMATS)}")

    @classmethod
    def from_config(cls, config_class, **overrides: Any) -> "RunConfig":
        values = {
            "precision_target": config_class.PRECISION_TARGET,
            "tolerances": dict(config_class.TOLERANCES),
            "seed": config_class.SEED,
            "report_format": config_class.REPORT_FORMAT,
            "output_path": None,
            "record_timing": config_class.RECORD_TIMING,
            "singular_radius": config_class.SINGULAR_RADIUS,
            "truncation_bound": config_class.SERIES_TRUNCATION_BOUND,
            "rewrite_budget": config_class.REWRITE_BUDGET,
            "sheaf_budget": config_class.SHEAF_BUDGET,
            "suite_dir": Path(config_class.SUITE_DIR),
            "default_suite": config_class.DEFAULT_SUITE,
        }
        tolerances = overrides.pop("tolerances", None)
        if tolerances:
            values["tolerances"] = {**values["tolerances"], **tolerances}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def tolerance(self, name: str) -> Optional[float]:
        return self.tolerances.get(name)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)


def write_jsonl(reports: Iterable[CheckReport], stream: IO[str]) -> int:
    count = 0
    for report in reports:
        stream.write(report.to_json() + "\n")
        count += 1
    return count


def write_csv(reports: Iterable[CheckReport], stream: IO[str]) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REPORT_KEYS)
    count = 0
    for report in reports:
        row = report.to_dict()
        row["params"] = json.dumps(row["params"], sort_keys=True)
        writer.writerow(["" if row[key] is None else row[key] for key in REPORT_KEYS])
        count += 1
    return count


def write_reports(reports: Iterable[CheckReport], stream: IO[str], report_format: str = "jsonl") -> int:
    if report_format == "jsonl":
        return write_jsonl(reports, stream)
    if report_format == "csv":
        return write_csv(reports, stream)
    raise ValueError(f"unknown report format {report_format!r}")


def read_jsonl(stream: IO[str]) -> list[CheckReport]:
    return [CheckReport.from_dict(json.loads(line)) for line in stream if line.strip()]


__all__ = [
    "ENGINE_VERSION",
    "REPORT_FORMATS",
    "REPORT_KEYS",
    "CheckReport",
    "RunConfig",
    "parse_complex",
    "format_complex",
    "write_jsonl",
    "write_csv",
    "write_reports",
    "read_jsonl",
]
