from __future__ import annotations

import os
from pathlib import Path
from typing import Mapping

BASE_DIR = Path(__file__).resolve().parent
INSTANCE_DIR = BASE_DIR / "instance"
DATA_DIR = BASE_DIR / "data"

DEFAULT_TOLERANCES = {
    "legendre": 1e-10,
    "periodicity": 1e-9,
    "automorphy": 1e-9,
    "pushforward": 1e-7,
    "distribution": 1e-7,
    "robert": 1e-7,
    "theorem": 1e-6,
}


def _parse_tolerances(raw: str | None, default: Mapping[str, float]) -> dict[str, float]:
    """Merge a ``name=value,name=value`` list over ``default``."""

    tolerances = dict(default)
    if not raw:
        return tolerances
    for item in raw.split(","):
        cleaned = item.strip()
        if not cleaned:
            continue
        name, sep, value = cleaned.partition("=")
        if not sep:
            raise ValueError(f"tolerance entry {cleaned!r} is not of the form name=value")
        tolerance = float(value)
        if tolerance <= 0:
            raise ValueError(f"tolerance for {name.strip()!r} must be positive")
        tolerances[name.strip()] = tolerance
    return tolerances


class Config:
    """Base configuration shared by all environments."""

    OUTPUT_DIR = Path(os.getenv("LAB_OUTPUT_DIR", INSTANCE_DIR / "reports"))
    SEED = int(os.getenv("LAB_SEED", 7))
    PRECISION_TARGET = float(os.getenv("LAB_PRECISION", 2.220446049250313e-16))
    REPORT_FORMAT = os.getenv("LAB_REPORT_FORMAT", "jsonl")
    TOLERANCES = _parse_tolerances(os.getenv("LAB_TOLERANCES"), DEFAULT_TOLERANCES)

    SINGULAR_RADIUS = 0.05
    SERIES_TRUNCATION_BOUND = 30
    REWRITE_BUDGET = 10_000
    SHEAF_BUDGET = 20_000

    SUITE_DIR = DATA_DIR / "suites"
    DEFAULT_SUITE = "acceptance"

    DATABASE_URL = os.getenv("DATABASE_URL", f"sqlite:///{INSTANCE_DIR / 'reports.db'}")
    LOG_LEVEL = os.getenv("LAB_LOG_LEVEL", "WARNING")
    RECORD_TIMING = True


class DevelopmentConfig(Config):
    LOG_LEVEL = os.getenv("LAB_LOG_LEVEL", "INFO")


class TestingConfig(Config):
    TESTING = True
    DATABASE_URL = "sqlite:///:memory:"
    RECORD_TIMING = False


class ProductionConfig(Config):
    TESTING = False


CONFIG_MAPPING = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}
