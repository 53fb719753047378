"""Verification lab for the canonical Green current and the topological polylogarithm."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Type

from dotenv import load_dotenv

from config import CONFIG_MAPPING, Config

from .checks import CheckRunner, all_suites
from .models import ReportStore, db
from .reports import ENGINE_VERSION, RunConfig

__version__ = ENGINE_VERSION


@dataclass
class Lab:
    """Configured runner and report archive."""

    config_name: str
    config: Type[Config]
    run_config: RunConfig
    runner: CheckRunner
    store: ReportStore


def create_lab(config_name: str | None = None, **overrides) -> Lab:
    """Lab factory: load ``.env``, resolve the configuration, register the checks."""

    load_dotenv()

    resolved_config = (config_name or os.getenv("LAB_CONFIG", "development")).lower()
    config_class = CONFIG_MAPPING.get(resolved_config, Config)

    _ensure_directories(config_class)
    _configure_logging(config_class)

    db.init_app(config_class)

    run_config = RunConfig.from_config(config_class, **overrides)
    runner = CheckRunner(run_config)
    _register_checks(runner)
    _initialize_database()

    return Lab(resolved_config, config_class, run_config, runner, db)


def _ensure_directories(config_class: Type[Config]) -> None:
    Path(config_class.OUTPUT_DIR).mkdir(parents=True, exist_ok=True)
    Path(config_class.SUITE_DIR).mkdir(parents=True, exist_ok=True)
    url = config_class.DATABASE_URL
    if url.startswith("sqlite:///") and ":memory:" not in url:
        Path(url[len("sqlite:///"):]).parent.mkdir(parents=True, exist_ok=True)


def _configure_logging(config_class: Type[Config]) -> None:
    level = getattr(logging, str(config_class.LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("polylab").setLevel(level)


def _register_checks(runner: CheckRunner) -> None:
    for suite in all_suites():
        runner.register_suite(suite)


def _initialize_database() -> None:
    """Create the archive tables."""

    db.create_all()


__all__ = ["Lab", "create_lab", "db", "__version__"]
