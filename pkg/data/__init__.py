"""Check suites bundled with the lab and helpers to load them."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Iterator

logger = logging.getLogger(__name__)

SUITE_DIR = Path(__file__).resolve().parent / "suites"


def _validate_suite_payload(payload: Any) -> str:
    if not isinstance(payload, dict):
        raise ValueError("Suite content must be a JSON object.")

    metadata = payload.get("metadata", {})
    if metadata and not isinstance(metadata, dict):
        raise ValueError("The 'metadata' field must be an object when provided.")

    suite_id = str(payload.get("id") or metadata.get("id") or "").strip()
    if not suite_id:
        raise ValueError("A suite must define an 'id' or metadata.id value.")

    checks = payload.get("checks")
    if checks is None:
        raise ValueError("The suite must include a 'checks' array.")
    if not isinstance(checks, list):
        raise ValueError("The 'checks' field must be an array of check entries.")
    for index, entry in enumerate(checks, start=1):
        if not isinstance(entry, dict):
            raise ValueError(f"Check {index} must be a JSON object.")
        if not isinstance(entry.get("check"), str) or not entry["check"].strip():
            raise ValueError(f"Check {index} must name a check.")
        params = entry.get("params", {})
        if not isinstance(params, dict):
            raise ValueError(f"The params of check {index} must be an object.")

    return suite_id


def load_suite(path: Path | str) -> dict[str, Any]:
    """Read and validate one suite file; raises ``ValueError`` on malformed content."""

    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValueError(f"Invalid suite file {path.name}: {exc}") from exc
    suite_id = _validate_suite_payload(payload)
    return {
        "id": suite_id,
        "metadata": payload.get("metadata") or {},
        "checks": [
            {"check": entry["check"].strip(), "params": dict(entry.get("params", {}))}
            for entry in payload["checks"]
        ],
        "path": str(path),
    }


def iter_suites(directory: Path | str = SUITE_DIR) -> Iterator[dict[str, Any]]:
    """Yield every readable suite under ``directory``; broken files are logged and skipped."""

    directory = Path(directory)
    if not directory.exists():
        return
    for suite_file in sorted(directory.rglob("*.json")):
        if not suite_file.is_file():
            continue
        try:
            yield load_suite(suite_file)
        except (OSError, ValueError):
            logger.warning("Failed to parse suite file %s", suite_file)


__all__ = ["SUITE_DIR", "load_suite", "iter_suites"]
