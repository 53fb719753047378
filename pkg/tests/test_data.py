from __future__ import annotations

import json
import logging

import pytest

from data import SUITE_DIR, iter_suites, load_suite
from polylab.checks import CheckRunner, all_suites
from polylab.reports import RunConfig


def _write(path, payload) -> None:
    path.write_text(json.dumps(payload) if not isinstance(payload, str) else payload, encoding="utf-8")


def test_bundled_suites_name_registered_checks():
    runner = CheckRunner(RunConfig(precision_target=1e-16, tolerances={}, seed=0))
    for suite in all_suites():
        runner.register_suite(suite)
    suites = {suite["id"]: suite for suite in iter_suites(SUITE_DIR)}
    assert set(suites) >= {"acceptance", "smoke"}
    for suite in suites.values():
        names = [entry["check"] for entry in suite["checks"]]
        assert names == runner.names
        for entry in suite["checks"]:
            assert set(entry["params"]) <= set(runner.get(entry["check"]).defaults)


def test_load_suite_normalizes_entries(tmp_path):
    path = tmp_path / "custom.json"
    _write(path, {"metadata": {"id": "custom"}, "checks": [{"check": " legendre "}]})
    suite = load_suite(path)
    assert suite["id"] == "custom"
    assert suite["checks"] == [{"check": "legendre", "params": {}}]
    assert suite["path"] == str(path)


@pytest.mark.parametrize(
    "payload, message",
    [
        ([], "JSON object"),
        ({"checks": []}, "'id'"),
        ({"id": "x"}, "'checks' array"),
        ({"id": "x", "checks": {}}, "array of check entries"),
        ({"id": "x", "checks": ["legendre"]}, "Check 1"),
        ({"id": "x", "checks": [{"check": ""}]}, "must name a check"),
        ({"id": "x", "checks": [{"check": "legendre", "params": []}]}, "params of check 1"),
        ({"id": "x", "metadata": "notes", "checks": []}, "metadata"),
    ],
)
def test_malformed_suites_are_rejected(tmp_path, payload, message):
    path = tmp_path / "bad.json"
    _write(path, payload)
    with pytest.raises(ValueError, match=message):
        load_suite(path)


def test_invalid_json_is_a_value_error(tmp_path):
    path = tmp_path / "broken.json"
    _write(path, "{not json")
    with pytest.raises(ValueError, match="broken.json"):
        load_suite(path)


def test_iter_suites_skips_broken_files(tmp_path, caplog):
    _write(tmp_path / "a.json", {"id": "good", "checks": []})
    _write(tmp_path / "b.json", "{not json")
    with caplog.at_level(logging.WARNING, logger="data"):
        suites = list(iter_suites(tmp_path))
    assert [suite["id"] for suite in suites] == ["good"]
    assert "Failed to parse suite file" in caplog.text


def test_iter_suites_on_missing_directory(tmp_path):
    assert list(iter_suites(tmp_path / "absent")) == []
