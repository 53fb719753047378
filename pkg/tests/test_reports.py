from __future__ import annotations

import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config import CONFIG_MAPPING, DEFAULT_TOLERANCES, _parse_tolerances
from polylab.reports import (
    REPORT_KEYS,
    CheckReport,
    RunConfig,
    format_complex,
    parse_complex,
    read_jsonl,
    write_reports,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0.3+0.4i", 0.3 + 0.4j),
        ("i", 1j),
        ("-i", -1j),
        ("1-i", 1 - 1j),
        ("-2i", -2j),
        ("2i", 2j),
        ("1e-8", 1e-8),
        ("0.5+.866i", 0.5 + 0.866j),
        (" 0.25 + 2i ", 0.25 + 2j),
        ("3", 3),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["abc", "", "1+2k", "inf", "1.2.3i", "nan"])
def test_parse_complex_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_format_complex():
    assert format_complex(0.3 + 0.4j) == "0.3+0.4i"
    assert format_complex(1 - 2j) == "1.0-2.0i"
    assert format_complex(1.5) == "1.5"


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=200, deadline=None)
@given(real=finite, imag=finite)
def test_formatted_complex_parses_back(real, imag):
    value = complex(real, imag)
    assert parse_complex(format_complex(value)) == value


def _report(**overrides) -> CheckReport:
    values = dict(
        check="legendre",
        params={"lattices": 3, "tau": 1j},
        max_abs_residual=1e-14,
        passed=True,
        runtime_ms=0,
    )
    values.update(overrides)
    return CheckReport(**values)


def test_report_dict_uses_wire_keys():
    payload = _report().to_dict()
    assert tuple(payload) == REPORT_KEYS
    assert payload["pass"] is True
    assert payload["params"]["tau"] == "0.0+1.0i"
    assert payload["reason"] is None


def test_report_needs_every_key():
    payload = _report().to_dict()
    del payload["engine_version"]
    with pytest.raises(ValueError, match="engine_version"):
        CheckReport.from_dict(payload)


def test_jsonl_reports_read_back():
    reports = [_report(), _report(check="robert", max_abs_residual=None, passed=False, reason="boom")]
    stream = io.StringIO()
    assert write_reports(reports, stream) == 2
    stream.seek(0)
    restored = read_jsonl(stream)
    assert [r.check for r in restored] == ["legendre", "robert"]
    assert restored[1].max_abs_residual is None
    assert restored[1].reason == "boom"


def test_csv_reports_have_header_and_flat_params():
    stream = io.StringIO()
    write_reports([_report()], stream, "csv")
    header, row = stream.getvalue().splitlines()
    assert header == ",".join(REPORT_KEYS)
    assert row.startswith("legendre,")
    assert json.dumps({"lattices": 3, "tau": "0.0+1.0i"}, sort_keys=True).replace('"', '""') in row


def test_unknown_report_format():
    with pytest.raises(ValueError):
        write_reports([], io.StringIO(), "xml")


@pytest.mark.parametrize(
    "overrides",
    [
        {"precision_target": 0},
        {"tolerances": {"legendre": -1.0}},
        {"report_format": "yaml"},
    ],
)
def test_run_config_validation(overrides):
    values = dict(precision_target=1e-16, tolerances={}, seed=1)
    values.update(overrides)
    with pytest.raises(ValueError):
        RunConfig(**values)


def test_run_config_from_config_merges_overrides():
    config = RunConfig.from_config(CONFIG_MAPPING["testing"], seed=99, tolerances={"robert": 1e-3}, report_format=None)
    assert config.seed == 99
    assert config.tolerance("robert") == 1e-3
    assert config.tolerance("legendre") == CONFIG_MAPPING["testing"].TOLERANCES["legendre"]
    assert config.report_format == CONFIG_MAPPING["testing"].REPORT_FORMAT
    assert config.record_timing is False
    assert config.with_seed(5).seed == 5


def test_parse_tolerances():
    assert _parse_tolerances(None, DEFAULT_TOLERANCES) == DEFAULT_TOLERANCES
    merged = _parse_tolerances("robert=1e-3, theorem=0.5,", DEFAULT_TOLERANCES)
    assert merged["robert"] == 1e-3
    assert merged["theorem"] == 0.5
    assert merged["legendre"] == DEFAULT_TOLERANCES["legendre"]
    with pytest.raises(ValueError):
        _parse_tolerances("robert", DEFAULT_TOLERANCES)
    with pytest.raises(ValueError):
        _parse_tolerances("robert=0", DEFAULT_TOLERANCES)
