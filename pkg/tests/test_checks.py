from __future__ import annotations

import pytest

from data import load_suite
from polylab import create_lab
from polylab.checks import CheckContext, CheckRunner, CheckSuite, Outcome, derive_seed
from polylab.exceptions import DegenerateLatticeError
from polylab.models import CheckRecord
from polylab.reports import RunConfig

CHECK_NAMES = [
    "legendre",
    "periodicity",
    "pushforward",
    "distribution",
    "theorem",
    "automorphy",
    "robert",
    "product-formula",
    "cohomology",
    "eigenspaces",
]


def _toy_suite() -> CheckSuite:
    suite = CheckSuite("toy")

    @suite.check("constant", tolerance="legendre", defaults={"value": 0.5})
    def constant(ctx, value):
        return Outcome(float(value), details={"drawn": float(ctx.rng.random())})

    @suite.check("untoleranced", defaults={})
    def untoleranced(ctx):
        return Outcome(0.0)

    @suite.check("degenerate", defaults={})
    def degenerate(ctx):
        raise DegenerateLatticeError("collinear periods")

    @suite.check("asserted", defaults={"fail": False})
    def asserted(ctx, fail):
        return Outcome.from_assertions({"first": True, "second": not fail})

    return suite


@pytest.fixture
def toy_config() -> RunConfig:
    return RunConfig(
        precision_target=2.220446049250313e-16,
        tolerances={"legendre": 1.0},
        seed=7,
        record_timing=False,
    )


@pytest.fixture
def runner(toy_config) -> CheckRunner:
    runner = CheckRunner(toy_config)
    runner.register_suite(_toy_suite())
    return runner


def test_numeric_outcome_is_compared_with_tolerance(runner):
    report = runner.run("constant")
    assert report.passed
    assert report.max_abs_residual == 0.5
    assert report.reason is None
    assert report.runtime_ms == 0
    assert report.params["seed"] == derive_seed(7, "constant")
    assert report.params["master_seed"] == 7
    assert report.params["tolerance"] == 1.0


def test_residual_above_tolerance_fails(runner):
    report = runner.run("constant", {"value": 2.0})
    assert not report.passed
    assert "not below tolerance" in report.reason


def test_tolerance_override(runner):
    report = runner.run("constant", {"value": 2.0, "tolerance": 3.0})
    assert report.passed
    assert report.params["tolerance"] == 3.0
    with pytest.raises(ValueError):
        runner.run("constant", {"tolerance": 0.0})


def test_numeric_check_without_tolerance_fails(runner):
    report = runner.run("untoleranced")
    assert not report.passed
    assert "no tolerance" in report.reason


def test_unknown_names_are_rejected(runner):
    with pytest.raises(ValueError):
        runner.run("constant", {"bogus": 1})
    with pytest.raises(ValueError):
        runner.run("missing")


def test_lab_errors_become_failed_reports(runner):
    report = runner.run("degenerate")
    assert not report.passed
    assert report.max_abs_residual is None
    assert report.reason == "DegenerateLatticeError: collinear periods"


def test_assertion_outcomes(runner):
    assert runner.run("asserted").passed
    report = runner.run("asserted", {"fail": True})
    assert not report.passed
    assert report.max_abs_residual == 1.0
    assert report.reason == "failed assertions: second"


def test_outcome_from_assertions():
    outcome = Outcome.from_assertions({"a": True, "b": False, "c": False}, extra=1)
    assert outcome.residual == 2.0
    assert outcome.passed is False
    assert outcome.details == {"assertions": 3, "extra": 1}
    assert outcome.reason == "failed assertions: b, c"


def test_reports_are_reproducible(toy_config):
    first, second = CheckRunner(toy_config), CheckRunner(toy_config)
    first.register_suite(_toy_suite())
    second.register_suite(_toy_suite())
    assert first.run("constant").to_json() == second.run("constant").to_json()


def test_derive_seed():
    assert derive_seed(7, "legendre") == derive_seed(7, "legendre")
    assert derive_seed(7, "legendre") != derive_seed(8, "legendre")
    assert derive_seed(7, "legendre") != derive_seed(7, "robert")
    assert 0 <= derive_seed(7, "legendre") < 2**64


def test_duplicate_registration_is_rejected(runner):
    suite = CheckSuite("dupes")
    suite.check("once", defaults={})(lambda ctx: Outcome(0.0))
    with pytest.raises(ValueError):
        suite.check("once", defaults={})(lambda ctx: Outcome(0.0))
    with pytest.raises(ValueError):
        runner.register_suite(_toy_suite())


def test_applicable_filters_overrides(runner):
    params = runner.applicable("constant", {"value": 1.5, "samples": 3, "tolerance": 2.0, "taus": None})
    assert params == {"value": 1.5, "tolerance": 2.0}


def test_run_suite_applies_overrides(runner):
    suite = {"checks": [{"check": "constant", "params": {"value": 0.1}}, {"check": "asserted", "params": {}}]}
    reports = runner.run_suite(suite, {"value": 5.0})
    assert [r.check for r in reports] == ["constant", "asserted"]
    assert not reports[0].passed
    assert reports[1].passed


def test_context_caches_evaluators(toy_config):
    ctx = CheckContext(toy_config, 3)
    assert ctx.evaluator("i") is ctx.evaluator(1j)
    assert ctx.evaluator("i") is not ctx.evaluator("0.25+2i")
    assert ctx.engine is ctx.engine
    assert CheckContext(toy_config, 3).rng.random() == CheckContext(toy_config, 3).rng.random()


def test_lab_registers_every_check(lab):
    assert lab.runner.names == CHECK_NAMES
    assert lab.run_config.record_timing is False


def test_legendre_check(lab):
    report = lab.runner.run("legendre", {"lattices": 5})
    assert report.passed, report.reason
    assert report.max_abs_residual < 1e-10


def test_small_numeric_checks(lab):
    for name, params in [
        ("periodicity", {"taus": ["i"], "samples": 3}),
        ("automorphy", {"taus": ["i"], "orders": [2, 3]}),
        ("distribution", {"taus": ["i"], "orders": [2], "samples": 3}),
        ("theorem", {"taus": ["i"], "orders": [2], "samples": 5}),
    ]:
        report = lab.runner.run(name, params)
        assert report.passed, f"{name}: {report.reason}"


def test_small_algebraic_checks(lab):
    report = lab.runner.run("cohomology", {"cases": [[1, 0, 2], [1, 1, 2]]})
    assert report.passed, report.reason
    assert report.params["punctured_ranks"]["1,0,2"] == [1, 5, 0]
    report = lab.runner.run(
        "eigenspaces",
        {"genera": [1], "multipliers": [2, 3], "weight_zero_cases": [[1, 2]], "norm_cases": [[1, 1, 3, 2]]},
    )
    assert report.passed, report.reason


def test_cohomology_over_budget_is_a_failed_report(monkeypatch):
    monkeypatch.setenv("LAB_CONFIG", "testing")
    lab = create_lab("testing", sheaf_budget=10)
    report = lab.runner.run("cohomology", {"cases": [[1, 1, 2]]})
    assert not report.passed
    assert report.reason.startswith("BudgetExceededError")


def test_small_product_formula_check(lab):
    report = lab.runner.run("product-formula", {"dims": [[1, 1]], "corpus": 5})
    assert report.passed, report.reason
    assert report.params["trace_lengths"]["1x1"] <= 40


def test_archive_records_runs(monkeypatch):
    monkeypatch.setenv("LAB_CONFIG", "testing")
    lab = create_lab("testing", sheaf_budget=10)
    reports = [
        lab.runner.run("legendre", {"lattices": 2}),
        lab.runner.run("cohomology", {"cases": [[1, 1, 2]]}),
    ]
    run_id = lab.store.record_run(reports, lab.config_name, lab.run_config.seed, lab.run_config.engine_version)
    runs = lab.store.runs()
    assert [run.id for run in runs] == [run_id]
    assert [record.check_name for record in runs[0].records] == ["legendre", "cohomology"]
    assert runs[0].records[1].max_abs_residual is None
    assert not runs[0].passed


def test_check_record_from_report(lab):
    record = CheckRecord.from_report(lab.runner.run("legendre", {"lattices": 1}))
    assert record.check_name == "legendre"
    assert record.passed
    assert '"lattices": 1' in record.params


@pytest.mark.slow
def test_acceptance_suite_passes(lab):
    suite = load_suite(lab.run_config.suite_dir / "acceptance.json")
    reports = lab.runner.run_suite(suite)
    failed = {r.check: r.reason for r in reports if not r.passed}
    assert not failed
