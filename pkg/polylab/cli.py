"""Command-line front end: ``eval``, ``check`` and ``table``."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any, Iterator, Optional

import mpmath

from data import load_suite

from . import create_lab
from .current import GreenEvaluator, g_value_fourier, grid_points
from .elliptic import modular_values, quasi_periods, sigma_evaluator
from .exceptions import LabError, SingularSignal
from .lattice import EPS, Lattice
from .reports import REPORT_FORMATS, format_complex, parse_complex, write_reports

EVAL_TARGETS = ("g", "sigma", "phi", "quasi-periods", "modular")
MAX_DIGITS = 15

COMPLEX_HELP = (
    "complex numbers are written a+bi with optional scientific notation, "
    "e.g. 0.3+0.4i, -2i, 1e-8, 0.5+0.8660254037844386i; i alone means 1j"
)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid_arg(text: str) -> tuple[int, int]:
    rows, sep, cols = text.lower().partition("x")
    try:
        shape = (int(rows), int(cols))
    except ValueError:
        shape = None
    if not sep or shape is None or min(shape) < 1:
        raise argparse.ArgumentTypeError(f"grid must look like ROWSxCOLS, got {text!r}")
    return shape


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylab",
        description="Verify the canonical Green current and the topological polylogarithm",
        epilog=COMPLEX_HELP,
    )
    parser.add_argument("--config", dest="config_name", help="Configuration name (development, testing, production)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    eval_parser = subparsers.add_parser("eval", help="Evaluate a special function", epilog=COMPLEX_HELP)
    eval_parser.add_argument("target", choices=EVAL_TARGETS)
    eval_parser.add_argument("--tau", type=_complex_arg, default=1j, help="Modulus (default i)")
    eval_parser.add_argument("--z", type=_complex_arg, default=None, help="Evaluation point")
    eval_parser.add_argument("--z0", type=_complex_arg, default=None, help="Torsion point of the translation unit")
    eval_parser.add_argument("--N", dest="order", type=int, default=None, help="Order of z0")

    check_parser = subparsers.add_parser("check", help="Run verification checks", epilog=COMPLEX_HELP)
    check_parser.add_argument("name", help="Check name, or 'all' for the suite file")
    check_parser.add_argument("--tau", type=_complex_arg, default=None)
    check_parser.add_argument("--N", dest="order", type=int, default=None, help="Torsion order (degree n for pushforward)")
    check_parser.add_argument("--n", dest="level", type=int, default=None, help="Level of the logarithm sheaf")
    check_parser.add_argument("--g", dest="genus", type=int, default=None, help="Genus of the torus")
    check_parser.add_argument("--a", dest="multiplier", type=int, default=None, help="Trace multiplier")
    check_parser.add_argument("--samples", type=int, default=None)
    check_parser.add_argument("--gA", dest="dim_a", type=int, default=None, help="Dimension of the first factor")
    check_parser.add_argument("--gB", dest="dim_b", type=int, default=None, help="Dimension of the second factor")
    check_parser.add_argument("--tol", dest="tolerance", type=float, default=None, help="Override the tolerance")
    check_parser.add_argument("--seed", type=int, default=None, help="Master seed")
    check_parser.add_argument("--suite", default=None, help="Suite file used by 'all'")
    check_parser.add_argument("--format", dest="report_format", choices=REPORT_FORMATS, default=None)
    check_parser.add_argument("--output", default=None, help="Report file ('-' for standard output)")
    check_parser.add_argument("--save", action="store_true", help="Write the reports under the output directory")
    check_parser.add_argument("--archive", action="store_true", help="Store the reports in the run archive")

    table_parser = subparsers.add_parser("table", help="Tabulate g over the fundamental parallelogram", epilog=COMPLEX_HELP)
    table_parser.add_argument("--tau", type=_complex_arg, default=1j)
    table_parser.add_argument("--grid", type=_grid_arg, default=(10, 10), help="ROWSxCOLS (default 10x10)")
    table_parser.add_argument("--margin", type=float, default=0.0, help="Grid spans [m, 1-m] in lattice coordinates")
    table_parser.add_argument("--output", default=None, help="Table file ('-' for standard output)")
    return parser


@contextmanager
def _open_output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as handle:
        yield handle


def trustworthy_digits(value: complex, reference: complex) -> int:
    """Decimal digits on which two independent evaluations agree."""

    scale = max(abs(reference), abs(value))
    if scale == 0:
        return MAX_DIGITS
    error = abs(value - reference) / scale
    if error <= EPS:
        return MAX_DIGITS
    return max(0, min(MAX_DIGITS, int(math.floor(-math.log10(error)))))


def _sigma_reference(lattice: Lattice, eta1: complex, z: complex) -> complex:
    """Sigma through mpmath's theta function at 30 digits."""

    with mpmath.workdps(30):
        omega1 = mpmath.mpc(lattice.omega1)
        q = mpmath.exp(1j * mpmath.pi * mpmath.mpc(lattice.tau))
        v = mpmath.pi * mpmath.mpc(z) / omega1
        theta = mpmath.jtheta(1, v, q) / mpmath.jtheta(1, 0, q, 1)
        value = omega1 / mpmath.pi * mpmath.exp(mpmath.mpc(eta1) * mpmath.mpc(z) ** 2 / (2 * omega1)) * theta
        return complex(value)


def _print_value(name: str, value: Any, digits: Optional[int]) -> None:
    text = format_complex(value) if isinstance(value, complex) else repr(value)
    suffix = f"  (digits: {digits})" if digits is not None else ""
    print(f"{name} = {text}{suffix}")


def _cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    lab = create_lab(args.config_name)
    lattice = Lattice.from_tau(args.tau)
    print(f"tau = {format_complex(lattice.tau)}")
    target = args.target
    needs_z = target in ("g", "sigma", "phi")
    if needs_z and args.z is None:
        parser.error(f"eval {target} needs --z")

    if target == "quasi-periods":
        quasi = quasi_periods(lattice)
        digits = trustworthy_digits(1.0, 1.0 + quasi.crosscheck_residual)
        _print_value("eta1", quasi.eta1, digits)
        _print_value("eta2", quasi.eta2, digits)
        _print_value("legendre_residual", quasi.legendre_residual, None)
        return 0
    if target == "modular":
        modular = modular_values(lattice)
        digits = trustworthy_digits(1.0, 1.0 + modular.crosscheck_residual)
        _print_value("dedekind_eta", modular.dedekind_eta, digits)
        _print_value("delta", modular.delta, digits)
        _print_value("abs_delta", abs(modular.delta), digits)
        return 0
    if target == "sigma":
        quasi = quasi_periods(lattice)
        value = sigma_evaluator(lattice, quasi, lab.run_config.truncation_bound).sigma(args.z)
        _print_value("sigma", complex(value), trustworthy_digits(value, _sigma_reference(lattice, quasi.eta1, args.z)))
        if args.z != 0:
            _print_value("sigma/z", complex(value) / args.z, None)
        return 0

    evaluator = GreenEvaluator.for_lattice(
        lattice,
        singular_radius=lab.run_config.singular_radius,
        truncation_bound=lab.run_config.truncation_bound,
    )
    if target == "g":
        value = evaluator.g_value(args.z)
        _print_value("g", value, trustworthy_digits(value, g_value_fourier(evaluator, args.z)))
        return 0

    if args.z0 is None or args.order is None:
        parser.error("eval phi needs --z0 and --N")
    unit = evaluator.translation_unit(args.z0, args.order)
    value = unit.phi_value(args.z)
    digits = None
    if evaluator.is_regular(args.z) and evaluator.is_regular(args.z - args.z0):
        difference = evaluator.g_value(args.z - args.z0) - evaluator.g_value(args.z)
        digits = trustworthy_digits(-2 * math.log(abs(value)), difference)
    _print_value("phi", value, digits)
    return 0


def _check_overrides(args: argparse.Namespace) -> dict[str, Any]:
    dims = None
    if args.dim_a is not None or args.dim_b is not None:
        dims = [[args.dim_a or 1, args.dim_b or 1]]
    return {
        "taus": [format_complex(args.tau)] if args.tau is not None else None,
        "orders": [args.order] if args.order is not None else None,
        "levels": [args.level] if args.level is not None else None,
        "genus": args.genus,
        "genera": [args.genus] if args.genus is not None else None,
        "multiplier": args.multiplier,
        "samples": args.samples,
        "dims": dims,
        "tolerance": args.tolerance,
    }


def _cmd_check(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    lab = create_lab(args.config_name, seed=args.seed, report_format=args.report_format)
    runner = lab.runner
    overrides = _check_overrides(args)
    if args.name == "all":
        suite_name = args.suite or lab.run_config.default_suite
        suite_path = Path(suite_name)
        if not suite_path.suffix:
            suite_path = lab.run_config.suite_dir / f"{suite_name}.json"
        suite = load_suite(suite_path)
        reports = runner.run_suite(suite, overrides)
    else:
        reports = [runner.run(args.name, runner.applicable(args.name, overrides))]

    report_format = lab.run_config.report_format
    output = args.output
    if args.save and output is None:
        output = str(Path(lab.config.OUTPUT_DIR) / f"{args.name}.{report_format}")
    with _open_output(output) as stream:
        write_reports(reports, stream, report_format)

    if args.archive:
        lab.store.record_run(reports, lab.config_name, lab.run_config.seed, lab.run_config.engine_version)
    return 0 if all(report.passed for report in reports) else 1


def _cmd_table(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    lab = create_lab(args.config_name)
    evaluator = GreenEvaluator.for_tau(
        args.tau,
        singular_radius=lab.run_config.singular_radius,
        truncation_bound=lab.run_config.truncation_bound,
    )
    rows, cols = args.grid
    points = grid_points(evaluator.host, rows, cols, margin=args.margin).ravel()
    values, singular = evaluator.g_values(points)
    with _open_output(args.output) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["re_z", "im_z", "g"])
        for z, value, is_singular in zip(points, values, singular):
            writer.writerow([repr(float(z.real)), repr(float(z.imag)), "singular" if is_singular else repr(float(value))])
    return 0


COMMANDS = {"eval": _cmd_eval, "check": _cmd_check, "table": _cmd_table}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        return COMMANDS[args.command](args, parser)
    except SingularSignal as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        parser.error(str(exc))
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0  # pragma: no cover - parser.error exits


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    sys.exit(main())
