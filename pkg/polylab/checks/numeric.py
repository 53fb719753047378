"""Numerical checks of the genus-one identities."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from ..current import (
    GreenEvaluator,
    automorphy_check,
    distribution_check,
    main_theorem_check,
    pushforward_check,
    robert_trace_check,
    sample_points,
)
from ..elliptic import quasi_periods, sigma_evaluator
from ..lattice import Lattice, division_preimages, enumerate_torsion, reduce_lattice
from .base import CheckContext, CheckSuite, Outcome

suite = CheckSuite("numeric")

DEFAULT_TAUS = ("i", "0.5+0.8660254037844386i", "0.25+2i")
THEOREM_TAUS = ("i", "0.5+1i")


def _torsion_values(lattice: Lattice, order: int) -> list[complex]:
    return [point.value for point in enumerate_torsion(lattice, order)]


def _regular(evaluator: GreenEvaluator, points: Sequence[complex]) -> bool:
    return bool(np.all(evaluator.is_regular(np.asarray(points, dtype=complex))))


def random_reduced_lattice(rng: np.random.Generator) -> Lattice:
    """A random homothety class, reduced, with a random scale and rotation."""

    omega1 = cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(-math.pi, math.pi))
    tau = complex(rng.uniform(-2.0, 2.0), rng.uniform(0.4, 2.5))
    return reduce_lattice(omega1, omega1 * tau)[0]


@suite.check(
    "legendre",
    tolerance="legendre",
    defaults={"lattices": 20},
)
def legendre(ctx: CheckContext, lattices: int) -> Outcome:
    """``|eta1*omega2 - eta2*omega1 - 2*pi*i|`` on seeded random reduced lattices."""

    worst = 0.0
    for _ in range(lattices):
        lattice = random_reduced_lattice(ctx.rng)
        quasi = quasi_periods(lattice)
        worst = max(worst, abs(quasi.eta1 * lattice.omega2 - quasi.eta2 * lattice.omega1 - 2j * math.pi))
    return Outcome(worst)


@suite.check(
    "periodicity",
    tolerance="periodicity",
    defaults={"taus": list(DEFAULT_TAUS), "samples": 20},
)
def periodicity(ctx: CheckContext, taus: Sequence[str], samples: int) -> Outcome:
    """Relative error of ``sigma(z + w) = -exp(eta(w)(z + w/2)) sigma(z)`` for w = omega1, omega2, omega1 + omega2."""

    worst = 0.0
    for tau in taus:
        lattice = ctx.lattice(tau)
        quasi = quasi_periods(lattice)
        evaluator = sigma_evaluator(lattice, quasi, ctx.config.truncation_bound, ctx.config.precision_target)
        zs = sample_points(lattice, ctx.rng, samples, accept=lambda z: lattice.distance_to_lattice(z) > 0.05)
        for omega in (lattice.omega1, lattice.omega2, lattice.omega1 + lattice.omega2):
            eta_omega = quasi.eta_linear(omega)
            for z in zs:
                expected = -cmath.exp(eta_omega * (z + omega / 2)) * evaluator.sigma(z)
                worst = max(worst, abs(evaluator.sigma(z + omega) - expected) / abs(expected))
    return Outcome(worst)


@suite.check(
    "pushforward",
    tolerance="pushforward",
    defaults={"taus": list(DEFAULT_TAUS), "orders": [2, 3], "samples": 20},
)
def pushforward(ctx: CheckContext, taus: Sequence[str], orders: Sequence[int], samples: int) -> Outcome:
    """``|sum_{n w = z} g(w) - g(z)|`` for each degree ``n`` in ``orders``."""

    worst = 0.0
    for tau in taus:
        evaluator = ctx.evaluator(tau)
        lattice = evaluator.host
        for n in orders:
            zs = sample_points(
                lattice,
                ctx.rng,
                samples,
                accept=lambda z: _regular(evaluator, [z, *division_preimages(lattice, z, n)]),
            )
            worst = max(worst, max(pushforward_check(evaluator, n, z) for z in zs))
    return Outcome(worst)


@suite.check(
    "distribution",
    tolerance="distribution",
    defaults={"taus": list(DEFAULT_TAUS), "orders": [2, 3, 5], "samples": 20},
)
def distribution(ctx: CheckContext, taus: Sequence[str], orders: Sequence[int], samples: int) -> Outcome:
    """``|g(N z) - sum_{sigma in E[N]} g(z + sigma)|``."""

    worst = 0.0
    for tau in taus:
        evaluator = ctx.evaluator(tau)
        lattice = evaluator.host
        for order in orders:
            shifts = _torsion_values(lattice, order)
            zs = sample_points(
                lattice,
                ctx.rng,
                samples,
                accept=lambda z: _regular(evaluator, [order * z, *(z + s for s in shifts)]),
            )
            worst = max(worst, max(distribution_check(evaluator, order, z) for z in zs))
    return Outcome(worst)


@suite.check(
    "theorem",
    tolerance="theorem",
    defaults={"taus": list(THEOREM_TAUS), "orders": [2, 3], "samples": 100},
)
def theorem(ctx: CheckContext, taus: Sequence[str], orders: Sequence[int], samples: int) -> Outcome:
    """``|g(N z) - N^2 g(z) + 2 sum_{sigma != 0} log|phi_{-sigma}(z)||``."""

    worst = 0.0
    for tau in taus:
        evaluator = ctx.evaluator(tau)
        lattice = evaluator.host
        for order in orders:
            shifts = _torsion_values(lattice, order)
            zs = sample_points(
                lattice,
                ctx.rng,
                samples,
                accept=lambda z: _regular(evaluator, [order * z, *(z + s for s in shifts)]),
            )
            worst = max(worst, max(main_theorem_check(evaluator, order, z) for z in zs))
    return Outcome(worst)


@suite.check(
    "automorphy",
    tolerance="automorphy",
    defaults={"taus": list(DEFAULT_TAUS), "orders": [2, 3, 5]},
)
def automorphy(ctx: CheckContext, taus: Sequence[str], orders: Sequence[int]) -> Outcome:
    """``|alpha(omega, z0)^N - 1|`` and ``|alpha(omega1, omega2/N) - exp(-2*pi*i/N)|``."""

    torsion = legendre_value = 0.0
    for tau in taus:
        evaluator = ctx.evaluator(tau)
        for order in orders:
            residual = automorphy_check(evaluator, order)
            torsion = max(torsion, residual.torsion)
            legendre_value = max(legendre_value, residual.legendre_value)
    return Outcome(max(torsion, legendre_value), details={"torsion": torsion, "legendre_value": legendre_value})


@suite.check(
    "robert",
    tolerance="robert",
    defaults={"taus": ["i"], "orders": [2, 3, 5], "multiplier": None, "samples": 10},
)
def robert(
    ctx: CheckContext, taus: Sequence[str], orders: Sequence[int], multiplier, samples: int
) -> Outcome:
    """Modulus residual and phase drift of ``prod_{a w = z} phi(w) / phi(z)``; ``a`` defaults to ``N + 1``."""

    modulus = drift = 0.0
    for tau in taus:
        evaluator = ctx.evaluator(tau)
        lattice = evaluator.host
        for order in orders:
            a = int(multiplier) if multiplier is not None else order + 1
            for point in enumerate_torsion(lattice, order):
                if point.is_zero:
                    continue
                unit = evaluator.translation_unit(point.value, order)

                def accept(z: complex) -> bool:
                    fibre = [z, *division_preimages(lattice, z, a)]
                    return _regular(evaluator, fibre) and _regular(evaluator, [w - unit.z0 for w in fibre])

                zs = sample_points(lattice, ctx.rng, samples, accept=accept)
                residual = robert_trace_check(unit, a, zs)
                modulus = max(modulus, residual.modulus)
                drift = max(drift, residual.phase_drift)
    return Outcome(max(modulus, drift), details={"modulus": modulus, "phase_drift": drift})


__all__ = ["suite", "random_reduced_lattice"]
