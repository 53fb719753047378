"""The canonical Green current on an elliptic curve and its translation units.

``g(z) = -2 log|exp(-z*eta(z)/2) * sigma(z) * Delta^(1/12)|`` with ``eta`` the
R-linear quasi-period map and ``Delta`` the discriminant of the lattice. Only
``|Delta|`` enters, so no branch of the twelfth root is chosen.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .elliptic import (
    DEFAULT_TRUNCATION_BOUND,
    ModularValues,
    QuasiPeriods,
    SigmaEvaluator,
    modular_values,
    quasi_periods,
    sigma_evaluator,
)
from .exceptions import PoleSignal, SingularInputError, ZeroSignal
from .lattice import (
    EPS,
    ComplexLike,
    Lattice,
    division_preimages,
    enumerate_torsion,
    is_congruent,
)

logger = logging.getLogger(__name__)

DEFAULT_SINGULAR_RADIUS = 0.05
CONGRUENCE_TOL = 1e-12


def bernoulli2(t: ComplexLike) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return t * t - t + 1.0 / 6.0


@dataclass(frozen=True)
class GreenEvaluator:
    """Evaluator for the canonical Green function of ``host``."""

    host: Lattice
    quasi: QuasiPeriods = field(repr=False)
    sigma: SigmaEvaluator = field(repr=False)
    modular: ModularValues = field(repr=False)
    singular_radius: float = DEFAULT_SINGULAR_RADIUS

    def __post_init__(self) -> None:
        if self.singular_radius <= 0:
            raise ValueError("singular radius must be positive")

    @classmethod
    def for_lattice(
        cls,
        lattice: Lattice,
        singular_radius: float = DEFAULT_SINGULAR_RADIUS,
        truncation_bound: int = DEFAULT_TRUNCATION_BOUND,
        target_eps: float = EPS,
    ) -> "GreenEvaluator":
        quasi = quasi_periods(lattice)
        sigma = sigma_evaluator(lattice, quasi, truncation_bound, target_eps)
        return cls(lattice, quasi, sigma, modular_values(lattice), singular_radius)

    @classmethod
    def for_tau(cls, tau: complex, **kwargs) -> "GreenEvaluator":
        return cls.for_lattice(Lattice.from_tau(tau), **kwargs)

    def raw_values(self, z: ComplexLike) -> np.ndarray:
        """The defining expression without the exclusion test (``inf`` on the lattice)."""

        _, _, remainder = self.host.split(z, centred=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_abs = np.real(
                -remainder * self.quasi.eta_linear(remainder) / 2 + self.sigma.log_sigma(remainder)
            )
            return -2 * log_abs - self.modular.log_abs_delta_lattice / 6

    def is_regular(self, z: ComplexLike) -> np.ndarray | bool:
        regular = self.host.distance_to_lattice(z) >= self.singular_radius
        return bool(regular) if np.ndim(regular) == 0 else regular

    def g_value(self, z: complex) -> float:
        if not self.is_regular(z):
            raise SingularInputError(
                f"z={complex(z)!r} lies within {self.singular_radius} of the lattice", complex(z)
            )
        return float(self.raw_values(complex(z)))

    def g_values(self, zs: ComplexLike) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised ``g``; singular points are NaN and flagged in the returned mask."""

        zs = np.asarray(zs, dtype=complex)
        singular = ~np.asarray(self.is_regular(zs), dtype=bool)
        values = np.asarray(self.raw_values(zs), dtype=float)
        values = np.where(singular, np.nan, values)
        return values, singular

    def require_regular(self, zs: ComplexLike) -> np.ndarray:
        values, singular = self.g_values(zs)
        if np.any(singular):
            bad = complex(np.asarray(zs, dtype=complex)[singular].flat[0])
            raise SingularInputError(f"z={bad!r} lies within {self.singular_radius} of the lattice", bad)
        return values

    def translation_unit(self, z0: complex, order: int) -> "TranslationUnit":
        return TranslationUnit(self.host, complex(z0), order, self.quasi, self.sigma)


@dataclass(frozen=True)
class TranslationUnit:
    """``phi(z) = exp(z*eta(z0) - z0*eta(z0)/2) * sigma(z - z0) / sigma(z)``."""

    host: Lattice
    z0: complex
    order: int
    quasi: QuasiPeriods = field(repr=False)
    sigma: SigmaEvaluator = field(repr=False)

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be positive")
        if not is_congruent(self.host, self.order * self.z0, 0, 1e-9):
            raise ValueError(f"z0={self.z0!r} is not a {self.order}-torsion point")
        if is_congruent(self.host, self.z0, 0, 1e-9):
            raise ValueError("z0 must not lie in the lattice")

    @property
    def eta_z0(self) -> complex:
        return self.quasi.eta_linear(self.z0)

    def log_phi(self, z: ComplexLike) -> np.ndarray | complex:
        z = np.asarray(z, dtype=complex)
        eta_z0 = self.eta_z0
        value = (
            z * eta_z0
            - self.z0 * eta_z0 / 2
            + np.asarray(self.sigma.log_sigma(z - self.z0))
            - np.asarray(self.sigma.log_sigma(z))
        )
        return complex(value) if np.ndim(value) == 0 else value

    def check_point(self, z: complex) -> None:
        if is_congruent(self.host, z, 0, CONGRUENCE_TOL):
            raise PoleSignal(f"phi has a pole at z={complex(z)!r}", complex(z))
        if is_congruent(self.host, z, self.z0, CONGRUENCE_TOL):
            raise ZeroSignal(f"phi vanishes at z={complex(z)!r}", complex(z))

    def phi_value(self, z: complex) -> complex:
        self.check_point(z)
        return cmath.exp(self.log_phi(complex(z)))

    def automorphy_factor(self, omega: complex) -> complex:
        """``exp(omega*eta(z0) - eta(omega)*z0)`` for a lattice element ``omega``."""

        if not is_congruent(self.host, omega, 0, 1e-9):
            raise ValueError(f"omega={omega!r} is not a lattice element")
        return cmath.exp(omega * self.eta_z0 - self.quasi.eta_linear(omega) * self.z0)


def g_value(evaluator: GreenEvaluator, z: complex) -> float:
    return evaluator.g_value(z)


def phi_value(unit: TranslationUnit, z: complex) -> complex:
    return unit.phi_value(z)


def automorphy_factor(unit: TranslationUnit, omega: complex) -> complex:
    return unit.automorphy_factor(omega)


def g_value_fourier(evaluator: GreenEvaluator, z: complex, max_terms: int = 1000) -> float:
    """``g`` through its product expansion in ``q = exp(2*pi*i*tau)``.

    ``g = 2*pi*Im(tau)*B2(t) - 2 log|1 - u| - 2 sum log|(1 - q^n u)(1 - q^n/u)|``
    with ``u = exp(2*pi*i*(s + t*tau))`` and ``0 <= t < 1``.
    """

    lattice = evaluator.host
    s, t = (float(c) for c in lattice.coordinates(complex(z)))
    s -= math.floor(s)
    t -= math.floor(t)
    tau = lattice.tau
    u = cmath.exp(2j * math.pi * (s + t * tau))
    q = cmath.exp(2j * math.pi * tau)
    if abs(1 - u) == 0:
        raise SingularInputError(f"z={complex(z)!r} is a lattice point", complex(z))

    value = 2 * math.pi * tau.imag * float(bernoulli2(t)) - 2 * math.log(abs(1 - u))
    qn = 1 + 0j
    for _ in range(max_terms):
        qn *= q
        term = math.log(abs(1 - qn * u)) + math.log(abs(1 - qn / u))
        value -= 2 * term
        if abs(qn / u) <= EPS * 1e-2:
            return value
    raise ValueError("product expansion did not converge")


def grid_points(lattice: Lattice, rows: int, cols: int, margin: float = 0.0) -> np.ndarray:
    """Row-major grid over the fundamental parallelogram, coordinates in ``[margin, 1 - margin]``."""

    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    if not 0 <= margin < 0.5:
        raise ValueError("margin must lie in [0, 1/2)")

    def axis(count: int) -> np.ndarray:
        if count == 1:
            return np.array([0.5])
        return margin + (1 - 2 * margin) * np.arange(count) / (count - 1)

    t, s = np.meshgrid(axis(rows), axis(cols), indexing="ij")
    return np.asarray(lattice.point(s, t), dtype=complex)


def green_mean(evaluator: GreenEvaluator, cols: int = 200) -> float:
    """Midpoint Riemann mean of ``g`` over the fundamental parallelogram (exact value 0)."""

    points = grid_points(evaluator.host, cols, cols, margin=0.5 / cols)
    return float(np.mean(evaluator.raw_values(points)))


def pushforward_check(evaluator: GreenEvaluator, n: int, z: complex) -> float:
    """``|sum_{n w = z} g(w) - g(z)|``."""

    if n < 1:
        raise ValueError("n must be positive")
    fibre = evaluator.require_regular(division_preimages(evaluator.host, z, n))
    return abs(math.fsum(fibre) - evaluator.g_value(z))


def distribution_check(evaluator: GreenEvaluator, order: int, z: complex) -> float:
    """``|g(N z) - sum_{sigma in E[N]} g(z + sigma)|``."""

    if order < 1:
        raise ValueError("N must be positive")
    translates = [complex(z) + point.value for point in enumerate_torsion(evaluator.host, order)]
    values = evaluator.require_regular(translates)
    return abs(evaluator.g_value(order * complex(z)) - math.fsum(values))


class RobertResidual(NamedTuple):
    modulus: float
    phase_drift: float


def robert_trace_check(unit: TranslationUnit, a: int, zs: Sequence[complex] | complex) -> RobertResidual:
    """Compare ``prod_{a w = z} phi(w)`` with ``phi(z)`` at each sample point.

    The ratio must be a constant of modulus one; the residuals are the largest
    modulus defect and the largest phase deviation from the first sample.
    """

    if math.gcd(a, unit.order) != 1 or (a - 1) % unit.order:
        raise ValueError(f"a={a} must be coprime to and congruent to 1 modulo N={unit.order}")
    samples = [complex(zs)] if np.isscalar(zs) else [complex(z) for z in zs]
    if not samples:
        raise ValueError("robert_trace_check needs at least one sample point")
    log_ratios = []
    for z in samples:
        fibre = division_preimages(unit.host, z, a)
        unit.check_point(z)
        for w in fibre:
            unit.check_point(w)
        log_product = sum((unit.log_phi(w) for w in fibre), 0j)
        log_ratios.append(log_product - unit.log_phi(z))

    modulus = max(abs(math.expm1(ratio.real)) for ratio in log_ratios)
    reference = log_ratios[0].imag
    drift = max(abs(cmath.phase(cmath.exp(1j * (ratio.imag - reference)))) for ratio in log_ratios)
    return RobertResidual(modulus, drift)


def main_theorem_check(evaluator: GreenEvaluator, order: int, z: complex) -> float:
    """``|g(N z) - N^2 g(z) + 2 sum_{sigma != 0} log|phi_{-sigma}(z)||``."""

    if order < 1:
        raise ValueError("N must be positive")
    z = complex(z)
    lhs = evaluator.g_value(order * z) - order**2 * evaluator.g_value(z)
    logs = []
    for point in enumerate_torsion(evaluator.host, order):
        if point.is_zero:
            continue
        unit = evaluator.translation_unit(-point.value, order)
        unit.check_point(z)
        logs.append(unit.log_phi(z).real)
    rhs = -2 * math.fsum(logs)
    return abs(lhs - rhs)


class AutomorphyResidual(NamedTuple):
    torsion: float
    legendre_value: float


def automorphy_check(evaluator: GreenEvaluator, order: int) -> AutomorphyResidual:
    """Largest ``|alpha(omega, z0)**N - 1|`` over generators and nonzero ``N``-torsion ``z0``."""

    lattice = evaluator.host
    generators = (lattice.omega1, lattice.omega2, lattice.omega1 + lattice.omega2)
    torsion = 0.0
    for point in enumerate_torsion(lattice, order):
        if point.is_zero:
            continue
        unit = evaluator.translation_unit(point.value, order)
        for omega in generators:
            torsion = max(torsion, abs(unit.automorphy_factor(omega) ** order - 1))

    legendre_value = 0.0
    if order > 1:
        unit = evaluator.translation_unit(lattice.omega2 / order, order)
        expected = cmath.exp(-2j * math.pi / order)
        legendre_value = abs(unit.automorphy_factor(lattice.omega1) - expected)
    return AutomorphyResidual(torsion, legendre_value)


def sample_points(
    lattice: Lattice,
    rng: np.random.Generator,
    count: int,
    accept=None,
    max_attempts: int = 100_000,
) -> list[complex]:
    """Uniform points of the fundamental parallelogram passing ``accept``."""

    points: list[complex] = []
    for _ in range(max_attempts):
        if len(points) == count:
            break
        s, t = rng.random(2)
        z = complex(lattice.point(s, t))
        if accept is None or accept(z):
            points.append(z)
    else:  # pragma: no cover - only reachable with an impossible predicate
        raise ValueError("could not draw enough admissible sample points")
    return points


def regular_for(evaluator: GreenEvaluator, multipliers: Iterable[int] = (1,), shifts: Iterable[complex] = (0,)):
    """Predicate: ``m*z + shift`` is regular for every multiplier and shift."""

    multipliers = tuple(multipliers)
    shifts = tuple(shifts)

    def accept(z: complex) -> bool:
        return all(
            evaluator.is_regular(m * z + shift) for m in multipliers for shift in shifts
        )

    return accept


__all__ = [
    "DEFAULT_SINGULAR_RADIUS",
    "GreenEvaluator",
    "TranslationUnit",
    "RobertResidual",
    "AutomorphyResidual",
    "g_value",
    "phi_value",
    "automorphy_factor",
    "g_value_fourier",
    "grid_points",
    "green_mean",
    "pushforward_check",
    "distribution_check",
    "robert_trace_check",
    "main_theorem_check",
    "automorphy_check",
    "sample_points",
    "regular_for",
    "bernoulli2",
]
