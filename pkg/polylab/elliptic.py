"""Weierstrass sigma, quasi-periods, Dedekind eta and the modular discriminant.

Everything is evaluated in binary64 from q-series in the nome of a reduced
lattice. Each quantity that can be computed in two independent ways is
cross-checked at construction time and a disagreement raises
:class:`~polylab.exceptions.PrecisionLossError`.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PrecisionLossError, TruncationError
from .lattice import EPS, ComplexLike, Lattice

logger = logging.getLogger(__name__)

LEGENDRE_TOL = 1e-10
CROSSCHECK_TOL = 1e-8
DEFAULT_TRUNCATION_BOUND = 30
MAX_SERIES_TERMS = 10_000

_TWO_PI_I = 2j * math.pi


def _nome_power_series(tau: complex, coefficient) -> complex:
    """Sum ``coefficient(n, q**n)`` for ``n >= 1`` with ``q = exp(2*pi*i*tau)``."""

    q = cmath.exp(_TWO_PI_I * tau)
    total = 0j
    qn = 1 + 0j
    for n in range(1, MAX_SERIES_TERMS):
        qn *= q
        term = coefficient(n, qn)
        total += term
        if abs(term) <= EPS * max(abs(total), 1.0) * 1e-2:
            return total
    raise TruncationError(f"q-series did not converge at tau={tau!r}")


def eisenstein_e2(tau: complex) -> complex:
    return 1 - 24 * _nome_power_series(tau, lambda n, qn: n * qn / (1 - qn))


def eisenstein_e4(tau: complex) -> complex:
    return 1 + 240 * _nome_power_series(tau, lambda n, qn: n**3 * qn / (1 - qn))


def eisenstein_e6(tau: complex) -> complex:
    return 1 - 504 * _nome_power_series(tau, lambda n, qn: n**5 * qn / (1 - qn))


def dedekind_eta(tau: complex) -> complex:
    """``exp(pi*i*tau/12) * prod(1 - q**n)`` for any ``tau`` in the upper half plane."""

    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    q = cmath.exp(_TWO_PI_I * tau)
    product = 1 + 0j
    qn = 1 + 0j
    for _ in range(1, MAX_SERIES_TERMS):
        qn *= q
        product *= 1 - qn
        if abs(qn) <= EPS * 1e-2:
            return cmath.exp(1j * math.pi * tau / 12) * product
    raise TruncationError(f"eta product did not converge at tau={tau!r}")


def discriminant(tau: complex) -> complex:
    """The modular discriminant ``(2*pi)**12 * eta(tau)**24``."""

    return (2 * math.pi) ** 12 * dedekind_eta(tau) ** 24


def _theta_constants_product(tau: complex) -> complex:
    """``theta2 * theta3 * theta4`` at nome ``exp(i*pi*tau)``."""

    q = cmath.exp(1j * math.pi * tau)
    theta2 = 0j
    theta3 = 1 + 0j
    theta4 = 1 + 0j
    for k in range(MAX_SERIES_TERMS):
        half = 2 * cmath.exp(1j * math.pi * tau * (k + 0.5) ** 2)
        square = 2 * q ** (k * k) if k else 0j
        theta2 += half
        theta3 += square
        theta4 += (-1) ** k * square
        if k and max(abs(half), abs(square)) <= EPS * 1e-2:
            return theta2 * theta3 * theta4
    raise TruncationError(f"theta constants did not converge at tau={tau!r}")


def _quasi_period_by_lattice_sum(along: complex, other: complex) -> complex:
    """``eta(along)`` from the Eisenstein-ordered lattice sum.

    The inner sum over multiples of ``along`` is summed in closed form with
    ``sum_d (x + d)**-2 = pi**2 / sin(pi*x)**2``; the outer sum converges
    geometrically.
    """

    ratio = other / along
    total = complex(math.pi**2 / 3)
    for c in range(1, MAX_SERIES_TERMS):
        term = 2 * math.pi**2 / cmath.sin(math.pi * c * ratio) ** 2
        total += term
        if abs(term) <= EPS * 1e-2 * max(abs(total), 1.0):
            return total / along
    raise TruncationError("lattice sum for the quasi-period did not converge")


@dataclass(frozen=True)
class QuasiPeriods:
    """Quasi-periods ``eta1 = eta(omega1)``, ``eta2 = eta(omega2)``.

    ``eta`` extends R-linearly to C through lattice coordinates.
    """

    eta1: complex
    eta2: complex
    host: Lattice = field(repr=False)
    crosscheck_residual: float = 0.0

    def eta_linear(self, z: ComplexLike) -> np.ndarray | complex:
        s, t = self.host.coordinates(z)
        value = s * self.eta1 + t * self.eta2
        return complex(value) if np.ndim(value) == 0 else value

    @property
    def legendre_residual(self) -> float:
        lhs = self.eta1 * self.host.omega2 - self.eta2 * self.host.omega1
        return abs(lhs - _TWO_PI_I) / (2 * math.pi)


def quasi_periods(lattice: Lattice) -> QuasiPeriods:
    """Quasi-periods from the weight-2 Eisenstein series, cross-checked by lattice sums."""

    omega1, omega2 = lattice.omega1, lattice.omega2
    eta1 = math.pi**2 / (3 * omega1) * eisenstein_e2(lattice.tau)
    eta2 = (eta1 * omega2 - _TWO_PI_I) / omega1

    eta1_sum = _quasi_period_by_lattice_sum(omega1, omega2)
    eta2_sum = _quasi_period_by_lattice_sum(omega2, omega1)
    scale = max(abs(eta1), abs(eta2), math.pi / abs(omega1))
    residual = max(abs(eta1 - eta1_sum), abs(eta2 - eta2_sum)) / scale
    if residual > CROSSCHECK_TOL:
        raise PrecisionLossError(
            f"quasi-period routes disagree at tau={lattice.tau!r} (residual {residual:.3e})",
            residual,
        )

    quasi = QuasiPeriods(eta1, eta2, lattice, residual)
    if quasi.legendre_residual > LEGENDRE_TOL:
        raise PrecisionLossError(
            f"Legendre relation violated (residual {quasi.legendre_residual:.3e})",
            quasi.legendre_residual,
        )
    logger.debug("quasi-periods for tau=%s: eta1=%s eta2=%s", lattice.tau, eta1, eta2)
    return quasi


def eta_linear(quasi: QuasiPeriods, z: ComplexLike) -> np.ndarray | complex:
    return quasi.eta_linear(z)


@dataclass(frozen=True)
class SigmaEvaluator:
    """Weierstrass sigma through the odd theta function.

    On the centred fundamental cell
    ``sigma(z) = (omega1/pi) * exp(eta1*z**2/(2*omega1)) * S(v)/S'(0)`` with
    ``v = pi*z/omega1`` and ``S(v) = sum (-1)**k q**(k*(k+1)) sin((2k+1)v)``;
    other points are reduced with the periodicity law.
    """

    host: Lattice = field(repr=False)
    quasi: QuasiPeriods = field(repr=False)
    q: complex = 0j
    truncation_bound: int = DEFAULT_TRUNCATION_BOUND
    target_eps: float = EPS
    _slope_at_zero: complex = field(init=False, repr=False, default=0j)

    def __post_init__(self) -> None:
        if self.truncation_bound < 1:
            raise ValueError("truncation bound must be positive")
        if self.target_eps <= 0:
            raise ValueError("target_eps must be positive")
        _, slope = self._theta_series(np.zeros(1, dtype=complex))
        object.__setattr__(self, "_slope_at_zero", complex(slope[0]))

    def _theta_series(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        total = np.zeros_like(v)
        slope = np.zeros_like(v)
        for k in range(self.truncation_bound):
            weight = (-1) ** k * self.q ** (k * (k + 1))
            term = weight * np.sin((2 * k + 1) * v)
            term_slope = weight * (2 * k + 1) * np.cos((2 * k + 1) * v)
            if k and np.all(np.abs(term) <= self.target_eps * np.abs(total)) and np.all(
                np.abs(term_slope) <= self.target_eps * np.abs(slope)
            ):
                return total, slope
            total = total + term
            slope = slope + term_slope
        raise TruncationError(
            f"theta series did not reach {self.target_eps:.1e} within {self.truncation_bound} terms"
        )

    def _reduced(self, z: ComplexLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        m, n, remainder = self.host.split(z, centred=True)
        omega = m * self.host.omega1 + n * self.host.omega2
        eta_omega = m * self.quasi.eta1 + n * self.quasi.eta2
        # psi(omega) = -1 unless omega/2 lies in the lattice
        log_psi = 1j * math.pi * ((m + n + m * n) % 2)
        correction = log_psi + eta_omega * (remainder + omega / 2)
        return remainder, correction, eta_omega

    def log_sigma(self, z: ComplexLike) -> np.ndarray | complex:
        remainder, correction, _ = self._reduced(z)
        omega1 = self.host.omega1
        v = math.pi * remainder / omega1
        series, _ = self._theta_series(np.atleast_1d(v))
        series = series.reshape(np.shape(v))
        with np.errstate(divide="ignore", invalid="ignore"):
            value = (
                correction
                + np.log(omega1 / math.pi)
                + self.quasi.eta1 * remainder**2 / (2 * omega1)
                + np.log(series / self._slope_at_zero)
            )
        return complex(value) if np.ndim(value) == 0 else value

    def sigma(self, z: ComplexLike) -> np.ndarray | complex:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            value = np.exp(self.log_sigma(z))
        return complex(value) if np.ndim(value) == 0 else value

    def zeta(self, z: ComplexLike) -> np.ndarray | complex:
        """Logarithmic derivative of sigma (the Weierstrass zeta function)."""

        remainder, _, eta_omega = self._reduced(z)
        omega1 = self.host.omega1
        v = math.pi * remainder / omega1
        series, slope = self._theta_series(np.atleast_1d(v))
        series = series.reshape(np.shape(v))
        slope = slope.reshape(np.shape(v))
        with np.errstate(divide="ignore", invalid="ignore"):
            value = eta_omega + self.quasi.eta1 * remainder / omega1 + (math.pi / omega1) * slope / series
        return complex(value) if np.ndim(value) == 0 else value


def sigma_evaluator(
    lattice: Lattice,
    quasi: QuasiPeriods | None = None,
    truncation_bound: int = DEFAULT_TRUNCATION_BOUND,
    target_eps: float = EPS,
) -> SigmaEvaluator:
    quasi = quasi or quasi_periods(lattice)
    q = cmath.exp(1j * math.pi * lattice.tau)
    return SigmaEvaluator(lattice, quasi, q, truncation_bound, target_eps)


def sigma(evaluator: SigmaEvaluator, z: ComplexLike) -> np.ndarray | complex:
    return evaluator.sigma(z)


@dataclass(frozen=True)
class ModularValues:
    """Dedekind eta and the discriminant at the modulus of ``host``.

    ``g2``/``g3`` are the Eisenstein invariants of the lattice itself, so that
    ``delta_lattice = g2**3 - 27*g3**2``.
    """

    dedekind_eta: complex
    delta: complex
    host: Lattice = field(repr=False)
    g2: complex = 0j
    g3: complex = 0j
    crosscheck_residual: float = 0.0

    @property
    def delta_lattice(self) -> complex:
        return self.delta / self.host.omega1**12

    @property
    def log_abs_delta_lattice(self) -> float:
        """``log|delta_lattice|`` computed through ``log|eta|`` to avoid under/overflow."""

        return (
            12 * math.log(2 * math.pi)
            + 24 * math.log(abs(self.dedekind_eta))
            - 12 * math.log(abs(self.host.omega1))
        )


def eisenstein_g2g3(lattice: Lattice) -> tuple[complex, complex]:
    omega1, tau = lattice.omega1, lattice.tau
    g2 = 4 * math.pi**4 / 3 * eisenstein_e4(tau) / omega1**4
    g3 = 8 * math.pi**6 / 27 * eisenstein_e6(tau) / omega1**6
    return g2, g3


def modular_values(lattice: Lattice) -> ModularValues:
    """Eta and delta with two cross-checks: Eisenstein ``g2**3 - 27*g3**2`` and theta constants."""

    if not lattice.is_reduced:
        raise ValueError("modular_values expects a reduced lattice")
    tau = lattice.tau
    eta = dedekind_eta(tau)
    delta = (2 * math.pi) ** 12 * eta**24
    if delta == 0:
        raise PrecisionLossError(f"discriminant underflows at tau={tau!r}")

    g2_tau = 4 * math.pi**4 / 3 * eisenstein_e4(tau)
    g3_tau = 8 * math.pi**6 / 27 * eisenstein_e6(tau)
    eisenstein_delta = g2_tau**3 - 27 * g3_tau**2
    # g2**3 and 27*g3**2 nearly cancel for large Im(tau); the floor keeps the
    # comparison at the level of their rounding error.
    floor = 1e-6 * abs(g2_tau) ** 3
    eisenstein_residual = abs(delta - eisenstein_delta) / max(abs(delta), floor)

    theta_delta = (2 * math.pi) ** 12 * (_theta_constants_product(tau) / 2) ** 8
    theta_residual = abs(delta - theta_delta) / abs(delta)

    residual = max(eisenstein_residual, theta_residual)
    if residual > CROSSCHECK_TOL:
        raise PrecisionLossError(
            f"discriminant routes disagree at tau={tau!r} (residual {residual:.3e})",
            residual,
        )
    g2, g3 = eisenstein_g2g3(lattice)
    return ModularValues(eta, delta, lattice, g2, g3, residual)


__all__ = [
    "QuasiPeriods",
    "SigmaEvaluator",
    "ModularValues",
    "quasi_periods",
    "eta_linear",
    "sigma_evaluator",
    "sigma",
    "modular_values",
    "dedekind_eta",
    "discriminant",
    "eisenstein_e2",
    "eisenstein_e4",
    "eisenstein_e6",
    "eisenstein_g2g3",
]
