"""Complex lattices, modulus reduction, torsion and division points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .exceptions import DegenerateLatticeError

EPS = float(np.finfo(float).eps)
BOUNDARY_TOL = 64 * EPS
MAX_REDUCTION_STEPS = 10_000

ComplexLike = Union[complex, float, int, np.ndarray]

_SWAP = np.array([[0, 1], [1, 0]], dtype=np.int64)
_INVERT = np.array([[0, -1], [1, 0]], dtype=np.int64)


def _translation(shift: int) -> np.ndarray:
    return np.array([[1, -shift], [0, 1]], dtype=np.int64)


@dataclass(frozen=True)
class Lattice:
    """Rank-2 lattice ``Z*omega1 + Z*omega2`` with an oriented basis.

    Instances built by :func:`reduce_lattice` additionally satisfy the
    fundamental-domain conditions ``|Re tau| <= 1/2`` and ``|tau| >= 1``.
    """

    omega1: complex
    omega2: complex

    def __post_init__(self) -> None:
        omega1 = complex(self.omega1)
        omega2 = complex(self.omega2)
        object.__setattr__(self, "omega1", omega1)
        object.__setattr__(self, "omega2", omega2)
        if omega1 == 0 or not (np.isfinite(omega1) and np.isfinite(omega2)):
            raise DegenerateLatticeError("periods must be finite and omega1 nonzero")
        if (omega2 / omega1).imag <= 0:
            raise DegenerateLatticeError("basis is not oriented: Im(omega2/omega1) <= 0")

    @classmethod
    def from_periods(cls, omega1: complex, omega2: complex) -> "Lattice":
        return reduce_lattice(omega1, omega2)[0]

    @classmethod
    def from_tau(cls, tau: complex) -> "Lattice":
        return reduce_lattice(1.0, tau)[0]

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def covolume(self) -> float:
        return (self.omega1.conjugate() * self.omega2).imag

    @property
    def is_reduced(self) -> bool:
        tau = self.tau
        return abs(tau.real) <= 0.5 + BOUNDARY_TOL and abs(tau) >= 1 - BOUNDARY_TOL

    def scaled(self, c: complex) -> "Lattice":
        """The homothetic lattice ``c * self`` with the scaled basis."""

        return Lattice(c * self.omega1, c * self.omega2)

    def coordinates(self, z: ComplexLike) -> tuple[np.ndarray, np.ndarray]:
        """Real coordinates ``(s, t)`` with ``z = s*omega1 + t*omega2``."""

        z = np.asarray(z, dtype=complex)
        det = self.covolume
        s = (np.conj(z) * self.omega2).imag / det
        t = (np.conj(self.omega1) * z).imag / det
        return s, t

    def point(self, s: ComplexLike, t: ComplexLike) -> np.ndarray | complex:
        return np.asarray(s) * self.omega1 + np.asarray(t) * self.omega2

    def split(self, z: ComplexLike, centred: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Write ``z = r + m*omega1 + n*omega2`` with integer ``m, n``.

        The remainder has coordinates in ``[-1/2, 1/2)`` when ``centred`` and in
        ``[0, 1)`` otherwise.
        """

        z = np.asarray(z, dtype=complex)
        s, t = self.coordinates(z)
        offset = 0.5 if centred else 0.0
        m = np.floor(s + offset).astype(np.int64)
        n = np.floor(t + offset).astype(np.int64)
        remainder = z - m * self.omega1 - n * self.omega2
        return m, n, remainder

    def distance_to_lattice(self, z: ComplexLike) -> np.ndarray:
        """Euclidean distance in lattice coordinates from ``z`` to the nearest lattice point."""

        s, t = self.coordinates(z)
        return np.hypot(s - np.round(s), t - np.round(t))


@dataclass(frozen=True)
class TorsionPoint:
    """The ``N``-torsion point ``(j*omega1 + k*omega2) / N``."""

    j: int
    k: int
    order: int
    host: Lattice = field(repr=False)

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("torsion order must be positive")
        if not (0 <= self.j < self.order and 0 <= self.k < self.order):
            raise ValueError(f"indices ({self.j}, {self.k}) out of range for order {self.order}")

    @property
    def value(self) -> complex:
        return (self.j * self.host.omega1 + self.k * self.host.omega2) / self.order

    @property
    def is_zero(self) -> bool:
        return self.j == 0 and self.k == 0

    def scaled(self, a: int) -> "TorsionPoint":
        """The class of ``a * self``."""

        n = self.order
        return TorsionPoint((a * self.j) % n, (a * self.k) % n, n, self.host)

    def __neg__(self) -> "TorsionPoint":
        return self.scaled(-1)


@dataclass(frozen=True)
class PointRep:
    """A point of ``C`` viewed modulo the lattice of ``host``."""

    z: complex
    host: Lattice = field(repr=False)
    reduced: bool = False

    def is_congruent_to(self, other: "PointRep | complex", tol: float = 1e-12) -> bool:
        w = other.z if isinstance(other, PointRep) else other
        return is_congruent(self.host, self.z, w, tol)


def reduce_lattice(omega1: complex, omega2: complex) -> tuple[Lattice, np.ndarray]:
    """Gauss-reduce a period pair.

    Returns the reduced lattice and the unimodular integer matrix ``M`` with
    ``(omega1', omega2') = (omega1, omega2) @ M``.
    """

    omega1 = complex(omega1)
    omega2 = complex(omega2)
    if omega1 == 0 or not (np.isfinite(omega1) and np.isfinite(omega2)):
        raise DegenerateLatticeError("periods must be finite and omega1 nonzero")

    ratio = omega2 / omega1
    if abs(ratio.imag) <= math.sqrt(EPS) * abs(ratio):
        raise DegenerateLatticeError(f"periods {omega1!r} and {omega2!r} are (nearly) collinear")

    matrix = np.eye(2, dtype=np.int64)
    tau = ratio
    if tau.imag < 0:
        matrix = matrix @ _SWAP
        tau = 1 / tau

    for _ in range(MAX_REDUCTION_STEPS):
        shift = math.ceil(tau.real - 0.5)
        if shift:
            matrix = matrix @ _translation(shift)
            tau -= shift
        if abs(tau) ** 2 < 1 - BOUNDARY_TOL:
            matrix = matrix @ _INVERT
            tau = -1 / tau
            continue
        break
    else:  # pragma: no cover - guarded by the collinearity check
        raise DegenerateLatticeError("modulus reduction did not converge")

    # Boundary ties go to Re(tau) >= 0.
    if abs(tau.real + 0.5) <= BOUNDARY_TOL:
        matrix = matrix @ _translation(-1)
        tau += 1
    if abs(abs(tau) ** 2 - 1) <= BOUNDARY_TOL and tau.real < -BOUNDARY_TOL:
        matrix = matrix @ _INVERT
        tau = -1 / tau

    new_omega1 = int(matrix[0, 0]) * omega1 + int(matrix[1, 0]) * omega2
    new_omega2 = int(matrix[0, 1]) * omega1 + int(matrix[1, 1]) * omega2
    lattice = Lattice(new_omega1, new_omega2)
    if lattice.tau.imag < math.sqrt(3) / 2 - math.sqrt(EPS):
        raise DegenerateLatticeError("reduced modulus lost more than half the working precision")
    return lattice, matrix


def lattice_coordinates(lattice: Lattice, z: ComplexLike) -> tuple[np.ndarray, np.ndarray]:
    return lattice.coordinates(z)


def reduce_point(lattice: Lattice, z: complex, centred: bool = False) -> PointRep:
    _, _, remainder = lattice.split(z, centred=centred)
    return PointRep(complex(remainder), lattice, reduced=not centred)


def is_congruent(lattice: Lattice, z: complex, w: complex, tol: float) -> bool:
    """True iff ``z - w`` lies within ``tol`` (lattice coordinates) of a lattice point."""

    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return bool(lattice.distance_to_lattice(complex(z) - complex(w)) <= tol)


def enumerate_torsion(lattice: Lattice, order: int) -> list[TorsionPoint]:
    """All ``order``-torsion points, lexicographic in ``(j, k)``; the zero point comes first."""

    if order < 1:
        raise ValueError("torsion order must be positive")
    return [TorsionPoint(j, k, order, lattice) for j in range(order) for k in range(order)]


def division_preimages(lattice: Lattice, z: complex, a: int) -> list[complex]:
    """The ``a**2`` points ``w`` with ``a*w = z`` modulo the lattice."""

    if a < 1:
        raise ValueError("division degree must be positive")
    z = complex(z)
    return [
        (z + j * lattice.omega1 + k * lattice.omega2) / a
        for j in range(a)
        for k in range(a)
    ]


def torsion_index(lattice: Lattice, z: complex, order: int, tol: float = 1e-9) -> tuple[int, int]:
    """Indices ``(j, k)`` of the ``order``-torsion class of ``z``."""

    s, t = lattice.coordinates(complex(z) * order)
    j, k = round(float(s)), round(float(t))
    if math.hypot(float(s) - j, float(t) - k) > tol * order:
        raise ValueError(f"{z!r} is not an {order}-torsion point")
    return j % order, k % order


__all__ = [
    "Lattice",
    "TorsionPoint",
    "PointRep",
    "reduce_lattice",
    "lattice_coordinates",
    "reduce_point",
    "is_congruent",
    "enumerate_torsion",
    "division_preimages",
    "torsion_index",
]
