from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from polylab.elliptic import (
    dedekind_eta,
    discriminant,
    eisenstein_e2,
    eisenstein_e4,
    eisenstein_e6,
    eisenstein_g2g3,
    modular_values,
    quasi_periods,
    sigma_evaluator,
)
from polylab.exceptions import TruncationError
from polylab.lattice import Lattice

TAUS = [1j, complex(0.5, math.sqrt(3) / 2), 0.25 + 2j, -0.3 + 1.1j, 0.5 + 1j]


def _mp_sigma(lattice: Lattice, eta1: complex, z: complex) -> complex:
    with mpmath.workdps(30):
        omega1 = mpmath.mpc(lattice.omega1)
        q = mpmath.exp(1j * mpmath.pi * mpmath.mpc(lattice.tau))
        v = mpmath.pi * mpmath.mpc(z) / omega1
        theta = mpmath.jtheta(1, v, q) / mpmath.jtheta(1, 0, q, 1)
        return complex(omega1 / mpmath.pi * mpmath.exp(mpmath.mpc(eta1) * mpmath.mpc(z) ** 2 / (2 * omega1)) * theta)


def test_dedekind_eta_at_i_matches_gamma_closed_form():
    expected = gamma(0.25) / (2 * math.pi**0.75)
    value = dedekind_eta(1j)
    assert value.real == pytest.approx(expected, rel=1e-13)
    assert abs(value.imag) < 1e-15


@pytest.mark.parametrize("tau", TAUS)
def test_dedekind_eta_transforms_under_inversion(tau):
    lhs = dedekind_eta(-1 / tau)
    rhs = cmath.sqrt(-1j * tau) * dedekind_eta(tau)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_dedekind_eta_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        dedekind_eta(-1j)


@pytest.mark.parametrize("tau", TAUS)
def test_discriminant_is_eisenstein_combination(tau):
    delta = discriminant(tau)
    e4, e6 = eisenstein_e4(tau), eisenstein_e6(tau)
    scale = (2 * math.pi) ** 12 * (abs(e4) ** 3 + abs(e6) ** 2) / 1728
    assert abs((2 * math.pi) ** 12 * (e4**3 - e6**2) / 1728 - delta) <= 1e-10 * max(scale, abs(delta))


def test_eisenstein_e2_at_i():
    assert eisenstein_e2(1j) == pytest.approx(3 / math.pi, rel=1e-13)


def test_quasi_periods_of_gaussian_lattice(square_lattice):
    quasi = quasi_periods(square_lattice)
    assert quasi.eta1 == pytest.approx(math.pi, rel=1e-13)
    assert quasi.eta2 == pytest.approx(-math.pi * 1j, rel=1e-13)
    assert quasi.eta_linear(1j) == pytest.approx(-math.pi * 1j, rel=1e-13)


def test_eta_linear_is_real_linear(hexagonal_lattice):
    quasi = quasi_periods(hexagonal_lattice)
    assert quasi.eta_linear(hexagonal_lattice.omega1) == pytest.approx(quasi.eta1)
    midpoint = 0.5 * hexagonal_lattice.omega1 + 0.5 * hexagonal_lattice.omega2
    assert quasi.eta_linear(midpoint) == pytest.approx((quasi.eta1 + quasi.eta2) / 2)


@pytest.mark.parametrize("tau", TAUS)
def test_legendre_relation(tau):
    quasi = quasi_periods(Lattice.from_tau(tau))
    assert quasi.legendre_residual < 1e-12
    assert quasi.crosscheck_residual < 1e-10


@pytest.mark.parametrize("scale", [2.0, 0.5j, cmath.rect(1.7, 0.4)])
def test_quasi_periods_are_homogeneous_of_degree_minus_one(hexagonal_lattice, scale):
    base = quasi_periods(hexagonal_lattice)
    scaled = quasi_periods(hexagonal_lattice.scaled(scale))
    assert scaled.eta1 == pytest.approx(base.eta1 / scale, rel=1e-12)
    assert scaled.eta2 == pytest.approx(base.eta2 / scale, rel=1e-12)


def test_sigma_is_normalized_at_origin(square_lattice):
    evaluator = sigma_evaluator(square_lattice)
    z = 1e-6
    assert abs(evaluator.sigma(z) / z - 1) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    s=st.floats(min_value=-0.45, max_value=0.45),
    t=st.floats(min_value=-0.45, max_value=0.45),
)
def test_sigma_is_odd(s, t):
    lattice = Lattice.from_tau(-0.3 + 1.1j)
    evaluator = sigma_evaluator(lattice)
    z = complex(lattice.point(s, t))
    if abs(z) < 1e-3:
        return
    assert abs(evaluator.sigma(-z) + evaluator.sigma(z)) <= 1e-12 * abs(evaluator.sigma(z))


@settings(max_examples=40, deadline=None)
@given(
    radius=st.floats(min_value=0.3, max_value=3.0),
    angle=st.floats(min_value=-math.pi, max_value=math.pi),
    s=st.floats(min_value=-0.45, max_value=0.45),
    t=st.floats(min_value=-0.45, max_value=0.45),
)
def test_sigma_is_homogeneous_of_degree_one(radius, angle, s, t):
    lattice = Lattice.from_tau(0.5 + 1j)
    c = cmath.rect(radius, angle)
    z = complex(lattice.point(s, t))
    expected = c * sigma_evaluator(lattice).sigma(z)
    value = sigma_evaluator(lattice.scaled(c)).sigma(c * z)
    assert abs(value - expected) <= 1e-12 * max(abs(expected), 1e-3)


@pytest.mark.parametrize("tau", TAUS)
def test_sigma_quasi_periodicity(tau, rng):
    lattice = Lattice.from_tau(tau)
    quasi = quasi_periods(lattice)
    evaluator = sigma_evaluator(lattice, quasi)
    for _ in range(10):
        z = complex(lattice.point(*rng.uniform(0.1, 0.9, size=2)))
        for omega in (lattice.omega1, lattice.omega2, lattice.omega1 + lattice.omega2):
            expected = -cmath.exp(quasi.eta_linear(omega) * (z + omega / 2)) * evaluator.sigma(z)
            assert abs(evaluator.sigma(z + omega) - expected) <= 1e-9 * abs(expected)


def test_sigma_periodicity_sign_is_plus_for_even_periods(square_lattice):
    quasi = quasi_periods(square_lattice)
    evaluator = sigma_evaluator(square_lattice, quasi)
    z = 0.21 + 0.37j
    omega = 2 * square_lattice.omega1
    expected = cmath.exp(quasi.eta_linear(omega) * (z + omega / 2)) * evaluator.sigma(z)
    assert abs(evaluator.sigma(z + omega) - expected) <= 1e-9 * abs(expected)


@pytest.mark.parametrize("z", [0.3 + 0.1j, 0.05 - 0.4j, -0.45 + 0.45j])
@pytest.mark.parametrize("tau", [1j, 0.25 + 2j])
def test_sigma_agrees_with_mpmath_theta(tau, z):
    lattice = Lattice.from_tau(tau)
    quasi = quasi_periods(lattice)
    evaluator = sigma_evaluator(lattice, quasi)
    point = z * lattice.omega1
    reference = _mp_sigma(lattice, quasi.eta1, point)
    assert abs(evaluator.sigma(point) - reference) <= 1e-11 * abs(reference)


def test_zeta_is_logarithmic_derivative_of_sigma(hexagonal_lattice):
    evaluator = sigma_evaluator(hexagonal_lattice)
    z = 0.23 + 0.11j
    h = 1e-6
    numeric = (evaluator.log_sigma(z + h) - evaluator.log_sigma(z - h)) / (2 * h)
    assert evaluator.zeta(z) == pytest.approx(numeric, rel=1e-7)


def test_sigma_is_vectorised(square_lattice):
    evaluator = sigma_evaluator(square_lattice)
    zs = np.array([0.1 + 0.2j, 0.3 - 0.1j, 1.4 + 2.2j])
    values = evaluator.sigma(zs)
    assert values.shape == (3,)
    for z, value in zip(zs, values):
        assert value == pytest.approx(evaluator.sigma(complex(z)), rel=1e-13)


def test_sigma_truncation_bound_is_enforced(square_lattice):
    with pytest.raises(TruncationError):
        sigma_evaluator(square_lattice, truncation_bound=1)


@pytest.mark.parametrize("tau", TAUS)
def test_modular_values_cross_checks(tau):
    lattice = Lattice.from_tau(tau)
    modular = modular_values(lattice)
    assert modular.crosscheck_residual < 1e-8
    g2, g3 = eisenstein_g2g3(lattice)
    assert modular.g2 == pytest.approx(g2)
    assert modular.g3 == pytest.approx(g3)
    assert modular.log_abs_delta_lattice == pytest.approx(math.log(abs(modular.delta_lattice)), rel=1e-12)


def test_modular_values_need_a_reduced_lattice():
    with pytest.raises(ValueError):
        modular_values(Lattice(1, 2 + 1j))


def test_discriminant_of_lattice_scales_with_weight_twelve(hexagonal_lattice):
    base = modular_values(hexagonal_lattice)
    scaled = modular_values(hexagonal_lattice.scaled(2.0))
    assert scaled.delta_lattice == pytest.approx(base.delta_lattice / 2**12, rel=1e-12)
