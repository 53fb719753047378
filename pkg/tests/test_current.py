from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from polylab.current import (
    GreenEvaluator,
    automorphy_check,
    distribution_check,
    g_value_fourier,
    green_mean,
    grid_points,
    main_theorem_check,
    pushforward_check,
    regular_for,
    robert_trace_check,
    sample_points,
)
from polylab.exceptions import PoleSignal, SingularInputError, ZeroSignal
from polylab.lattice import division_preimages, enumerate_torsion


def _admissible(evaluator, rng, count, multipliers=(1,), shifts=(0,)):
    return sample_points(evaluator.host, rng, count, accept=regular_for(evaluator, multipliers, shifts))


def test_green_function_is_singular_on_the_lattice(square_green):
    with pytest.raises(SingularInputError) as info:
        square_green.g_value(0)
    assert info.value.point == 0
    with pytest.raises(SingularInputError):
        square_green.g_value(1 + 1j + 0.01)


def test_logarithmic_singularity_constant():
    evaluator = GreenEvaluator.for_tau(1j, singular_radius=1e-9)
    delta = (2 * math.pi) ** 12 * (gamma(0.25) / (2 * math.pi**0.75)) ** 24
    expected = -math.log(delta) / 6
    for radius in (1e-4, 1e-5):
        z = cmath.rect(radius, 0.7)
        assert evaluator.g_value(z) + 2 * math.log(radius) == pytest.approx(expected, abs=1e-7)


@settings(max_examples=50, deadline=None)
@given(
    s=st.floats(min_value=0.1, max_value=0.9),
    t=st.floats(min_value=0.1, max_value=0.9),
    m=st.integers(min_value=-3, max_value=3),
    n=st.integers(min_value=-3, max_value=3),
)
def test_green_function_is_periodic_and_even(hexagonal_green, s, t, m, n):
    lattice = hexagonal_green.host
    z = complex(lattice.point(s, t))
    value = hexagonal_green.g_value(z)
    shifted = z + m * lattice.omega1 + n * lattice.omega2
    assert hexagonal_green.g_value(shifted) == pytest.approx(value, abs=1e-10)
    assert hexagonal_green.g_value(-z) == pytest.approx(value, abs=1e-10)


@pytest.mark.parametrize("tau", [1j, 0.25 + 2j, -0.4 + 0.95j])
def test_green_function_matches_product_expansion(tau, rng):
    evaluator = GreenEvaluator.for_tau(tau)
    for z in _admissible(evaluator, rng, 10):
        assert evaluator.g_value(z) == pytest.approx(g_value_fourier(evaluator, z), abs=1e-11)


def test_green_function_is_invariant_under_homothety(hexagonal_green):
    scaled = GreenEvaluator.for_lattice(hexagonal_green.host.scaled(cmath.rect(2.5, 1.1)))
    z = 0.31 + 0.17j
    assert scaled.g_value(z * cmath.rect(2.5, 1.1)) == pytest.approx(hexagonal_green.g_value(z), abs=1e-10)


def test_green_function_has_mean_zero(square_green):
    assert abs(green_mean(square_green, cols=200)) < 1e-3


def test_vectorised_values_flag_singular_points(square_green):
    values, singular = square_green.g_values([0.5 + 0.5j, 0, 1j + 0.001])
    assert singular.tolist() == [False, True, True]
    assert np.isnan(values[1]) and np.isnan(values[2])
    assert values[0] == pytest.approx(square_green.g_value(0.5 + 0.5j))
    with pytest.raises(SingularInputError):
        square_green.require_regular([0.5, 0])


def test_grid_points_cover_the_parallelogram(hexagonal_lattice):
    points = grid_points(hexagonal_lattice, 3, 4)
    assert points.shape == (3, 4)
    assert points[0, 0] == 0
    assert points[-1, -1] == pytest.approx(hexagonal_lattice.omega1 + hexagonal_lattice.omega2)
    with pytest.raises(ValueError):
        grid_points(hexagonal_lattice, 0, 4)
    with pytest.raises(ValueError):
        grid_points(hexagonal_lattice, 2, 2, margin=0.5)


def test_translation_identity(hexagonal_green):
    lattice = hexagonal_green.host
    for order in (2, 3):
        for point in enumerate_torsion(lattice, order)[1:]:
            unit = hexagonal_green.translation_unit(point.value, order)
            for z in (0.31 + 0.17j, -0.22 + 0.4j):
                expected = hexagonal_green.g_value(z - point.value) - hexagonal_green.g_value(z)
                assert -2 * math.log(abs(unit.phi_value(z))) == pytest.approx(expected, abs=1e-10)


def test_translation_unit_divisor(square_green):
    unit = square_green.translation_unit(0.5, 2)
    with pytest.raises(ZeroSignal):
        unit.phi_value(0.5)
    with pytest.raises(ZeroSignal):
        unit.phi_value(1.5 + 1j)
    with pytest.raises(PoleSignal):
        unit.phi_value(0)
    with pytest.raises(PoleSignal):
        unit.phi_value(-1j)


def test_translation_unit_validates_its_point(square_green):
    with pytest.raises(ValueError):
        square_green.translation_unit(0.3, 2)
    with pytest.raises(ValueError):
        square_green.translation_unit(1.0, 2)
    with pytest.raises(ValueError):
        square_green.translation_unit(0.5, 0)


@pytest.mark.parametrize("order", [2, 3, 5])
def test_automorphy_factor_special_values(hexagonal_green, order):
    lattice = hexagonal_green.host
    parallel = hexagonal_green.translation_unit(lattice.omega1 / order, order)
    assert parallel.automorphy_factor(lattice.omega1) == pytest.approx(1, abs=1e-12)
    transverse = hexagonal_green.translation_unit(lattice.omega2 / order, order)
    assert transverse.automorphy_factor(lattice.omega1) == pytest.approx(
        cmath.exp(-2j * math.pi / order), abs=1e-9
    )


def test_automorphy_factor_is_a_character(square_green):
    lattice = square_green.host
    unit = square_green.translation_unit((lattice.omega1 + 2 * lattice.omega2) / 3, 3)
    first, second = 2 * lattice.omega1 - lattice.omega2, lattice.omega1 + 3 * lattice.omega2
    product = unit.automorphy_factor(first) * unit.automorphy_factor(second)
    assert unit.automorphy_factor(first + second) == pytest.approx(product, abs=1e-9)
    assert abs(unit.automorphy_factor(first)) == pytest.approx(1, abs=1e-9)
    with pytest.raises(ValueError):
        unit.automorphy_factor(0.5)


def test_phi_is_quasi_periodic_with_automorphy_factor(hexagonal_green):
    lattice = hexagonal_green.host
    unit = hexagonal_green.translation_unit((2 * lattice.omega1 + lattice.omega2) / 5, 5)
    z = 0.13 + 0.29j
    for omega in (lattice.omega1, lattice.omega2):
        assert unit.phi_value(z + omega) == pytest.approx(unit.automorphy_factor(omega) * unit.phi_value(z), rel=1e-9)


@pytest.mark.parametrize("order", [2, 3, 5])
def test_automorphy_residuals(square_green, order):
    residual = automorphy_check(square_green, order)
    assert residual.torsion < 1e-9
    assert residual.legendre_value < 1e-9


@pytest.mark.parametrize("n", [2, 3])
def test_pushforward_invariance(square_green, rng, n):
    for z in _admissible(square_green, rng, 10):
        if all(square_green.is_regular(w) for w in division_preimages(square_green.host, z, n)):
            assert pushforward_check(square_green, n, z) < 1e-7


def test_pushforward_of_degree_one_is_trivial(square_green):
    assert pushforward_check(square_green, 1, 0.3 + 0.4j) == pytest.approx(0, abs=1e-13)


@pytest.mark.parametrize("order", [2, 3, 5])
def test_distribution_relation(hexagonal_green, rng, order):
    shifts = [p.value for p in enumerate_torsion(hexagonal_green.host, order)]
    zs = sample_points(
        hexagonal_green.host,
        rng,
        10,
        accept=lambda z: hexagonal_green.is_regular(order * z)
        and all(hexagonal_green.is_regular(z + s) for s in shifts),
    )
    for z in zs:
        assert distribution_check(hexagonal_green, order, z) < 1e-7


def test_distribution_of_order_one_is_trivial(hexagonal_green):
    assert distribution_check(hexagonal_green, 1, 0.3 + 0.4j) == pytest.approx(0, abs=1e-13)


@pytest.mark.parametrize("tau, order", [(1j, 2), (0.5 + 1j, 3)])
def test_main_identity(tau, order, rng):
    evaluator = GreenEvaluator.for_tau(tau)
    shifts = [p.value for p in enumerate_torsion(evaluator.host, order)]
    zs = sample_points(
        evaluator.host,
        rng,
        20,
        accept=lambda z: evaluator.is_regular(order * z) and all(evaluator.is_regular(z + s) for s in shifts),
    )
    for z in zs:
        assert main_theorem_check(evaluator, order, z) < 1e-6


def test_main_identity_at_a_torsion_point_signals(square_green):
    with pytest.raises(SingularInputError):
        main_theorem_check(square_green, 2, 0.5)


@pytest.mark.parametrize("order, a", [(2, 3), (3, 4), (3, 7), (5, 6)])
def test_robert_product_is_a_unimodular_constant(square_green, rng, order, a):
    lattice = square_green.host
    unit = square_green.translation_unit(enumerate_torsion(lattice, order)[1].value, order)

    def accept(z):
        fibre = [z, *division_preimages(lattice, z, a)]
        return all(square_green.is_regular(w) and square_green.is_regular(w - unit.z0) for w in fibre)

    zs = sample_points(lattice, rng, 10, accept=accept)
    residual = robert_trace_check(unit, a, zs)
    assert residual.modulus < 1e-7
    assert residual.phase_drift < 1e-7


def test_robert_product_of_degree_one_is_exact(square_green):
    unit = square_green.translation_unit(0.5j, 2)
    residual = robert_trace_check(unit, 1, [0.3 + 0.2j, 0.1 + 0.7j])
    assert residual.modulus == 0
    assert residual.phase_drift == 0


def test_robert_product_needs_a_congruent_to_one(square_green):
    unit = square_green.translation_unit(0.5j, 2)
    with pytest.raises(ValueError):
        robert_trace_check(unit, 2, 0.3 + 0.2j)
    with pytest.raises(ValueError):
        robert_trace_check(unit, 4, 0.3 + 0.2j)


def test_robert_product_needs_sample_points(square_green):
    unit = square_green.translation_unit(0.5j, 2)
    with pytest.raises(ValueError, match="at least one sample point"):
        robert_trace_check(unit, 3, [])


def test_sample_points_respect_predicate(square_green, rng):
    points = sample_points(square_green.host, rng, 25, accept=lambda z: z.real < 0.5)
    assert len(points) == 25
    assert all(z.real < 0.5 for z in points)
