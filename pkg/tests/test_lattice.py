from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polylab.exceptions import DegenerateLatticeError
from polylab.lattice import (
    Lattice,
    division_preimages,
    enumerate_torsion,
    is_congruent,
    reduce_lattice,
    reduce_point,
    torsion_index,
)


def test_reduce_translates_integer_shift():
    lattice, matrix = reduce_lattice(1, 3 + 1j)
    assert lattice.tau == pytest.approx(1j)
    assert matrix.tolist() == [[1, -3], [0, 1]]


def test_reduce_keeps_scale_of_first_period():
    lattice, _ = reduce_lattice(2, 2j)
    assert lattice.omega1 == pytest.approx(2)
    assert lattice.tau == pytest.approx(1j)


def test_reduce_lands_in_fundamental_domain():
    lattice, matrix = reduce_lattice(1, 0.3 + 0.4j)
    tau = lattice.tau
    assert abs(tau) >= 1 - 1e-12
    assert abs(tau.real) <= 0.5 + 1e-12
    assert round(np.linalg.det(matrix.astype(float))) == 1


@pytest.mark.parametrize(
    "omega1, omega2",
    [(1, 2), (1, 1 + 1e-14j), (0, 1j), (1, float("nan"))],
)
def test_degenerate_periods_are_rejected(omega1, omega2):
    with pytest.raises(DegenerateLatticeError):
        reduce_lattice(omega1, omega2)


def test_lattice_rejects_wrong_orientation():
    with pytest.raises(DegenerateLatticeError):
        Lattice(1, -1j)


@settings(max_examples=200, deadline=None)
@given(
    radius=st.floats(min_value=0.5, max_value=2.0),
    angle=st.floats(min_value=-math.pi, max_value=math.pi),
    re_tau=st.floats(min_value=-10, max_value=10),
    im_tau=st.floats(min_value=0.05, max_value=5),
)
def test_reduction_is_unimodular_change_of_basis(radius, angle, re_tau, im_tau):
    omega1 = cmath.rect(radius, angle)
    omega2 = omega1 * complex(re_tau, im_tau)
    lattice, matrix = reduce_lattice(omega1, omega2)

    assert lattice.is_reduced
    assert round(np.linalg.det(matrix.astype(float))) == 1
    expected1 = int(matrix[0, 0]) * omega1 + int(matrix[1, 0]) * omega2
    expected2 = int(matrix[0, 1]) * omega1 + int(matrix[1, 1]) * omega2
    assert lattice.omega1 == expected1
    assert lattice.omega2 == expected2
    original = Lattice(omega1, omega2)
    assert lattice.covolume == pytest.approx(original.covolume, rel=1e-9)


@pytest.mark.parametrize(
    "tau, expected_tau, expected_matrix",
    [
        (complex(-0.5, math.sqrt(3) / 2), complex(0.5, math.sqrt(3) / 2), [[1, 1], [0, 1]]),
        (-0.5 + 1.3j, 0.5 + 1.3j, [[1, 1], [0, 1]]),
        (complex(-0.3, math.sqrt(0.91)), complex(0.3, math.sqrt(0.91)), [[0, -1], [1, 0]]),
    ],
)
def test_boundary_ties_go_to_nonnegative_real_part(tau, expected_tau, expected_matrix):
    lattice, matrix = reduce_lattice(1, tau)
    assert lattice.tau == pytest.approx(expected_tau, abs=1e-12)
    assert matrix.tolist() == expected_matrix
    again, identity = reduce_lattice(lattice.omega1, lattice.omega2)
    assert identity.tolist() == [[1, 0], [0, 1]]
    assert again == lattice


@settings(max_examples=150, deadline=None)
@given(
    re_tau=st.floats(min_value=-4, max_value=4),
    im_tau=st.floats(min_value=0.2, max_value=4),
)
def test_reduction_is_idempotent(re_tau, im_tau):
    lattice, _ = reduce_lattice(1, complex(re_tau, im_tau))
    again, matrix = reduce_lattice(lattice.omega1, lattice.omega2)
    assert matrix.tolist() == [[1, 0], [0, 1]]
    assert again.tau == pytest.approx(lattice.tau, abs=1e-12)


@pytest.mark.parametrize("order, a", [(2, 3), (3, 2), (4, 3), (5, 2), (6, 5), (7, 3), (5, 4)])
def test_multiplication_by_a_unit_permutes_torsion(hexagonal_lattice, order, a):
    points = enumerate_torsion(hexagonal_lattice, order)
    indices = {(p.j, p.k) for p in points}
    images = [p.scaled(a) for p in points]
    assert {(q.j, q.k) for q in images} == indices
    for point, image in zip(points, images):
        assert is_congruent(hexagonal_lattice, image.value, a * point.value, 1e-10)


def test_enumerate_two_torsion_of_gaussian_lattice(square_lattice):
    values = {complex(p.value) for p in enumerate_torsion(square_lattice, 2)}
    assert values == {0, 0.5, 0.5j, 0.5 + 0.5j}


def test_torsion_of_order_one_is_the_origin(hexagonal_lattice):
    points = enumerate_torsion(hexagonal_lattice, 1)
    assert len(points) == 1
    assert points[0].is_zero


def test_three_torsion_count(hexagonal_lattice):
    points = enumerate_torsion(hexagonal_lattice, 3)
    assert len(points) == 9
    assert points[0].is_zero
    assert sum(1 for p in points if not p.is_zero) == 8


def test_enumerate_torsion_rejects_nonpositive_order(square_lattice):
    with pytest.raises(ValueError):
        enumerate_torsion(square_lattice, 0)


def test_torsion_point_arithmetic(hexagonal_lattice):
    point = enumerate_torsion(hexagonal_lattice, 5)[7]
    assert (-point).scaled(-1) == point
    assert point.scaled(5).is_zero
    assert is_congruent(hexagonal_lattice, point.scaled(2).value, 2 * point.value, 1e-12)


def test_torsion_index_recovers_indices(hexagonal_lattice):
    for point in enumerate_torsion(hexagonal_lattice, 4):
        shifted = point.value + 3 * hexagonal_lattice.omega1 - 2 * hexagonal_lattice.omega2
        assert torsion_index(hexagonal_lattice, shifted, 4) == (point.j, point.k)
    with pytest.raises(ValueError):
        torsion_index(hexagonal_lattice, 0.1234 + 0.01j, 4)


def test_division_fibre_over_zero_is_two_torsion(square_lattice):
    fibre = division_preimages(square_lattice, 0, 2)
    assert len(fibre) == 4
    torsion = [p.value for p in enumerate_torsion(square_lattice, 2)]
    for w in fibre:
        assert any(is_congruent(square_lattice, w, t, 1e-12) for t in torsion)


def test_division_of_degree_one_is_identity(hexagonal_lattice):
    assert division_preimages(hexagonal_lattice, 0.3 + 0.2j, 1) == [0.3 + 0.2j]


def test_division_preimages_solve_the_equation(square_lattice):
    z = 0.3 + 0.4j
    fibre = division_preimages(square_lattice, z, 3)
    assert len(fibre) == 9
    for w in fibre:
        assert is_congruent(square_lattice, 3 * w, z, 1e-12)
    for first in range(9):
        for second in range(first + 1, 9):
            assert not is_congruent(square_lattice, fibre[first], fibre[second], 1e-9)


@pytest.mark.parametrize(
    "z, w, expected",
    [(0.5, 0.5 + 1 + 1j, True), (0.5, 0.6, False)],
)
def test_is_congruent_on_gaussian_lattice(square_lattice, z, w, expected):
    assert is_congruent(square_lattice, z, w, 1e-12) is expected


def test_is_congruent_under_lattice_translate(hexagonal_lattice):
    z = 0.17 + 0.31j
    w = z + 7 * hexagonal_lattice.omega1 - 4 * hexagonal_lattice.omega2
    assert is_congruent(hexagonal_lattice, z, w, 1e-10)


def test_is_congruent_needs_positive_tolerance(square_lattice):
    with pytest.raises(ValueError):
        is_congruent(square_lattice, 0, 0, 0)


def test_reduce_point_lands_in_cell(hexagonal_lattice):
    z = 4.3 - 2.7j
    rep = reduce_point(hexagonal_lattice, z)
    s, t = hexagonal_lattice.coordinates(rep.z)
    assert 0 <= float(s) < 1 and 0 <= float(t) < 1
    assert rep.is_congruent_to(z)
