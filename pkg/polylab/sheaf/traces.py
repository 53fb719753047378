"""Trace operators ``tr_[a]`` and their generalized eigenspaces.

On the Koszul complex the trace acts on ``M e_S`` by ``(prod_{i not in S} N_i) Psi_a``,
the corestriction along ``a Gamma < Gamma`` after the coefficient map
``t_i -> t_i^a``. On the stalk sum it moves the stalk at ``x`` to ``a x``.
Eigenspace computations are exact over the rationals with sympy.
"""

from __future__ import annotations

from functools import reduce
from math import comb, gcd
from typing import Literal, Optional

import numpy as np
import sympy

from ..exceptions import ExactnessError, TraceGcdError
from .cohomology import CohomologyResult, torus_cohomology
from .log_module import LogModule, trivial_module
from .punctured import PuncturedCohomology, polylog_class, punctured_cohomology
from .smith import block_diagonal, solve_integer, zeros

Stage = Literal["torus", "stalks", "punctured"]


def _check_multiplier(a: int) -> None:
    if a < 1:
        raise ValueError("trace multiplier must be a positive integer")


def torus_trace_cochain(module: LogModule, a: int, degree: int, complex_) -> np.ndarray:
    _check_multiplier(a)
    psi = module.psi(a)
    norms = [module.norm(i, a) for i in range(module.variables)]

    def block(subset):
        factors = [norms[i] for i in range(module.variables) if i not in subset]
        return reduce(lambda x, y: x @ y, factors, psi) if factors else psi

    return complex_.cochain_map(block, degree)


def torus_trace(result: CohomologyResult, a: int, degree: int) -> np.ndarray:
    """``tr_[a]`` on the free part of ``H^degree(X, M)``."""

    cochain = torus_trace_cochain(result.module, a, degree, result.complex)
    return result.induced_map(cochain, degree, name=f"trace[{a}][{degree}]")


def stalk_trace(punctured: PuncturedCohomology, a: int) -> np.ndarray:
    """``tr_[a]`` on ``sum_x M_x``: the stalk at ``x`` goes to ``a x`` through ``Psi_a``."""

    _check_multiplier(a)
    if gcd(a, punctured.order) != 1:
        raise TraceGcdError(f"gcd({a}, {punctured.order}) != 1")
    psi = punctured.module.psi(a)
    matrix = zeros(punctured.stalk_dimension, punctured.stalk_dimension)
    for point in punctured.points:
        image = tuple((a * c) % punctured.order for c in point)
        source, target = punctured.stalk(point), punctured.stalk(image)
        matrix[target, source] = psi
    return matrix


def punctured_trace(punctured: PuncturedCohomology, a: int) -> np.ndarray:
    """``tr_[a]`` on the presentation ``H^{2g-1}(X, M) + ker(connecting)``, block by block."""

    stalks = stalk_trace(punctured, a)
    torus_block = torus_trace(punctured.torus, a, punctured.top - 1)
    kernel_block = solve_integer(punctured.kernel, stalks @ punctured.kernel, form=punctured.kernel_form)
    if kernel_block is None:
        raise ExactnessError("trace does not preserve the kernel of the connecting map")
    return block_diagonal(torus_block, kernel_block)


def trace_operator(
    module: LogModule,
    a: int,
    stage: Stage = "torus",
    degree: Optional[int] = None,
    order: Optional[int] = None,
) -> np.ndarray:
    if stage == "torus":
        if degree is None:
            raise ValueError("the torus stage needs a cohomological degree")
        return torus_trace(torus_cohomology(module), a, degree)
    if order is None:
        raise ValueError(f"the {stage} stage needs the torsion order")
    punctured = punctured_cohomology(module, order)
    if stage == "stalks":
        return stalk_trace(punctured, a)
    if stage == "punctured":
        return punctured_trace(punctured, a)
    raise ValueError(f"unknown stage {stage!r}")


def trace_commutator(punctured: PuncturedCohomology, a: int, b: int) -> np.ndarray:
    first, second = punctured_trace(punctured, a), punctured_trace(punctured, b)
    return first @ second - second @ first


def residue_trace_square(punctured: PuncturedCohomology, a: int) -> tuple[np.ndarray, np.ndarray]:
    """``residue o tr`` and ``tr o residue``."""

    return (
        punctured.residue @ punctured_trace(punctured, a),
        stalk_trace(punctured, a) @ punctured.residue,
    )


def permuted_phi(punctured: PuncturedCohomology, phi, a: int) -> list[int]:
    """``([a] phi)(a x) = phi(x)`` on the nonzero torsion points."""

    if gcd(a, punctured.order) != 1:
        raise TraceGcdError(f"gcd({a}, {punctured.order}) != 1")
    nonzero = punctured.points[1:]
    values = dict(zip(nonzero, phi))
    result = {}
    for point, value in values.items():
        result[tuple((a * c) % punctured.order for c in point)] = value
    return [int(result[point]) for point in nonzero]


def norm_compatibility(punctured: PuncturedCohomology, phi, a: int) -> bool:
    traced = punctured_trace(punctured, a) @ polylog_class(punctured, phi)
    return bool((traced == polylog_class(punctured, permuted_phi(punctured, phi, a))).all())


# --------------------------------------------------------------------------- eigenspaces


def to_rational(matrix) -> sympy.Matrix:
    array = np.array(matrix, dtype=object)
    return sympy.Matrix(array.shape[0], array.shape[1], [sympy.Integer(int(x)) for x in array.flat])


def weight_eigenspace(matrix, a: int, r: int) -> sympy.Matrix:
    """Basis (as columns) of the generalized eigenspace of eigenvalue ``a**r``."""

    T = matrix if isinstance(matrix, sympy.MatrixBase) else to_rational(matrix)
    if T.rows != T.cols:
        raise ValueError("eigenspaces need a square matrix")
    n = T.rows
    if n == 0:
        return sympy.zeros(0, 0)
    shifted = T - sympy.Integer(a) ** r * sympy.eye(n)
    power = sympy.eye(n)
    basis: list = []
    previous = -1
    for _ in range(n):
        power = power * shifted
        basis = power.nullspace()
        if len(basis) == previous:
            break
        previous = len(basis)
    return sympy.Matrix.hstack(*basis) if basis else sympy.zeros(n, 0)


def same_subspace(first: sympy.Matrix, second: sympy.Matrix) -> bool:
    if first.rows != second.rows:
        return False
    if first.cols == 0 or second.cols == 0:
        return first.rank() == second.rank() == 0
    rank = first.rank()
    return rank == second.rank() == sympy.Matrix.hstack(first, second).rank()


def rational_cohomology_trace(genus: int, a: int) -> sympy.Matrix:
    """``tr_[a]`` on ``H^*(X, Q) = sum_k H^k(X, Q)`` with constant coefficients."""

    result = torus_cohomology(trivial_module(genus))
    blocks = [torus_trace(result, a, k) for k in range(2 * genus + 1)]
    return to_rational(block_diagonal(*blocks))


def weight_decomposition(genus: int, a: int) -> dict[int, sympy.Matrix]:
    """Generalized eigenspaces of weight ``r = 0 .. 2g`` on ``H^*(X, Q)``."""

    T = rational_cohomology_trace(genus, a)
    decomposition = {r: weight_eigenspace(T, a, r) for r in range(2 * genus + 1)}
    dimensions = [decomposition[r].cols for r in range(2 * genus + 1)]
    if sum(dimensions) != T.rows:
        raise ExactnessError(f"weight spaces of dimensions {dimensions} do not span H^*")
    return decomposition


def expected_weight_dimension(genus: int, r: int) -> int:
    return comb(2 * genus, 2 * genus - r)


def weight_zero_residue(punctured: PuncturedCohomology, a: int) -> sympy.Matrix:
    """Residue on the weight-0 part, followed by projection to the nonzero stalks."""

    T = to_rational(punctured_trace(punctured, a))
    weight_zero = weight_eigenspace(T, a, 0)
    rank = punctured.module.rank
    residue = to_rational(punctured.residue)[rank:, :]
    return residue * weight_zero


__all__ = [
    "torus_trace",
    "stalk_trace",
    "punctured_trace",
    "trace_operator",
    "trace_commutator",
    "residue_trace_square",
    "permuted_phi",
    "norm_compatibility",
    "weight_eigenspace",
    "same_subspace",
    "weight_decomposition",
    "rational_cohomology_trace",
    "expected_weight_dimension",
    "weight_zero_residue",
    "to_rational",
]
