"""Finite levels of the logarithm sheaf as modules over ``Z[Gamma]``, ``Gamma = Z^{2g}``.

Level ``n`` is ``Z[Gamma] / I^{n+1}`` with basis the monomials of total degree
at most ``n`` in ``x_i = t_i - 1``. The generator ``t_i`` acts by multiplication
with ``1 + x_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from ..exceptions import CohomologyError
from .smith import identity, matrix_power, zeros

Monomial = tuple[int, ...]


def monomial_basis(variables: int, level: int) -> list[Monomial]:
    """Exponent vectors of degree ``<= level``, by degree and then lexicographically."""

    basis: list[Monomial] = []
    for degree in range(level + 1):
        of_degree = [
            e for e in itertools.product(range(degree + 1), repeat=variables) if sum(e) == degree
        ]
        basis.extend(sorted(of_degree, reverse=True))
    return basis


@dataclass(frozen=True, eq=False)
class LogModule:
    genus: int
    level: int
    basis: tuple[Monomial, ...] = field(repr=False)
    action: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def variables(self) -> int:
        return 2 * self.genus

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis)}

    @property
    def unit(self) -> np.ndarray:
        """The element ``1``, the image of the neutral element of ``Gamma``."""

        vector = np.zeros(self.rank, dtype=object)
        vector[0] = 1
        return vector

    def nilpotent(self, i: int) -> np.ndarray:
        """Multiplication by ``x_i``."""

        return self.action[i] - identity(self.rank)

    def augmentation(self) -> np.ndarray:
        """Row vector of the augmentation ``t_i -> 1``: the constant coefficient."""

        row = np.zeros((1, self.rank), dtype=object)
        row[0, 0] = 1
        return row

    def transition(self) -> np.ndarray:
        """Truncation ``level -> level - 1`` as a ``rank(n-1) x rank(n)`` matrix."""

        if self.level == 0:
            raise ValueError("level 0 has no transition map")
        lower = monomial_basis(self.variables, self.level - 1)
        matrix = zeros(len(lower), self.rank)
        for row, monomial in enumerate(lower):
            matrix[row, self.index[monomial]] = 1
        return matrix

    def power(self, i: int, exponent: int) -> np.ndarray:
        return matrix_power(self.action[i], exponent)

    def norm(self, i: int, a: int) -> np.ndarray:
        """``N_i = 1 + t_i + ... + t_i^{a-1}``."""

        total = zeros(self.rank, self.rank)
        step = identity(self.rank)
        for _ in range(a):
            total = total + step
            step = step @ self.action[i]
        return total

    def psi(self, a: int) -> np.ndarray:
        """The ring endomorphism induced by ``[a]``: ``x_i -> (1 + x_i)^a - 1``."""

        if a < 1:
            raise ValueError("multiplier must be positive")
        images = [self.power(i, a) - identity(self.rank) for i in range(self.variables)]
        matrix = zeros(self.rank, self.rank)
        for column, monomial in enumerate(self.basis):
            vector = self.unit.reshape(-1, 1)
            for i, exponent in enumerate(monomial):
                vector = matrix_power(images[i], exponent) @ vector
            matrix[:, column] = vector[:, 0]
        return matrix

    def check(self) -> None:
        n = self.rank
        for i, first in enumerate(self.action):
            if not (matrix_power(first - identity(n), self.level + 1) == 0).all():
                raise CohomologyError(f"T_{i} - Id is not nilpotent of order {self.level + 1}")
            for second in self.action[i + 1:]:
                if not (first @ second == second @ first).all():
                    raise CohomologyError("generators do not commute")

    def __repr__(self) -> str:  # pragma: no cover - repr for debugging
        return f"<LogModule g={self.genus} n={self.level} rank={self.rank}>"


def build_log_module(genus: int, level: int) -> LogModule:
    if genus < 1:
        raise ValueError("genus must be positive")
    if level < 0:
        raise ValueError("level must be non-negative")
    variables = 2 * genus
    basis = monomial_basis(variables, level)
    index = {m: i for i, m in enumerate(basis)}
    action = []
    for i in range(variables):
        T = identity(len(basis))
        for column, monomial in enumerate(basis):
            shifted = tuple(e + (k == i) for k, e in enumerate(monomial))
            if shifted in index:
                T[index[shifted], column] += 1
        action.append(T)
    module = LogModule(genus, level, tuple(basis), tuple(action))
    expected = comb(variables + level, level)
    if module.rank != expected:  # pragma: no cover - combinatorial identity
        raise AssertionError(f"rank {module.rank} != binomial {expected}")
    return module


def trivial_module(genus: int) -> LogModule:
    """Constant integer coefficients, which is level 0 of the logarithm sheaf."""

    return build_log_module(genus, 0)


def graded_rank(genus: int, degree: int) -> int:
    """Rank of ``Sym^degree Gamma``."""

    return comb(2 * genus + degree - 1, degree)


__all__ = ["LogModule", "build_log_module", "trivial_module", "monomial_basis", "graded_rank"]
