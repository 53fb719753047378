"""Koszul cochain complexes computing the cohomology of a real torus with local coefficients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..exceptions import CohomologyError
from .log_module import LogModule
from .smith import zeros

Subset = tuple[int, ...]


def subsets(variables: int, size: int) -> list[Subset]:
    return list(itertools.combinations(range(variables), size))


def koszul_sign(i: int, subset: Subset) -> int:
    """Sign of ``e_i ^ e_S`` rewritten as ``e_{S + i}``."""

    return -1 if sum(1 for j in subset if j < i) % 2 else 1


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """``C^k = M (x) Lambda^k Z^{2g}`` with ``d(m e_S) = sum_i sign (t_i - 1) m e_{S+i}``.

    Coordinates of ``C^k`` are grouped in blocks of ``rank(M)``, one per subset
    ``S`` in :func:`itertools.combinations` order.
    """

    module: LogModule
    differentials: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def top(self) -> int:
        return self.module.variables

    def dimension(self, degree: int) -> int:
        return self.module.rank * len(subsets(self.top, degree))

    def differential(self, degree: int) -> np.ndarray:
        """``d_k: C^k -> C^{k+1}``; zero maps outside ``0 <= k < 2g``."""

        if 0 <= degree < self.top:
            return self.differentials[degree]
        return zeros(self.dimension(degree + 1) if 0 <= degree + 1 <= self.top else 0,
                     self.dimension(degree) if 0 <= degree <= self.top else 0)

    def block(self, degree: int, subset: Subset) -> slice:
        position = subsets(self.top, degree).index(tuple(subset))
        rank = self.module.rank
        return slice(position * rank, (position + 1) * rank)

    def top_cochain(self, element: np.ndarray) -> np.ndarray:
        """``element (x) e_1 ^ ... ^ e_{2g}`` in ``C^{2g}``."""

        return np.array(element, dtype=object)

    def check(self) -> None:
        for k in range(self.top - 1):
            if not (self.differentials[k + 1] @ self.differentials[k] == 0).all():
                raise CohomologyError(f"d_{k + 1} o d_{k} is not zero")

    def cochain_map(self, blocks: Callable[[Subset], np.ndarray], degree: int) -> np.ndarray:
        """Block-diagonal endomorphism of ``C^degree`` acting by ``blocks(S)`` on ``M e_S``."""

        rank = self.module.rank
        parts = subsets(self.top, degree)
        matrix = zeros(rank * len(parts), rank * len(parts))
        for position, subset in enumerate(parts):
            window = slice(position * rank, (position + 1) * rank)
            matrix[window, window] = blocks(subset)
        return matrix


def koszul_complex(module: LogModule) -> CochainComplex:
    rank = module.rank
    top = module.variables
    nilpotents = [module.nilpotent(i) for i in range(top)]
    differentials = []
    for degree in range(top):
        source = subsets(top, degree)
        target = {s: position for position, s in enumerate(subsets(top, degree + 1))}
        d = zeros(rank * len(target), rank * len(source))
        for column, subset in enumerate(source):
            for i in range(top):
                if i in subset:
                    continue
                row = target[tuple(sorted(subset + (i,)))]
                d[row * rank:(row + 1) * rank, column * rank:(column + 1) * rank] = (
                    koszul_sign(i, subset) * nilpotents[i]
                )
        differentials.append(d)
    complex_ = CochainComplex(module, tuple(differentials))
    complex_.check()
    return complex_


def between_levels(upper: CochainComplex, lower: CochainComplex, degree: int,
                   blocks: Callable[[Subset], np.ndarray]) -> np.ndarray:
    """Block-diagonal map ``C^degree(upper) -> C^degree(lower)``."""

    parts = subsets(upper.top, degree)
    r_up, r_low = upper.module.rank, lower.module.rank
    matrix = zeros(r_low * len(parts), r_up * len(parts))
    for position, subset in enumerate(parts):
        matrix[position * r_low:(position + 1) * r_low, position * r_up:(position + 1) * r_up] = blocks(subset)
    return matrix


def euler_characteristic(ranks: Sequence[int]) -> int:
    return sum((-1) ** k * r for k, r in enumerate(ranks))


__all__ = [
    "CochainComplex",
    "koszul_complex",
    "koszul_sign",
    "subsets",
    "between_levels",
    "euler_characteristic",
]
