"""Integral cohomology of Koszul complexes via Smith normal form."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import BudgetExceededError, CohomologyError
from .koszul import CochainComplex, between_levels, euler_characteristic, koszul_complex
from .log_module import LogModule
from .smith import SmithForm, integer_kernel, smith_normal_form, solve_integer, zeros

logger = logging.getLogger(__name__)

DEFAULT_SHEAF_BUDGET = 20_000


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """``H^k = Z^free_rank + sum Z/d`` with explicit representative cocycles.

    ``cycles`` is a basis of the cocycles; boundaries written in that basis have
    Smith form ``quotient``. Column ``i`` of ``representatives`` generates the
    ``i``-th summand, torsion summands first.
    """

    degree: int
    free_rank: int
    torsion: tuple[int, ...]
    cycles: np.ndarray = field(repr=False)
    cycles_form: SmithForm = field(repr=False)
    quotient: SmithForm = field(repr=False)

    @property
    def boundary_rank(self) -> int:
        return self.quotient.rank

    @property
    def representatives(self) -> np.ndarray:
        return self.cycles @ self.quotient.U

    @property
    def free_representatives(self) -> np.ndarray:
        return self.representatives[:, self.boundary_rank:]

    def _cycle_coordinates(self, cochain: np.ndarray) -> np.ndarray:
        y = solve_integer(self.cycles, cochain, form=self.cycles_form)
        if y is None:
            raise CohomologyError(f"cochain is not a cocycle in degree {self.degree}")
        return self.quotient.U_inv @ y

    def coordinates(self, cochain: np.ndarray) -> np.ndarray:
        """Coordinates of the class of ``cochain`` in the free part."""

        return self._cycle_coordinates(cochain)[self.boundary_rank:]

    def torsion_coordinates(self, cochain: np.ndarray) -> list[int]:
        y = self._cycle_coordinates(cochain)
        factors = self.quotient.invariant_factors
        return [int(y[i]) % d for i, d in enumerate(factors) if d > 1]

    def is_zero(self, cochain: np.ndarray) -> bool:
        return not any(self.coordinates(cochain)) and not any(self.torsion_coordinates(cochain))


def _cohomology_group(complex_: CochainComplex, degree: int) -> CohomologyGroup:
    dimension = complex_.dimension(degree)
    outgoing = complex_.differentials[degree] if degree < complex_.top else zeros(0, dimension)
    cycles = integer_kernel(outgoing)
    cycles_form = smith_normal_form(cycles)
    if degree > 0:
        boundaries = complex_.differentials[degree - 1]
        in_cycles = solve_integer(cycles, boundaries, form=cycles_form)
        if in_cycles is None:
            raise CohomologyError(f"boundaries of degree {degree} are not cocycles")
    else:
        in_cycles = zeros(cycles.shape[1], 0)
    quotient = smith_normal_form(in_cycles)
    torsion = tuple(d for d in quotient.invariant_factors if d > 1)
    return CohomologyGroup(
        degree,
        cycles.shape[1] - quotient.rank,
        torsion,
        cycles,
        cycles_form,
        quotient,
    )


@dataclass(frozen=True, eq=False)
class CohomologyResult:
    complex: CochainComplex
    groups: tuple[CohomologyGroup, ...]
    maps: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def module(self) -> LogModule:
        return self.complex.module

    @property
    def ranks(self) -> list[int]:
        return [group.free_rank for group in self.groups]

    @property
    def torsion(self) -> list[tuple[int, ...]]:
        return [group.torsion for group in self.groups]

    @property
    def euler_characteristic(self) -> int:
        return euler_characteristic(self.ranks)

    def group(self, degree: int) -> CohomologyGroup:
        return self.groups[degree]

    def induced_map(
        self,
        cochain_map: np.ndarray,
        degree: int,
        target: Optional["CohomologyResult"] = None,
        name: Optional[str] = None,
    ) -> np.ndarray:
        """Matrix of the map on free parts induced by a cochain map in ``degree``."""

        target = target or self
        source_group, target_group = self.group(degree), target.group(degree)
        images = cochain_map @ source_group.free_representatives
        matrix = zeros(target_group.free_rank, source_group.free_rank)
        for column in range(source_group.free_rank):
            matrix[:, column] = target_group.coordinates(images[:, column])
        if name:
            self.maps[name] = matrix
        return matrix

    def to_dict(self) -> dict:
        return {
            "genus": self.module.genus,
            "level": self.module.level,
            "ranks": self.ranks,
            "groups": [
                {"degree": g.degree, "free_rank": g.free_rank, "torsion": list(g.torsion)}
                for g in self.groups
            ],
            "maps": {name: [[int(x) for x in row] for row in matrix] for name, matrix in self.maps.items()},
        }

    def to_text(self) -> str:
        lines = [f"g={self.module.genus} n={self.module.level} rank={self.module.rank}"]
        for g in self.groups:
            torsion = " torsion " + ",".join(str(d) for d in g.torsion) if g.torsion else ""
            lines.append(f"H^{g.degree}: rank {g.free_rank}{torsion}")
        for name, matrix in self.maps.items():
            lines.append(f"map {name} {matrix.shape[0]}x{matrix.shape[1]}")
            lines.extend("  " + " ".join(str(int(x)) for x in row) for row in matrix)
        return "\n".join(lines) + "\n"


def check_budget(module: LogModule, stalks: int = 0, budget: int = DEFAULT_SHEAF_BUDGET) -> None:
    size = module.rank * (2 ** module.variables + stalks)
    if size > budget:
        raise BudgetExceededError(
            f"g={module.genus} n={module.level} with {stalks} stalks needs {size} > {budget} generators"
        )


def torus_cohomology(module: LogModule, budget: int = DEFAULT_SHEAF_BUDGET) -> CohomologyResult:
    """``H^*(X, M)`` for the torus ``X = R^{2g}/Z^{2g}``."""

    check_budget(module, budget=budget)
    complex_ = koszul_complex(module)
    groups = tuple(_cohomology_group(complex_, k) for k in range(complex_.top + 1))
    result = CohomologyResult(complex_, groups)
    if result.euler_characteristic != 0:
        raise CohomologyError(f"Euler characteristic {result.euler_characteristic} != 0 on a torus")
    logger.debug("torus cohomology g=%d n=%d: ranks %s", module.genus, module.level, result.ranks)
    return result


def transition_cochain_map(upper: CohomologyResult, lower: CohomologyResult, degree: int) -> np.ndarray:
    truncation = upper.module.transition()
    return between_levels(upper.complex, lower.complex, degree, lambda subset: truncation)


def transition_maps(upper: CohomologyResult, lower: CohomologyResult) -> list[np.ndarray]:
    """Maps ``H^k(level n) -> H^k(level n-1)`` induced by truncation, for every ``k``."""

    if upper.module.genus != lower.module.genus or upper.module.level != lower.module.level + 1:
        raise ValueError("transition maps go from level n to level n-1 of the same genus")
    return [
        upper.induced_map(
            transition_cochain_map(upper, lower, k), k, target=lower, name=f"transition[{k}]"
        )
        for k in range(upper.complex.top + 1)
    ]


__all__ = [
    "DEFAULT_SHEAF_BUDGET",
    "CohomologyGroup",
    "CohomologyResult",
    "torus_cohomology",
    "transition_maps",
    "transition_cochain_map",
    "check_budget",
]
