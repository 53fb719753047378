"""Cohomology of the torus punctured at its ``N``-torsion points.

The localization sequence

    0 -> H^{2g-1}(X, M) -> H^{2g-1}(X \\ X[N], M) -> sum_x M_x -> H^{2g}(X, M) -> 0

presents the punctured group as ``H^{2g-1}(X, M) + ker(connecting)``. Stalks
are identified with ``M`` along the straight path from 0 to the lift of ``x``
with coordinates in ``[0, 1)``, so the connecting map is the same block at
every point.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ..exceptions import ExactnessError, ResidueInfeasibleError
from .cohomology import (
    DEFAULT_SHEAF_BUDGET,
    CohomologyResult,
    check_budget,
    torus_cohomology,
    transition_cochain_map,
)
from .koszul import euler_characteristic
from .log_module import LogModule
from .smith import (
    SmithForm,
    block_diagonal,
    identity,
    integer_kernel,
    integer_rank,
    smith_normal_form,
    solve_integer,
    zeros,
)

logger = logging.getLogger(__name__)

TorsionIndex = tuple[int, ...]


def torsion_indices(genus: int, order: int) -> list[TorsionIndex]:
    """Points of ``(Z/N)^{2g}`` in lexicographic order; the zero point comes first."""

    if order < 1:
        raise ValueError("torsion order must be positive")
    return list(itertools.product(range(order), repeat=2 * genus))


@dataclass(frozen=True, eq=False)
class PuncturedCohomology:
    torus: CohomologyResult
    order: int
    points: tuple[TorsionIndex, ...]
    connecting: np.ndarray = field(repr=False)
    kernel: np.ndarray = field(repr=False)
    kernel_form: SmithForm = field(repr=False)

    @property
    def module(self) -> LogModule:
        return self.torus.module

    @property
    def top(self) -> int:
        return self.torus.complex.top

    @property
    def torus_rank(self) -> int:
        """Free rank of ``H^{2g-1}(X, M)``."""

        return self.torus.group(self.top - 1).free_rank

    @property
    def kernel_rank(self) -> int:
        return self.kernel.shape[1]

    @property
    def rank(self) -> int:
        return self.torus_rank + self.kernel_rank

    @property
    def stalk_dimension(self) -> int:
        return self.module.rank * len(self.points)

    @property
    def residue(self) -> np.ndarray:
        """Residue map from the presentation to the stalk sum."""

        return np.hstack([zeros(self.stalk_dimension, self.torus_rank), self.kernel])

    @property
    def inclusion(self) -> np.ndarray:
        """``H^{2g-1}(X, M)`` inside the presentation."""

        return np.vstack([identity(self.torus_rank), zeros(self.kernel_rank, self.torus_rank)])

    def stalk(self, point: TorsionIndex) -> slice:
        position = self.points.index(tuple(point))
        rank = self.module.rank
        return slice(position * rank, (position + 1) * rank)

    def stalk_vector(self, values: Mapping[TorsionIndex, np.ndarray]) -> np.ndarray:
        vector = np.zeros(self.stalk_dimension, dtype=object)
        for point, value in values.items():
            vector[self.stalk(point)] = value
        return vector

    def kernel_coordinates(self, stalk_vector: np.ndarray) -> Optional[np.ndarray]:
        return solve_integer(self.kernel, stalk_vector, form=self.kernel_form)

    def augmentation_sum(self) -> np.ndarray:
        """``sum_x eps(m_x)`` as a row matrix on the stalk sum."""

        return np.hstack([self.module.augmentation()] * len(self.points))

    def ranks(self) -> list[int]:
        """Free ranks of ``H^k(X \\ X[N], M)`` for ``k = 0 .. 2g``."""

        ranks = self.torus.ranks[: self.top - 1]
        return ranks + [self.rank, 0]

    def exactness(self) -> dict[str, bool]:
        """Kernel/image checks at every node of the localization sequence."""

        residue, connecting = self.residue, self.connecting
        residue_form = smith_normal_form(residue, check=False)
        connecting_form = smith_normal_form(connecting)
        top_rank = self.torus.group(self.top).free_rank
        return {
            "inclusion-injective": integer_rank(self.inclusion) == self.torus_rank,
            "punctured-group": bool((residue @ self.inclusion == 0).all())
            and residue_form.rank + self.torus_rank == self.rank,
            "stalks": bool((connecting @ residue == 0).all())
            and residue_form.rank == self.stalk_dimension - connecting_form.rank
            and all(d == 1 for d in residue_form.invariant_factors),
            "top-degree": connecting_form.rank == top_rank
            and all(d == 1 for d in connecting_form.invariant_factors),
            "euler-characteristic": euler_characteristic(self.ranks())
            == -self.module.rank * len(self.points),
        }

    def check_exactness(self) -> None:
        failed = [name for name, ok in self.exactness().items() if not ok]
        if failed:
            raise ExactnessError(f"localization sequence is not exact at {', '.join(failed)}")

    def connecting_matches_augmentation(self) -> bool:
        return self.connecting.shape == (1, self.stalk_dimension) and bool(
            (self.connecting == self.augmentation_sum()).all()
        )


def _connecting_block(torus: CohomologyResult) -> np.ndarray:
    module = torus.module
    top_group = torus.group(torus.complex.top)
    block = zeros(top_group.free_rank, module.rank)
    for column in range(module.rank):
        cochain = np.zeros(module.rank, dtype=object)
        cochain[column] = 1
        block[:, column] = top_group.coordinates(torus.complex.top_cochain(cochain))
    # the class of 1 (x) e_top is the positive generator
    if block.shape[0] == 1 and block[0, 0] < 0:
        block = -block
    return block


def punctured_cohomology(
    module: LogModule,
    order: int,
    budget: int = DEFAULT_SHEAF_BUDGET,
    torus: Optional[CohomologyResult] = None,
) -> PuncturedCohomology:
    points = torsion_indices(module.genus, order)
    check_budget(module, stalks=len(points), budget=budget)
    torus = torus or torus_cohomology(module, budget=budget)
    connecting = np.hstack([_connecting_block(torus)] * len(points))
    kernel = integer_kernel(connecting)
    result = PuncturedCohomology(torus, order, tuple(points), connecting, kernel, smith_normal_form(kernel))
    result.check_exactness()
    logger.debug(
        "punctured cohomology g=%d n=%d N=%d: rank %d", module.genus, module.level, order, result.rank
    )
    return result


def stalk_data(punctured: PuncturedCohomology, phi: Sequence[int], at_zero: Optional[int] = None) -> np.ndarray:
    """``phi(x) * 1`` on the nonzero points and ``at_zero * 1`` (default ``-sum phi``) at 0."""

    nonzero = punctured.points[1:]
    if len(phi) != len(nonzero):
        raise ValueError(f"phi needs {len(nonzero)} entries, got {len(phi)}")
    unit = punctured.module.unit
    zero_value = -sum(int(v) for v in phi) if at_zero is None else int(at_zero)
    values = {punctured.points[0]: zero_value * unit}
    values.update({point: int(v) * unit for point, v in zip(nonzero, phi)})
    return punctured.stalk_vector(values)


def polylog_class(
    punctured: PuncturedCohomology, phi: Sequence[int], at_zero: Optional[int] = None
) -> np.ndarray:
    """Class in the presentation whose residue is the stalk data of ``phi``."""

    target = stalk_data(punctured, phi, at_zero)
    total = int((punctured.augmentation_sum() @ target)[0])
    if total != 0:
        raise ResidueInfeasibleError(f"residue has total augmentation {total}, expected 0")
    coordinates = punctured.kernel_coordinates(target)
    if coordinates is None:
        raise ResidueInfeasibleError("residue is not in the image of the residue map")
    cls = np.concatenate([np.zeros(punctured.torus_rank, dtype=object), coordinates])
    if not (punctured.residue @ cls == target).all():
        raise ExactnessError("back-substitution of the residue failed")
    return cls


def residue_transition_square(
    upper: PuncturedCohomology, lower: PuncturedCohomology
) -> tuple[np.ndarray, np.ndarray]:
    """Both composites ``presentation(n) -> stalks(n-1)`` of the transition square."""

    if upper.order != lower.order or upper.module.level != lower.module.level + 1:
        raise ValueError("transition squares go from level n to level n-1 at the same order")
    truncation = upper.module.transition()
    stalk_map = block_diagonal(*([truncation] * len(upper.points)))
    degree = upper.top - 1
    torus_block = upper.torus.induced_map(
        transition_cochain_map(upper.torus, lower.torus, degree), degree, target=lower.torus
    )
    kernel_block = solve_integer(lower.kernel, stalk_map @ upper.kernel, form=lower.kernel_form)
    if kernel_block is None:
        raise ExactnessError("truncation does not preserve the kernel of the connecting map")
    presentation_map = block_diagonal(torus_block, kernel_block)
    return lower.residue @ presentation_map, stalk_map @ upper.residue


__all__ = [
    "PuncturedCohomology",
    "punctured_cohomology",
    "polylog_class",
    "stalk_data",
    "torsion_indices",
    "residue_transition_square",
]
