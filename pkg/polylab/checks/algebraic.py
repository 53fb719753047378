"""Exact checks on the cohomology of the logarithm sheaf and the trace operators."""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

from ..exceptions import SmithFormError
from ..sheaf import (
    build_log_module,
    norm_compatibility,
    polylog_class,
    punctured_cohomology,
    residue_trace_square,
    residue_transition_square,
    same_subspace,
    smith_normal_form,
    stalk_data,
    torus_cohomology,
    torus_trace,
    trace_commutator,
    transition_maps,
    trivial_module,
    weight_decomposition,
    weight_zero_residue,
)
from ..sheaf.smith import identity
from ..sheaf.traces import expected_weight_dimension
from .base import CheckContext, CheckSuite, Outcome

suite = CheckSuite("algebraic")

DEFAULT_COHOMOLOGY_CASES = [
    [1, 0, 2], [1, 1, 2], [1, 2, 2], [1, 3, 2], [1, 2, 3], [2, 0, 2], [2, 1, 2], [2, 2, 2],
]


def _override_cases(
    cases: Sequence[Sequence[int]], genus: Optional[int], levels, orders
) -> list[tuple[int, int, int]]:
    result: list[tuple[int, int, int]] = []
    for g, n, N in cases:
        for level in levels or [n]:
            for order in orders or [N]:
                case = (int(genus or g), int(level), int(order))
                if case not in result:
                    result.append(case)
    return result


def _random_phi(ctx: CheckContext, count: int) -> list[int]:
    return [int(v) for v in ctx.rng.integers(-5, 6, size=count)]


@suite.check(
    "cohomology",
    defaults={"cases": DEFAULT_COHOMOLOGY_CASES, "genus": None, "levels": None, "orders": None},
)
def cohomology(ctx: CheckContext, cases, genus, levels, orders) -> Outcome:
    """Top cohomology, transition maps, punctured exactness and the polylog class, per ``(g, n, N)``."""

    budget = ctx.config.sheaf_budget
    assertions: dict[str, bool] = {}
    ranks = {}
    for g, n, N in _override_cases(cases, genus, levels, orders):
        key = f"{g},{n},{N}"
        module = build_log_module(g, n)
        torus = torus_cohomology(module, budget=budget)
        top = torus.group(2 * g)
        assertions[f"top-is-Z[{key}]"] = top.free_rank == 1 and not top.torsion

        for k, differential in enumerate(torus.complex.differentials):
            form = smith_normal_form(differential, check=False)
            try:
                form.verify()
            except SmithFormError:
                assertions[f"snf-d{k}[{key}]"] = False
            else:
                assertions[f"snf-d{k}[{key}]"] = True

        punctured = punctured_cohomology(module, N, budget=budget, torus=torus)
        ranks[key] = punctured.ranks()
        assertions[f"exactness[{key}]"] = all(punctured.exactness().values())
        assertions[f"connecting-is-augmentation[{key}]"] = punctured.connecting_matches_augmentation()
        if N == 1:
            assertions[f"residue-rank[{key}]"] = punctured.kernel_rank == module.rank - 1

        phi = _random_phi(ctx, len(punctured.points) - 1)
        cls = polylog_class(punctured, phi)
        assertions[f"back-substitution[{key}]"] = bool(
            (punctured.residue @ cls == stalk_data(punctured, phi)).all()
        )

        if n >= 1:
            lower_module = build_log_module(g, n - 1)
            lower = torus_cohomology(lower_module, budget=budget)
            maps = transition_maps(torus, lower)
            top_map = maps[2 * g]
            assertions[f"top-transition-iso[{key}]"] = top_map.shape == (1, 1) and abs(int(top_map[0, 0])) == 1
            assertions[f"lower-transitions-zero[{key}]"] = all(not (m != 0).any() for m in maps[: 2 * g])
            lower_punctured = punctured_cohomology(lower_module, N, budget=budget, torus=lower)
            first, second = residue_transition_square(punctured, lower_punctured)
            assertions[f"residue-square[{key}]"] = bool((first == second).all())
    return Outcome.from_assertions(assertions, punctured_ranks=ranks)


@suite.check(
    "eigenspaces",
    defaults={
        "genera": [1, 2],
        "multipliers": [2, 3, 5],
        "weight_zero_cases": [[1, 2], [1, 3], [2, 2]],
        "norm_cases": [[1, 1, 3, 2], [1, 2, 2, 3], [2, 1, 2, 3]],
    },
)
def eigenspaces(ctx: CheckContext, genera, multipliers, weight_zero_cases, norm_cases) -> Outcome:
    """Weight decomposition, the weight-0 residue isomorphism and norm compatibility."""

    budget = ctx.config.sheaf_budget
    assertions: dict[str, bool] = {}

    for g in genera:
        result = torus_cohomology(trivial_module(g), budget=budget)
        decompositions = {}
        for a in multipliers:
            for k in range(2 * g + 1):
                trace = torus_trace(result, a, k)
                expected = a ** (2 * g - k) * identity(trace.shape[0])
                assertions[f"scalar-action[g={g},a={a},k={k}]"] = bool((trace == expected).all())
            decompositions[a] = weight_decomposition(g, a)
            assertions[f"weight-dimensions[g={g},a={a}]"] = all(
                decompositions[a][r].cols == expected_weight_dimension(g, r) for r in range(2 * g + 1)
            )
        reference = decompositions[multipliers[0]]
        assertions[f"independent-of-a[g={g}]"] = all(
            same_subspace(reference[r], decompositions[a][r])
            for a in multipliers[1:]
            for r in range(2 * g + 1)
        )

    for g, N in weight_zero_cases:
        a = N + 1
        key = f"g={g},N={N}"
        punctured = punctured_cohomology(trivial_module(g), N, budget=budget)
        restricted = weight_zero_residue(punctured, a)
        expected = N ** (2 * g) - 1
        assertions[f"weight-zero-dimension[{key}]"] = restricted.cols == expected
        assertions[f"weight-zero-residue-bijective[{key}]"] = (
            restricted.rows == restricted.cols == expected and restricted.rank() == expected
        )

    for g, n, N, a in norm_cases:
        key = f"g={g},n={n},N={N},a={a}"
        if gcd(a, N) != 1:
            raise ValueError(f"norm case {key} needs a coprime to N")
        punctured = punctured_cohomology(build_log_module(g, n), N, budget=budget)
        phi = _random_phi(ctx, len(punctured.points) - 1)
        assertions[f"norm-compatibility[{key}]"] = norm_compatibility(punctured, phi, a)
        first, second = residue_trace_square(punctured, a)
        assertions[f"residue-trace-square[{key}]"] = bool((first == second).all())
        for b in multipliers:
            if b != a and gcd(b, N) == 1:
                commutator = trace_commutator(punctured, a, b)
                assertions[f"traces-commute[{key},b={b}]"] = not (commutator != 0).any()
    return Outcome.from_assertions(assertions)


__all__ = ["suite"]
