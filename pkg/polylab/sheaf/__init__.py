"""Exact linear algebra for the logarithm sheaf on real tori."""

from __future__ import annotations

from .cohomology import (
    DEFAULT_SHEAF_BUDGET,
    CohomologyGroup,
    CohomologyResult,
    torus_cohomology,
    transition_maps,
)
from .koszul import CochainComplex, koszul_complex
from .log_module import LogModule, build_log_module, graded_rank, trivial_module
from .punctured import (
    PuncturedCohomology,
    polylog_class,
    punctured_cohomology,
    residue_transition_square,
    stalk_data,
    torsion_indices,
)
from .smith import SmithForm, integer_kernel, smith_normal_form, solve_integer
from .traces import (
    norm_compatibility,
    punctured_trace,
    residue_trace_square,
    same_subspace,
    stalk_trace,
    torus_trace,
    trace_commutator,
    trace_operator,
    weight_decomposition,
    weight_eigenspace,
    weight_zero_residue,
)

__all__ = [
    "DEFAULT_SHEAF_BUDGET",
    "CohomologyGroup",
    "CohomologyResult",
    "torus_cohomology",
    "transition_maps",
    "CochainComplex",
    "koszul_complex",
    "LogModule",
    "build_log_module",
    "graded_rank",
    "trivial_module",
    "PuncturedCohomology",
    "polylog_class",
    "punctured_cohomology",
    "residue_transition_square",
    "stalk_data",
    "torsion_indices",
    "SmithForm",
    "integer_kernel",
    "smith_normal_form",
    "solve_integer",
    "norm_compatibility",
    "punctured_trace",
    "residue_trace_square",
    "same_subspace",
    "stalk_trace",
    "torus_trace",
    "trace_commutator",
    "trace_operator",
    "weight_decomposition",
    "weight_eigenspace",
    "weight_zero_residue",
]
