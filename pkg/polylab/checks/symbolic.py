"""Checks of the current calculus: the product formula and the engine's axioms."""

from __future__ import annotations

import itertools
from typing import Sequence

from ..calculus import random_corpus, rules, verify_green_lemma
from .base import CheckContext, CheckSuite, Outcome

suite = CheckSuite("symbolic")


@suite.check(
    "product-formula",
    defaults={"dims": [[1, 1], [2, 1]], "corpus": 200, "max_trace_length": 40},
)
def product_formula(
    ctx: CheckContext, dims: Sequence[Sequence[int]], corpus: int, max_trace_length: int
) -> Outcome:
    """Derive the product formula and test normalization on a seeded corpus."""

    engine = ctx.engine
    assertions: dict[str, bool] = {}
    lengths = {}
    for dim_a, dim_b in dims:
        trace = verify_green_lemma(int(dim_a), int(dim_b), engine=engine)
        key = f"{dim_a}x{dim_b}"
        lengths[key] = len(trace)
        assertions[f"trace-connected[{key}]"] = trace.is_connected()
        assertions[f"registered-rules[{key}]"] = trace.uses_only(rules)
        assertions[f"checkpoints[{key}]"] = trace.all_checkpoints_hold
        assertions[f"trace-length[{key}]"] = len(trace) <= max_trace_length

    terms = random_corpus(ctx.seed % 2**32, corpus)
    normals = [engine.normalize(term) for term in terms]
    assertions["idempotence"] = all(engine.normalize(n) == n for n in normals)
    assertions["reflexivity"] = all(engine.equivalent(t, t) for t in terms)
    pairs = list(zip(terms, terms[1:]))
    assertions["symmetry"] = all(engine.equivalent(a, b) == engine.equivalent(b, a) for a, b in pairs)
    transitive = True
    for a, b, c in zip(terms, terms[1:], terms[2:]):
        if engine.equivalent(a, b) and engine.equivalent(b, c):
            transitive = transitive and engine.equivalent(a, c)
    for a, b in itertools.combinations(range(len(terms)), 2):
        if normals[a] == normals[b]:
            transitive = transitive and engine.equivalent(terms[a], terms[b])
    assertions["transitivity"] = transitive
    return Outcome.from_assertions(assertions, trace_lengths=lengths)


__all__ = ["suite"]
