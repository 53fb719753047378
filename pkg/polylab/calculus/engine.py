"""Normalization strategy, derivation traces and equivalence of currents."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..exceptions import RewriteBudgetExceeded, TermTypeError
from .rules import RewriteContext, Rule, RuleSet, check_admissible, rules as default_rules
from .terms import SpaceSym, Sum, Term, Zero, parse_sexpr

logger = logging.getLogger(__name__)

DEFAULT_REWRITE_BUDGET = 10_000
REVERSE_SUFFIX = ":reverse"


@dataclass(frozen=True)
class TraceStep:
    rule: str
    before: Term
    after: Term
    reverse: bool = False

    @property
    def label(self) -> str:
        return self.rule + (REVERSE_SUFFIX if self.reverse else "")

    def inverted(self) -> "TraceStep":
        return TraceStep(self.rule, self.after, self.before, not self.reverse)


@dataclass(frozen=True)
class Checkpoint:
    name: str
    term: Term
    holds: bool


@dataclass
class DerivationTrace:
    """A chain of rule applications starting at ``start``."""

    start: Term
    steps: list[TraceStep] = field(default_factory=list)
    checkpoints: list[Checkpoint] = field(default_factory=list)

    @property
    def end(self) -> Term:
        return self.steps[-1].after if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, step: TraceStep) -> None:
        if step.before != self.end:
            raise ValueError("trace step does not continue the derivation")
        self.steps.append(step)

    def reversed(self) -> "DerivationTrace":
        return DerivationTrace(self.end, [step.inverted() for step in reversed(self.steps)])

    def extended(self, other: "DerivationTrace") -> "DerivationTrace":
        if other.start != self.end:
            raise ValueError("traces do not meet")
        return DerivationTrace(self.start, self.steps + other.steps, list(self.checkpoints))

    def is_connected(self) -> bool:
        current = self.start
        for step in self.steps:
            if step.before != current:
                return False
            current = step.after
        return True

    def uses_only(self, registry: RuleSet) -> bool:
        return all(step.rule in registry.names for step in self.steps)

    @property
    def all_checkpoints_hold(self) -> bool:
        return all(checkpoint.holds for checkpoint in self.checkpoints)

    def to_text(self) -> str:
        lines = [f"0\tstart\t{self.start.sexpr()}"]
        lines.extend(
            f"{index}\t{step.label}\t{step.after.sexpr()}"
            for index, step in enumerate(self.steps, start=1)
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, spaces: Mapping[str, SpaceSym]) -> "DerivationTrace":
        rows = [line.split("\t", 2) for line in text.splitlines() if line.strip()]
        if not rows or rows[0][1] != "start":
            raise ValueError("trace text must begin with a start line")
        trace = cls(parse_sexpr(rows[0][2], spaces))
        for expected, row in enumerate(rows[1:], start=1):
            if len(row) != 3 or int(row[0]) != expected:
                raise ValueError(f"malformed trace line {expected}")
            rule, reverse = row[1], False
            if rule.endswith(REVERSE_SUFFIX):
                rule, reverse = rule[: -len(REVERSE_SUFFIX)], True
            trace.append(TraceStep(rule, trace.end, parse_sexpr(row[2], spaces), reverse))
        return trace


class RewriteEngine:
    """Sweeps the registered rules bottom-up until no rule applies."""

    def __init__(self, registry: Optional[RuleSet] = None, budget: int = DEFAULT_REWRITE_BUDGET) -> None:
        if budget < 1:
            raise ValueError("rewrite budget must be positive")
        self.registry = default_rules if registry is None else registry
        self.budget = budget
        self.context = RewriteContext()

    def _sweep(self, rule: Rule, term: Term) -> Term:
        children = term.children()
        if children:
            rewritten = [self._sweep(rule, child) for child in children]
            if any(new is not old for new, old in zip(rewritten, children)):
                term = term.rebuild(rewritten)
        result = rule.apply(term, self.context)
        return term if result is None else result

    def derive(self, term: Term) -> DerivationTrace:
        """Normalize ``term``, recording one step per rule sweep that changed it."""

        check_admissible(term)
        trace = DerivationTrace(term)
        changed = True
        while changed:
            changed = False
            for rule in self.registry:
                before = trace.end
                after = self._sweep(rule, before)
                if after is before or after == before:
                    continue
                if after.space != before.space or after.bidegree != before.bidegree:
                    raise TermTypeError(
                        f"rule {rule.name} changed {before.space}{before.bidegree} "
                        f"into {after.space}{after.bidegree}"
                    )
                check_admissible(after)
                trace.append(TraceStep(rule.name, before, after))
                changed = True
                if len(trace) > self.budget:
                    raise RewriteBudgetExceeded(
                        f"normalization exceeded {self.budget} steps",
                    )
        logger.debug("normalized %s in %d steps", term.space, len(trace))
        return trace

    def normalize(self, term: Term) -> Term:
        return self.derive(term).end

    def equivalent(self, first: Term, second: Term) -> bool:
        if first.space != second.space or first.bidegree != second.bidegree:
            raise TermTypeError(
                f"cannot compare {first.space}{first.bidegree} with {second.space}{second.bidegree}"
            )
        if self.normalize(first) == self.normalize(second):
            return True
        # fallback for registries that are not confluent
        return isinstance(self.normalize(Sum(((1, first), (-1, second)))), Zero)


_default_engine: Optional[RewriteEngine] = None


def default_engine() -> RewriteEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = RewriteEngine()
    return _default_engine


def normalize(term: Term) -> Term:
    return default_engine().normalize(term)


def equivalent(first: Term, second: Term) -> bool:
    return default_engine().equivalent(first, second)


__all__ = [
    "DEFAULT_REWRITE_BUDGET",
    "TraceStep",
    "Checkpoint",
    "DerivationTrace",
    "RewriteEngine",
    "default_engine",
    "normalize",
    "equivalent",
]
