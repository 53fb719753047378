"""Rewrite rules of the current calculus.

Rules are registered on a :class:`RuleSet` in the order the engine sweeps
them. A rule receives one node whose children are already rewritten and
returns the replacement, or ``None`` when it does not apply.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from ..exceptions import AdmissibilityError
from .terms import (
    DDC,
    Delta,
    Green,
    Nu,
    Projection,
    Pullback,
    Pushforward,
    Star,
    SubvarietyTag,
    Sum,
    Term,
    Translation,
    Wedge,
    Zero,
    atom_key,
    divisor_of,
    green_chain,
    green_lift,
    is_canonical_atom,
    nu_form_of,
    pull,
)

logger = logging.getLogger(__name__)


@dataclass
class RewriteContext:
    """Mutable state shared by the rules during one normalization."""

    ibp_log: list[tuple[str, str, bool]] = field(default_factory=list)


RuleFunc = Callable[[Term, RewriteContext], Optional[Term]]


@dataclass(frozen=True)
class Rule:
    name: str
    description: str
    apply: RuleFunc


class RuleSet:
    """Ordered registry of rules, filled with the :meth:`rule` decorator."""

    def __init__(self, name: str) -> None:
        self.name = name
        self._rules: list[Rule] = []

    def rule(self, name: str, description: str = "") -> Callable[[RuleFunc], RuleFunc]:
        def decorator(func: RuleFunc) -> RuleFunc:
            if name in self.names:
                raise ValueError(f"rule {name!r} registered twice")
            self._rules.append(Rule(name, description or (func.__doc__ or "").strip(), func))
            return func

        return decorator

    @property
    def names(self) -> list[str]:
        return [rule.name for rule in self._rules]

    def get(self, name: str) -> Rule:
        for rule in self._rules:
            if rule.name == name:
                return rule
        raise KeyError(name)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)


rules = RuleSet("current-calculus")


def _zero(space, bidegree) -> Zero:
    return Zero(space, bidegree)


def _distribute(term: Term, build: Callable[[Term], Term]) -> Sum:
    assert isinstance(term, Sum)
    return Sum(tuple((c, build(t)) for c, t in term.terms))


@rules.rule("linearity", "operators distribute over sums and annihilate zero")
def _linearity(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Pullback):
        if isinstance(node.child, Zero):
            return _zero(node.space, node.bidegree)
        if isinstance(node.child, Sum):
            return _distribute(node.child, lambda t: Pullback(node.map, t))
    elif isinstance(node, Pushforward):
        if isinstance(node.child, Zero):
            return _zero(node.space, node.bidegree)
        if isinstance(node.child, Sum):
            return _distribute(node.child, lambda t: Pushforward(node.immersion, t))
    elif isinstance(node, DDC):
        if isinstance(node.child, (Zero, Nu, Delta, DDC)):
            return _zero(node.space, node.bidegree)
        if isinstance(node.child, Sum):
            return _distribute(node.child, DDC)
    elif isinstance(node, Star):
        if isinstance(node.left, Zero) or isinstance(node.right, Zero):
            return _zero(node.space, node.bidegree)
        if isinstance(node.left, Sum):
            return _distribute(node.left, lambda t: Star(t, node.right))
        if isinstance(node.right, Sum):
            return _distribute(node.right, lambda t: Star(node.left, t))
    elif isinstance(node, Wedge):
        if any(isinstance(f, Zero) for f in node.factors):
            return _zero(node.space, node.bidegree)
        for index, factor in enumerate(node.factors):
            if isinstance(factor, Sum):
                head, tail = node.factors[:index], node.factors[index + 1:]
                return _distribute(factor, lambda t: Wedge(head + (t,) + tail))
    return None


@rules.rule("fibre-product", "G(A x B) = q_A^*G(A) * q_B^*G(B)")
def _fibre_product(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Green) and len(node.space.factors) == 2:
        left, right = (
            Pullback(Projection(node.space, i), Green(node.space.factors[i])) for i in range(2)
        )
        return Star(left, right)
    return None


@rules.rule("pushforward-section", "(Id x tau)_* x = q_A^*x ^ delta(A x tau)")
def _pushforward_section(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Pushforward) and not isinstance(node.child, (Sum, Zero)):
        immersion = node.immersion
        lifted = Pullback(Projection(immersion.target, immersion.free_index), node.child)
        return Wedge((lifted, Delta(immersion.image)))
    return None


@rules.rule("pullback", "pullbacks commute with products, dd^c and compose")
def _pullback(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, DDC) and isinstance(node.child, Pullback):
        return Pullback(node.child.map, DDC(node.child.child))
    if not isinstance(node, Pullback):
        return None
    map_, child = node.map, node.child
    if isinstance(map_, Translation) and map_.is_identity:
        return child
    if isinstance(child, Wedge):
        return Wedge(tuple(Pullback(map_, f) for f in child.factors))
    if isinstance(child, Star):
        return Star(Pullback(map_, child.left), Pullback(map_, child.right))
    if isinstance(child, Delta):
        return Delta(map_.preimage(child.tag))
    if isinstance(map_, Translation) and isinstance(child, Pullback):
        inner = child.map
        if isinstance(inner, Projection):
            return Pullback(inner, pull(map_.component(inner.index), child.child))
        if isinstance(inner, Translation):
            return pull(map_.compose(inner), child.child)
    return None


@rules.rule("nu-invariance", "t^*nu = nu for every translation t")
def _nu_invariance(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Pullback) and isinstance(node.map, Translation) and isinstance(node.child, Nu):
        return node.child
    return None


@rules.rule("star-expansion", "g1 * g2 = g1 ^ delta_2 + nu_1 ^ g2")
def _star_expansion(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Star) and green_chain(node.left) and green_chain(node.right):
        return Sum(
            (
                (1, Wedge((node.left, divisor_of(node.right)))),
                (1, Wedge((nu_form_of(node.left), node.right))),
            )
        )
    return None


@rules.rule("green-equation", "dd^c G(X) = delta_0 - nu")
def _green_equation(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, DDC) and isinstance(node.child, Green):
        space = node.child.space
        return Sum(((1, Delta(SubvarietyTag.zero_section(space))), (-1, Nu(space))))
    return None


@rules.rule(
    "integration-by-parts",
    "eta ^ delta_omega = eta ^ nu_omega + dd^c eta ^ omega when omega precedes eta",
)
def _integration_by_parts(node: Term, context: RewriteContext) -> Optional[Term]:
    if not isinstance(node, Wedge):
        return None
    factors = node.factors
    for i, delta in enumerate(factors):
        if not isinstance(delta, Delta):
            continue
        omega = green_lift(delta.tag)
        if omega is None:
            continue
        omega_key = atom_key(omega)
        for j, eta in enumerate(factors):
            if j == i or eta == omega or not is_canonical_atom(eta):
                continue
            if not omega_key < atom_key(eta):
                continue
            disjoint = eta.wavefront.isdisjoint(omega.wavefront)
            context.ibp_log.append((eta.sexpr(), omega.sexpr(), disjoint))
            if not disjoint:
                continue
            rest = tuple(f for k, f in enumerate(factors) if k not in (i, j))
            return Sum(
                (
                    (1, Wedge(rest + (eta, nu_form_of(omega)))),
                    (1, Wedge(rest + (DDC(eta), omega))),
                )
            )
    return None


def _graded_sort(factors: tuple[Term, ...]) -> tuple[tuple[Term, ...], int]:
    """Insertion sort by :func:`atom_key`, tracking the Koszul sign."""

    items = list(factors)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and atom_key(items[j]) < atom_key(items[j - 1]):
            if sum(items[j].bidegree) % 2 and sum(items[j - 1].bidegree) % 2:
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    return tuple(items), sign


def _collect_sum(node: Sum) -> Term:
    coefficients: dict[Term, int] = {}

    def visit(term: Term, scale: int) -> None:
        if isinstance(term, Sum):
            for c, t in term.terms:
                visit(t, scale * c)
        elif not isinstance(term, Zero) and scale:
            coefficients[term] = coefficients.get(term, 0) + scale

    visit(node, 1)
    kept = sorted(
        ((c, t) for t, c in coefficients.items() if c),
        key=lambda pair: pair[1].sexpr(),
    )
    if not kept:
        return Zero(node.space, node.bidegree)
    if len(kept) == 1 and kept[0][0] == 1:
        return kept[0][1]
    return Sum(tuple(kept))


def _collect_wedge(node: Wedge) -> Term:
    flat: list[Term] = []
    for factor in node.factors:
        flat.extend(factor.factors if isinstance(factor, Wedge) else (factor,))
    if any(isinstance(f, Zero) for f in flat) or node.bidegree[0] > node.space.relative_dimension:
        return Zero(node.space, node.bidegree)
    if len(flat) == 1:
        return flat[0]
    ordered, sign = _graded_sort(tuple(flat))
    wedge = Wedge(ordered)
    return wedge if sign == 1 else Sum(((-1, wedge),))


@rules.rule("collect", "flatten, order wedge factors and combine like terms")
def _collect(node: Term, context: RewriteContext) -> Optional[Term]:
    if isinstance(node, Sum):
        result = _collect_sum(node)
    elif isinstance(node, Wedge):
        result = _collect_wedge(node)
    else:
        return None
    return None if result == node else result


def register_rules(names: Optional[Iterable[str]] = None, name: str = "current-calculus") -> RuleSet:
    """A fresh registry holding the named rules (all by default) in sweep order."""

    wanted = list(rules.names) if names is None else list(names)
    unknown = sorted(set(wanted) - set(rules.names))
    if unknown:
        raise ValueError(f"unknown rules: {', '.join(unknown)}")
    registry = RuleSet(name)
    for rule in rules:
        if rule.name in wanted:
            registry.rule(rule.name, rule.description)(rule.apply)
    return registry


def check_admissible(term: Term) -> None:
    """Raise :class:`AdmissibilityError` if some product has clashing wavefronts."""

    for node in term.walk():
        if isinstance(node, Wedge):
            factors = node.factors
        elif isinstance(node, Star):
            factors = (node.left, node.right)
        else:
            continue
        for i, first in enumerate(factors):
            for second in factors[i + 1:]:
                clash = first.wavefront & second.wavefront
                if clash:
                    raise AdmissibilityError(
                        f"wavefronts of {first} and {second} meet", tags=sorted(t.text() for t in clash)
                    )


__all__ = ["Rule", "RuleSet", "RewriteContext", "rules", "register_rules", "check_admissible"]
