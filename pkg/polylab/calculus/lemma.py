"""The product formula for the Green current of ``A x B`` and a random term corpus.

For torsion sections ``sigma`` of ``A`` and ``tau`` of ``B``::

    (sigma x tau)^* G(A x B) - G(A x B)
        = (Id x tau)_* (sigma^* G(A) - G(A)) + (0 x Id)_* (tau^* G(B) - G(B))

:func:`verify_green_lemma` rewrites both sides to the same normal form and
checks every intermediate display of the derivation along the way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import DerivationFailure
from .engine import Checkpoint, DerivationTrace, RewriteEngine, default_engine
from .terms import (
    DDC,
    ZERO,
    Delta,
    Green,
    Label,
    Nu,
    Projection,
    Pullback,
    Pushforward,
    SectionImmersion,
    SpaceSym,
    Star,
    SubvarietyTag,
    Sum,
    Term,
    Translation,
    Wedge,
    Zero,
    difference,
    parse_label,
    pull,
    translated_green,
)

logger = logging.getLogger(__name__)

CORPUS_LABELS = ("0", "sigma", "tau", "sigma+tau")


@dataclass(frozen=True)
class ProductSetting:
    """``A``, ``B``, their product and the two torsion sections of the lemma."""

    first: SpaceSym
    second: SpaceSym
    sigma: Label
    tau: Label

    @classmethod
    def build(cls, dim_a: int, dim_b: int, sigma: str = "sigma", tau: str = "tau") -> "ProductSetting":
        if dim_a < 1 or dim_b < 1:
            raise ValueError("relative dimensions must be positive")
        return cls(SpaceSym.atomic("A", dim_a), SpaceSym.atomic("B", dim_b), parse_label(sigma), parse_label(tau))

    @property
    def product(self) -> SpaceSym:
        return SpaceSym.product(self.first, self.second)

    @property
    def spaces(self) -> dict[str, SpaceSym]:
        return {self.first.name: self.first, self.second.name: self.second}

    def q(self, index: int) -> Projection:
        return Projection(self.product, index)

    def atom(self, index: int, label: Label = ZERO) -> Term:
        """``q_i^* t_label^* G`` on the product."""

        factor = self.product.factors[index]
        return Pullback(self.q(index), translated_green(factor, label))

    def nu(self, index: int) -> Term:
        return Pullback(self.q(index), Nu(self.product.factors[index]))

    def delta(self, first: Optional[Label], second: Optional[Label]) -> Delta:
        return Delta(SubvarietyTag(self.product, (first, second)))

    @property
    def translation(self) -> Translation:
        return Translation(self.product, (self.sigma, self.tau))


def lemma_lhs(setting: ProductSetting) -> Term:
    green = Green(setting.product)
    return difference(pull(setting.translation, green), green)


def lemma_rhs(setting: ProductSetting) -> Term:
    """The final display: both differences wedged with the Dirac currents of the sections."""

    x_part = Wedge((difference(setting.atom(0, setting.sigma), setting.atom(0)), setting.delta(None, setting.tau)))
    y_part = Wedge((difference(setting.atom(1, setting.tau), setting.atom(1)), setting.delta(ZERO, None)))
    return Sum(((1, x_part), (1, y_part)))


def lemma_pushforward_form(setting: ProductSetting) -> Term:
    first, second = setting.first, setting.second
    x = difference(translated_green(first, setting.sigma), Green(first))
    y = difference(translated_green(second, setting.tau), Green(second))
    return Sum(
        (
            (1, Pushforward(SectionImmersion(setting.product, (None, setting.tau)), x)),
            (1, Pushforward(SectionImmersion(setting.product, (ZERO, None)), y)),
        )
    )


def fibre_product_form(setting: ProductSetting) -> Term:
    star = Star(setting.atom(0), setting.atom(1))
    return difference(pull(setting.translation, star), star)


def pulled_back_form(setting: ProductSetting) -> Term:
    return difference(
        Star(setting.atom(0, setting.sigma), setting.atom(1, setting.tau)),
        Star(setting.atom(0), setting.atom(1)),
    )


def star_expanded_form(setting: ProductSetting) -> Term:
    return Sum(
        (
            (1, Wedge((setting.atom(0, setting.sigma), setting.delta(None, setting.tau)))),
            (1, Wedge((setting.nu(0), setting.atom(1, setting.tau)))),
            (-1, Wedge((setting.atom(0), setting.delta(None, ZERO)))),
            (-1, Wedge((setting.nu(0), setting.atom(1)))),
        )
    )


def first_display(setting: ProductSetting) -> Term:
    """The combination of the star expansion and the final display that vanishes."""

    a = setting.atom(0)
    return Sum(
        (
            (1, Wedge((a, difference(setting.delta(None, ZERO), setting.delta(None, setting.tau))))),
            (
                1,
                Wedge(
                    (
                        difference(setting.atom(1, setting.tau), setting.atom(1)),
                        difference(setting.delta(ZERO, None), setting.nu(0)),
                    )
                ),
            ),
        )
    )


def verify_green_lemma(
    dim_a: int,
    dim_b: int,
    sigma: str = "sigma",
    tau: str = "tau",
    engine: Optional[RewriteEngine] = None,
) -> DerivationTrace:
    """Derive the product formula; raise :class:`DerivationFailure` if it does not close."""

    engine = engine or default_engine()
    setting = ProductSetting.build(dim_a, dim_b, sigma, tau)
    lhs, rhs = lemma_lhs(setting), lemma_rhs(setting)
    lhs_trace = engine.derive(lhs)
    rhs_trace = engine.derive(rhs)
    if lhs_trace.end != rhs_trace.end:
        raise DerivationFailure(
            f"product formula does not close for dimensions ({dim_a}, {dim_b})",
            lhs_normal=lhs_trace.end,
            rhs_normal=rhs_trace.end,
        )

    trace = lhs_trace.extended(rhs_trace.reversed())
    displays = (
        ("fibre-product", fibre_product_form(setting)),
        ("pullback", pulled_back_form(setting)),
        ("star-expansion", star_expanded_form(setting)),
        ("final-display", rhs),
        ("pushforward-statement", lemma_pushforward_form(setting)),
    )
    for name, display in displays:
        trace.checkpoints.append(Checkpoint(name, display, engine.equivalent(display, lhs)))
    vanishing = first_display(setting)
    trace.checkpoints.append(
        Checkpoint("first-display-vanishes", vanishing, isinstance(engine.normalize(vanishing), Zero))
    )

    failed = [c.name for c in trace.checkpoints if not c.holds]
    if failed:
        raise DerivationFailure(
            f"checkpoints {', '.join(failed)} do not match the derivation",
            lhs_normal=lhs_trace.end,
            rhs_normal=rhs_trace.end,
        )
    logger.info(
        "product formula verified for dimensions (%d, %d) in %d steps", dim_a, dim_b, len(trace)
    )
    return trace


# --------------------------------------------------------------------------- corpus


def _corpus_generators(setting: ProductSetting, rng: np.random.Generator) -> list[Term]:
    def label() -> Label:
        return parse_label(CORPUS_LABELS[int(rng.integers(len(CORPUS_LABELS)))])

    green = Green(setting.product)
    return [
        Wedge((setting.atom(0, label()), setting.delta(None, label()))),
        Wedge((setting.delta(label(), None), setting.atom(1, label()))),
        Wedge((setting.atom(0, label()), setting.nu(1))),
        Wedge((setting.nu(0), setting.atom(1, label()))),
        Wedge((DDC(setting.atom(0, label())), setting.atom(1, label()))),
        Star(setting.atom(0, label()), setting.atom(1, label())),
        pull(Translation(setting.product, (label(), label())), green),
        green,
        Pushforward(
            SectionImmersion(setting.product, (None, label())),
            difference(translated_green(setting.first, label()), Green(setting.first)),
        ),
    ]


def random_corpus(seed: int, size: int, dim_a: int = 1, dim_b: int = 1) -> list[Term]:
    """Reproducible admissible terms of the bidegree of ``G(A x B)``."""

    if size < 0:
        raise ValueError("corpus size must be non-negative")
    setting = ProductSetting.build(dim_a, dim_b)
    rng = np.random.default_rng(seed)
    coefficients = (-2, -1, 1, 2)
    corpus: list[Term] = []
    for _ in range(size):
        generators = _corpus_generators(setting, rng)
        count = int(rng.integers(1, 5))
        picks = rng.choice(len(generators), size=count, replace=True)
        corpus.append(
            Sum(tuple((coefficients[int(rng.integers(4))], generators[int(i)]) for i in picks))
        )
    return corpus


__all__ = [
    "ProductSetting",
    "lemma_lhs",
    "lemma_rhs",
    "lemma_pushforward_form",
    "fibre_product_form",
    "pulled_back_form",
    "star_expanded_form",
    "first_display",
    "verify_green_lemma",
    "random_corpus",
    "CORPUS_LABELS",
]
