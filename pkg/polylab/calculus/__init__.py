"""Symbolic calculus of Green currents, Dirac currents and star products."""

from __future__ import annotations

from .engine import (
    DEFAULT_REWRITE_BUDGET,
    Checkpoint,
    DerivationTrace,
    RewriteEngine,
    TraceStep,
    equivalent,
    normalize,
)
from .lemma import ProductSetting, first_display, lemma_lhs, lemma_rhs, random_corpus, verify_green_lemma
from .rules import RuleSet, check_admissible, register_rules, rules
from .terms import (
    DDC,
    Delta,
    Green,
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
    make_label,
    parse_sexpr,
)

__all__ = [
    "DEFAULT_REWRITE_BUDGET",
    "Checkpoint",
    "DerivationTrace",
    "RewriteEngine",
    "TraceStep",
    "equivalent",
    "normalize",
    "ProductSetting",
    "first_display",
    "lemma_lhs",
    "lemma_rhs",
    "random_corpus",
    "verify_green_lemma",
    "RuleSet",
    "check_admissible",
    "register_rules",
    "rules",
    "DDC",
    "Delta",
    "Green",
    "Nu",
    "Projection",
    "Pullback",
    "Pushforward",
    "SectionImmersion",
    "SpaceSym",
    "Star",
    "SubvarietyTag",
    "Sum",
    "Term",
    "Translation",
    "Wedge",
    "Zero",
    "make_label",
    "parse_sexpr",
]
