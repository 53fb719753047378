"""Bidegree-typed terms for formal currents on products of abelian varieties.

Terms are immutable dataclasses. Every node knows its ambient space, its
bidegree ``(p, q)`` and a wavefront tag set: the subvarieties along which the
current is singular. Wedge products are admissible only when the tag sets of
their factors are disjoint.

Torsion sections are named by labels: sorted tuples of section names, where
the empty tuple is the zero section and labels add as multisets, so that the
pullback of ``delta_0`` along the translation by ``tau`` is ``delta_tau``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence, Union

from ..exceptions import TermTypeError

Label = tuple[str, ...]
ZERO: Label = ()

_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def make_label(*names: str) -> Label:
    for name in names:
        if name != "0" and not _NAME.match(name):
            raise ValueError(f"invalid section name {name!r}")
    return tuple(sorted(name for name in names if name != "0"))


def add_labels(first: Label, second: Label) -> Label:
    return tuple(sorted(first + second))


def label_text(label: Label) -> str:
    return "+".join(label) if label else "0"


def parse_label(text: str) -> Label:
    return make_label(*text.split("+"))


# --------------------------------------------------------------------------- spaces


@dataclass(frozen=True)
class SpaceSym:
    """An abelian variety of relative dimension ``relative_dimension``.

    Products carry their ordered ``factors``; atomic spaces have none.
    """

    name: str
    relative_dimension: int
    factors: tuple["SpaceSym", ...] = ()

    def __post_init__(self) -> None:
        if self.relative_dimension < 1:
            raise ValueError("relative dimension must be positive")
        if self.factors:
            if any(factor.factors for factor in self.factors):
                raise ValueError("factors of a product must be atomic")
            if sum(f.relative_dimension for f in self.factors) != self.relative_dimension:
                raise ValueError("dimension of a product must be the sum of its factors")
        elif not _NAME.match(self.name):
            raise ValueError(f"invalid space name {self.name!r}")

    @classmethod
    def atomic(cls, name: str, dimension: int) -> "SpaceSym":
        return cls(name, dimension)

    @classmethod
    def product(cls, *factors: "SpaceSym") -> "SpaceSym":
        if len(factors) < 2:
            raise ValueError("a product needs at least two factors")
        return cls(
            "*".join(f.name for f in factors),
            sum(f.relative_dimension for f in factors),
            tuple(factors),
        )

    @property
    def components(self) -> tuple["SpaceSym", ...]:
        return self.factors or (self,)

    @property
    def is_product(self) -> bool:
        return bool(self.factors)

    def __str__(self) -> str:
        return self.name


Point = Optional[Label]


def _point_text(point: Point) -> str:
    return "_" if point is None else label_text(point)


@dataclass(frozen=True)
class SubvarietyTag:
    """``X_1 x ... x X_k`` with some factors replaced by torsion points.

    ``points[i]`` is ``None`` when the i-th factor is kept whole.
    """

    space: SpaceSym
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.space.components):
            raise TermTypeError(f"tag on {self.space} needs {len(self.space.components)} entries")
        if all(point is None for point in self.points):
            raise TermTypeError("a subvariety tag must fix at least one factor")

    @classmethod
    def zero_section(cls, space: SpaceSym) -> "SubvarietyTag":
        return cls(space, tuple(ZERO for _ in space.components))

    @property
    def codimension(self) -> int:
        return sum(
            c.relative_dimension
            for c, point in zip(self.space.components, self.points)
            if point is not None
        )

    def text(self) -> str:
        return " ".join(_point_text(point) for point in self.points)


# --------------------------------------------------------------------------- maps


@dataclass(frozen=True)
class Projection:
    """``q_i``: the projection of a product onto its ``index``-th factor."""

    source: SpaceSym
    index: int

    def __post_init__(self) -> None:
        if not self.source.is_product or not 0 <= self.index < len(self.source.factors):
            raise TermTypeError(f"no factor {self.index} in {self.source}")

    @property
    def target(self) -> SpaceSym:
        return self.source.factors[self.index]

    def preimage(self, tag: SubvarietyTag) -> SubvarietyTag:
        points: list[Point] = [None] * len(self.source.factors)
        points[self.index] = tag.points[0]
        return SubvarietyTag(self.source, tuple(points))

    def sexpr(self) -> str:
        return f"(q {self.source} {self.index})"


@dataclass(frozen=True)
class Translation:
    """Translation by a torsion section on each component."""

    space: SpaceSym
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.space.components):
            raise TermTypeError(f"translation on {self.space} needs {len(self.space.components)} labels")

    @property
    def source(self) -> SpaceSym:
        return self.space

    @property
    def target(self) -> SpaceSym:
        return self.space

    @property
    def is_identity(self) -> bool:
        return all(label == ZERO for label in self.labels)

    def component(self, index: int) -> "Translation":
        factor = self.space.components[index]
        return Translation(factor, (self.labels[index],))

    def compose(self, inner: "Translation") -> "Translation":
        return Translation(
            self.space, tuple(add_labels(a, b) for a, b in zip(self.labels, inner.labels))
        )

    def preimage(self, tag: SubvarietyTag) -> SubvarietyTag:
        return SubvarietyTag(
            self.space,
            tuple(
                None if point is None else add_labels(point, label)
                for point, label in zip(tag.points, self.labels)
            ),
        )

    def sexpr(self) -> str:
        labels = " ".join(label_text(label) for label in self.labels)
        return f"(t {self.space} {labels})"


@dataclass(frozen=True)
class SectionImmersion:
    """``Id x tau`` style immersion of one factor into a product."""

    target: SpaceSym
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.target.is_product or len(self.points) != len(self.target.factors):
            raise TermTypeError(f"immersion into {self.target} needs one entry per factor")
        if sum(point is None for point in self.points) != 1:
            raise TermTypeError("an immersion keeps exactly one factor")

    @property
    def free_index(self) -> int:
        return self.points.index(None)

    @property
    def source(self) -> SpaceSym:
        return self.target.factors[self.free_index]

    @property
    def codimension(self) -> int:
        return self.target.relative_dimension - self.source.relative_dimension

    @property
    def image(self) -> SubvarietyTag:
        return SubvarietyTag(self.target, self.points)

    def embed(self, tag: SubvarietyTag) -> SubvarietyTag:
        points = list(self.points)
        points[self.free_index] = tag.points[0]
        return SubvarietyTag(self.target, tuple(points))

    def sexpr(self) -> str:
        return f"(i {self.target} {' '.join(_point_text(p) for p in self.points)})"


PullbackMap = Union[Projection, Translation]


# --------------------------------------------------------------------------- terms


Bidegree = tuple[int, int]


def _shift(bidegree: Bidegree, amount: int) -> Bidegree:
    return bidegree[0] + amount, bidegree[1] + amount


class Term:
    """Common interface of all current terms."""

    space: SpaceSym

    @property
    def bidegree(self) -> Bidegree:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset()

    def children(self) -> tuple["Term", ...]:
        return ()

    def rebuild(self, children: Sequence["Term"]) -> "Term":
        return self

    def sexpr(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def __str__(self) -> str:
        return self.sexpr()

    def walk(self) -> Iterator["Term"]:
        yield self
        for child in self.children():
            yield from child.walk()


@dataclass(frozen=True)
class Green(Term):
    """The canonical Green current of ``space``, singular along the zero section."""

    space: SpaceSym

    @property
    def bidegree(self) -> Bidegree:
        d = self.space.relative_dimension
        return d - 1, d - 1

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset({SubvarietyTag.zero_section(self.space)})

    def sexpr(self) -> str:
        return f"(G {self.space})"


@dataclass(frozen=True)
class Nu(Term):
    """The smooth translation-invariant form of top degree on the fibres."""

    space: SpaceSym

    @property
    def bidegree(self) -> Bidegree:
        d = self.space.relative_dimension
        return d, d

    def sexpr(self) -> str:
        return f"(nu {self.space})"


@dataclass(frozen=True)
class Delta(Term):
    """Dirac current of a subvariety."""

    tag: SubvarietyTag

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.tag.space

    @property
    def bidegree(self) -> Bidegree:
        c = self.tag.codimension
        return c, c

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset({self.tag})

    def sexpr(self) -> str:
        return f"(delta {self.tag.space} {self.tag.text()})"


@dataclass(frozen=True)
class Pullback(Term):
    map: PullbackMap
    child: Term

    def __post_init__(self) -> None:
        if self.child.space != self.map.target:
            raise TermTypeError(
                f"cannot pull back a current on {self.child.space} along a map to {self.map.target}"
            )

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.map.source

    @property
    def bidegree(self) -> Bidegree:
        return self.child.bidegree

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset(self.map.preimage(tag) for tag in self.child.wavefront)

    def children(self) -> tuple[Term, ...]:
        return (self.child,)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Pullback(self.map, children[0])

    def sexpr(self) -> str:
        return f"(pull {self.map.sexpr()} {self.child.sexpr()})"


@dataclass(frozen=True)
class Pushforward(Term):
    immersion: SectionImmersion
    child: Term

    def __post_init__(self) -> None:
        if self.child.space != self.immersion.source:
            raise TermTypeError(
                f"cannot push forward a current on {self.child.space} along an immersion of "
                f"{self.immersion.source}"
            )

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.immersion.target

    @property
    def bidegree(self) -> Bidegree:
        return _shift(self.child.bidegree, self.immersion.codimension)

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset({self.immersion.image}) | frozenset(
            self.immersion.embed(tag) for tag in self.child.wavefront
        )

    def children(self) -> tuple[Term, ...]:
        return (self.child,)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Pushforward(self.immersion, children[0])

    def sexpr(self) -> str:
        return f"(push {self.immersion.sexpr()} {self.child.sexpr()})"


def _common_space(terms: Sequence[Term], what: str) -> SpaceSym:
    if not terms:
        raise TermTypeError(f"{what} needs at least one term")
    space = terms[0].space
    for term in terms[1:]:
        if term.space != space:
            raise TermTypeError(f"{what} mixes currents on {space} and {term.space}")
    return space


@dataclass(frozen=True)
class Wedge(Term):
    factors: tuple[Term, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        _common_space(self.factors, "wedge")

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.factors[0].space

    @property
    def bidegree(self) -> Bidegree:
        return (
            sum(f.bidegree[0] for f in self.factors),
            sum(f.bidegree[1] for f in self.factors),
        )

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset().union(*(f.wavefront for f in self.factors))

    def children(self) -> tuple[Term, ...]:
        return self.factors

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Wedge(tuple(children))

    def sexpr(self) -> str:
        return f"(wedge {' '.join(f.sexpr() for f in self.factors)})"


@dataclass(frozen=True)
class Star(Term):
    """Star product of two Green currents."""

    left: Term
    right: Term

    def __post_init__(self) -> None:
        _common_space((self.left, self.right), "star product")

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.left.space

    @property
    def bidegree(self) -> Bidegree:
        return _shift(self.left.bidegree, self.right.bidegree[0] + 1)

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return self.left.wavefront | self.right.wavefront

    def children(self) -> tuple[Term, ...]:
        return self.left, self.right

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Star(children[0], children[1])

    def sexpr(self) -> str:
        return f"(star {self.left.sexpr()} {self.right.sexpr()})"


@dataclass(frozen=True)
class DDC(Term):
    child: Term

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.child.space

    @property
    def bidegree(self) -> Bidegree:
        return _shift(self.child.bidegree, 1)

    @property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return self.child.wavefront

    def children(self) -> tuple[Term, ...]:
        return (self.child,)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return DDC(children[0])

    def sexpr(self) -> str:
        return f"(ddc {self.child.sexpr()})"


@dataclass(frozen=True)
class Sum(Term):
    """Integer linear combination of terms of equal space and bidegree."""

    terms: tuple[tuple[int, Term], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple((int(c), t) for c, t in self.terms))
        members = [term for _, term in self.terms]
        _common_space(members, "sum")
        bidegree = members[0].bidegree
        for term in members[1:]:
            if term.bidegree != bidegree:
                raise TermTypeError(f"sum mixes bidegrees {bidegree} and {term.bidegree}")

    @property
    def space(self) -> SpaceSym:  # type: ignore[override]
        return self.terms[0][1].space

    @property
    def bidegree(self) -> Bidegree:
        return self.terms[0][1].bidegree

    @cached_property
    def wavefront(self) -> frozenset[SubvarietyTag]:
        return frozenset().union(*(t.wavefront for _, t in self.terms))

    def children(self) -> tuple[Term, ...]:
        return tuple(term for _, term in self.terms)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Sum(tuple((c, t) for (c, _), t in zip(self.terms, children)))

    def sexpr(self) -> str:
        return "(sum " + " ".join(f"({c} {t.sexpr()})" for c, t in self.terms) + ")"


@dataclass(frozen=True)
class Zero(Term):
    space: SpaceSym
    degree: Bidegree = field(default=(0, 0))

    @property
    def bidegree(self) -> Bidegree:
        return self.degree

    def sexpr(self) -> str:
        return f"(zero {self.space} {self.degree[0]} {self.degree[1]})"


def zero_like(term: Term) -> Zero:
    return Zero(term.space, term.bidegree)


def difference(first: Term, second: Term) -> Sum:
    return Sum(((1, first), (-1, second)))


def combination(*pairs: tuple[int, Term]) -> Sum:
    return Sum(tuple(pairs))


def pull(map_: PullbackMap, term: Term) -> Term:
    """Pullback that skips identity translations."""

    if isinstance(map_, Translation) and map_.is_identity:
        return term
    return Pullback(map_, term)


# --------------------------------------------------------------------------- atoms


def green_chain(term: Term) -> Optional[tuple[tuple[PullbackMap, ...], Green]]:
    """Decompose ``f_1^* ... f_k^* G(X)`` into its maps (outermost first) and base."""

    maps: list[PullbackMap] = []
    while isinstance(term, Pullback):
        maps.append(term.map)
        term = term.child
    if isinstance(term, Green):
        return tuple(maps), term
    return None


def apply_chain(maps: Sequence[PullbackMap], base: Term) -> Term:
    for map_ in reversed(maps):
        base = Pullback(map_, base)
    return base


def divisor_of(green_term: Term) -> Term:
    chain = green_chain(green_term)
    if chain is None:
        raise TermTypeError(f"{green_term} is not a pulled-back Green current")
    maps, base = chain
    return apply_chain(maps, Delta(SubvarietyTag.zero_section(base.space)))


def nu_form_of(green_term: Term) -> Term:
    chain = green_chain(green_term)
    if chain is None:
        raise TermTypeError(f"{green_term} is not a pulled-back Green current")
    maps, base = chain
    return apply_chain(maps, Nu(base.space))


def is_canonical_atom(term: Term) -> bool:
    """``G(X)``, ``t^*G(X)``, ``q^*G(X)`` or ``q^* t^*G(X)`` with ``X`` atomic."""

    if isinstance(term, Pullback) and isinstance(term.map, Projection):
        term = term.child
    if isinstance(term, Pullback) and isinstance(term.map, Translation):
        if term.map.is_identity:
            return False
        term = term.child
    return isinstance(term, Green) and not term.space.is_product


def translated_green(space: SpaceSym, label: Label) -> Term:
    return pull(Translation(space, (label,)), Green(space))


def green_lift(tag: SubvarietyTag) -> Optional[Term]:
    """The canonical atom whose divisor is the Dirac current of ``tag``, if one exists."""

    fixed = [i for i, point in enumerate(tag.points) if point is not None]
    if len(fixed) != 1:
        return None
    index = fixed[0]
    factor = tag.space.components[index]
    atom = translated_green(factor, tag.points[index])
    if tag.space.is_product:
        atom = Pullback(Projection(tag.space, index), atom)
    return atom


_KIND_RANK = {Green: 0, Nu: 1, Delta: 2}


def atom_key(term: Term) -> tuple[str, int, str]:
    """Total order on wedge factors: (space name, kind of the base node, S-expression)."""

    base = term
    while isinstance(base, Pullback):
        base = base.child
    return term.space.name, _KIND_RANK.get(type(base), 9), term.sexpr()


# --------------------------------------------------------------------------- parser


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def _read(tokens: list[str], position: int):
    token = tokens[position]
    if token == "(":
        items = []
        position += 1
        while tokens[position] != ")":
            item, position = _read(tokens, position)
            items.append(item)
        return items, position + 1
    if token == ")":
        raise ValueError("unexpected ')'")
    return token, position + 1


def resolve_space(name: str, spaces: Mapping[str, SpaceSym]) -> SpaceSym:
    try:
        if "*" in name:
            return SpaceSym.product(*(spaces[part] for part in name.split("*")))
        return spaces[name]
    except KeyError as exc:
        raise ValueError(f"unknown space {exc.args[0]!r}") from None


def _point(token: str) -> Point:
    return None if token == "_" else parse_label(token)


def _build(node, spaces: Mapping[str, SpaceSym]):
    if not isinstance(node, list) or not node:
        raise ValueError(f"expected a term, got {node!r}")
    head, *args = node
    if head == "G":
        return Green(resolve_space(args[0], spaces))
    if head == "nu":
        return Nu(resolve_space(args[0], spaces))
    if head == "delta":
        space = resolve_space(args[0], spaces)
        return Delta(SubvarietyTag(space, tuple(_point(a) for a in args[1:])))
    if head == "zero":
        return Zero(resolve_space(args[0], spaces), (int(args[1]), int(args[2])))
    if head == "pull":
        return Pullback(_build_map(args[0], spaces), _build(args[1], spaces))
    if head == "push":
        spec = args[0]
        if spec[0] != "i":
            raise ValueError(f"expected an immersion, got {spec!r}")
        immersion = SectionImmersion(resolve_space(spec[1], spaces), tuple(_point(a) for a in spec[2:]))
        return Pushforward(immersion, _build(args[1], spaces))
    if head == "wedge":
        return Wedge(tuple(_build(a, spaces) for a in args))
    if head == "star":
        return Star(_build(args[0], spaces), _build(args[1], spaces))
    if head == "ddc":
        return DDC(_build(args[0], spaces))
    if head == "sum":
        return Sum(tuple((int(c), _build(t, spaces)) for c, t in args))
    raise ValueError(f"unknown head {head!r}")


def _build_map(node, spaces: Mapping[str, SpaceSym]) -> PullbackMap:
    head, *args = node
    if head == "q":
        return Projection(resolve_space(args[0], spaces), int(args[1]))
    if head == "t":
        return Translation(resolve_space(args[0], spaces), tuple(parse_label(a) for a in args[1:]))
    raise ValueError(f"unknown map {head!r}")


def parse_sexpr(text: str, spaces: Mapping[str, SpaceSym]) -> Term:
    """Read a term written by :meth:`Term.sexpr`; ``spaces`` maps atomic space names."""

    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty term")
    node, position = _read(tokens, 0)
    if position != len(tokens):
        raise ValueError("trailing tokens after term")
    return _build(node, spaces)


__all__ = [
    "Label",
    "ZERO",
    "make_label",
    "add_labels",
    "label_text",
    "parse_label",
    "SpaceSym",
    "SubvarietyTag",
    "Projection",
    "Translation",
    "SectionImmersion",
    "Term",
    "Green",
    "Nu",
    "Delta",
    "Pullback",
    "Pushforward",
    "Wedge",
    "Star",
    "DDC",
    "Sum",
    "Zero",
    "zero_like",
    "difference",
    "combination",
    "pull",
    "green_chain",
    "apply_chain",
    "divisor_of",
    "nu_form_of",
    "is_canonical_atom",
    "translated_green",
    "green_lift",
    "atom_key",
    "parse_sexpr",
    "resolve_space",
]
