"""Chain diagrams of abelian groups, their subdiagrams, and interval-functor checks.

Indices are 1-based: a diagram of length n has objects 1..n and maps
f(a, a+1) for a = 1..n-1.  An interval [p, q) with q = n + 1 stands for the
unbounded interval [p, inf).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .abgrp import (
    AbHom,
    AbPresentation,
    Coefficients,
    SubgroupElt,
    compose,
    hom_image,
    hom_preimage,
    identity_hom,
    quotient_shape,
    sub_join,
    sub_le,
    sub_meet,
)


class DiagramError(ValueError):
    """Malformed diagram, subdiagram, or index."""


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval [p, q) of indices; q == n + 1 encodes infinity."""

    p: int
    q: int

    def __post_init__(self):
        if not (1 <= self.p < self.q):
            raise DiagramError(f"not an interval: [{self.p}, {self.q})")

    def contains(self, a: int) -> bool:
        return self.p <= a < self.q

    def le(self, other: Interval) -> bool:
        """Product order on endpoints."""
        return self.p <= other.p and self.q <= other.q

    def label(self, n: int) -> str:
        return f"[{self.p},{'inf' if self.q > n else self.q})"


class ChainDiagram:
    """A chain D_1 -> D_2 -> ... -> D_n with composites cached on demand."""

    __slots__ = ("objects", "maps", "coeff", "_composites")

    def __init__(self, objects: Sequence[AbPresentation], maps: Sequence[AbHom]):
        objects = tuple(objects)
        maps = tuple(maps)
        if not objects:
            raise DiagramError("empty diagram")
        if len(maps) != len(objects) - 1:
            raise DiagramError(f"{len(objects)} objects need {len(objects) - 1} maps, got {len(maps)}")
        coeffs = {o.coeff for o in objects}
        if len(coeffs) != 1:
            raise DiagramError("objects over different coefficient domains")
        for a, f in enumerate(maps):
            if f.source != objects[a] or f.target != objects[a + 1]:
                raise DiagramError(f"map {a + 1} does not go from object {a + 1} to {a + 2}")
        self.objects = objects
        self.maps = maps
        self.coeff: Coefficients = next(iter(coeffs))
        self._composites: dict = {}

    @property
    def length(self) -> int:
        return len(self.objects)

    def obj(self, a: int) -> AbPresentation:
        self._check_index(a)
        return self.objects[a - 1]

    def _check_index(self, a: int) -> None:
        if not 1 <= a <= self.length:
            raise DiagramError(f"index {a} outside 1..{self.length}")

    def composite(self, a: int, b: int) -> AbHom:
        """f(a <= b): D_a -> D_b."""
        self._check_index(a)
        self._check_index(b)
        if a > b:
            raise DiagramError(f"no map from {a} to {b}")
        key = (a, b)
        f = self._composites.get(key)
        if f is None:
            if a == b:
                f = identity_hom(self.objects[a - 1])
            else:
                f = compose(self.composite(a, b - 1), self.maps[b - 2])
            self._composites[key] = f
        return f

    def __eq__(self, other) -> bool:
        return isinstance(other, ChainDiagram) and self.objects == other.objects and self.maps == other.maps

    def __hash__(self) -> int:
        return hash((self.objects, self.maps))

    def __repr__(self) -> str:
        return f"ChainDiagram(length={self.length}, coeff={self.coeff})"

    def full(self) -> SubDiagram:
        return SubDiagram(self, tuple(o.full() for o in self.objects), check=False)

    def zero(self) -> SubDiagram:
        return SubDiagram(self, tuple(o.zero() for o in self.objects), check=False)


class SubDiagram:
    """A family of subgroups S_a <= D_a with f(a, a+1)(S_a) <= S_{a+1}."""

    __slots__ = ("parent", "parts")

    def __init__(self, parent: ChainDiagram, parts: Sequence[SubgroupElt], check: bool = True):
        parts = tuple(parts)
        if len(parts) != parent.length:
            raise DiagramError("subdiagram has the wrong number of parts")
        self.parent = parent
        self.parts = parts
        if check:
            for a, s in enumerate(parts):
                if s.parent != parent.objects[a]:
                    raise DiagramError(f"part {a + 1} is not a subgroup of object {a + 1}")
            for a, f in enumerate(parent.maps):
                if not sub_le(hom_image(f, parts[a]), parts[a + 1]):
                    raise DiagramError(f"part {a + 2} does not contain the image of part {a + 1}")

    def part(self, a: int) -> SubgroupElt:
        return self.parts[a - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, SubDiagram) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __le__(self, other: SubDiagram) -> bool:
        return all(sub_le(a, b) for a, b in zip(self.parts, other.parts))

    def __and__(self, other: SubDiagram) -> SubDiagram:
        return sub_meet_diag(self, other)

    def __or__(self, other: SubDiagram) -> SubDiagram:
        return sub_join_diag(self, other)

    def __repr__(self) -> str:
        return "SubDiagram(" + ", ".join(str(quotient_shape(s, s.parent.zero())) for s in self.parts) + ")"


def sub_join_diag(a: SubDiagram, b: SubDiagram) -> SubDiagram:
    if a.parent is not b.parent and a.parent != b.parent:
        raise DiagramError("subdiagrams of different diagrams")
    return SubDiagram(a.parent, tuple(sub_join(x, y) for x, y in zip(a.parts, b.parts)), check=False)


def sub_meet_diag(a: SubDiagram, b: SubDiagram) -> SubDiagram:
    if a.parent is not b.parent and a.parent != b.parent:
        raise DiagramError("subdiagrams of different diagrams")
    return SubDiagram(a.parent, tuple(sub_meet(x, y) for x, y in zip(a.parts, b.parts)), check=False)


def join_diagrams(items: Iterable[SubDiagram], parent: ChainDiagram) -> SubDiagram:
    out = parent.zero()
    for s in items:
        out = sub_join_diag(out, s)
    return out


def _step_is_iso(d: ChainDiagram, num: SubDiagram, den: SubDiagram, a: int) -> bool:
    """Whether f(a, a+1) induces num_a/den_a -> num_{a+1}/den_{a+1} bijectively."""
    f = d.maps[a - 1]
    na, nb = num.part(a), num.part(a + 1)
    da, db = den.part(a), den.part(a + 1)
    surjective = sub_join(hom_image(f, na), db) == nb
    injective = sub_meet(hom_preimage(f, db), na) == da
    return surjective and injective


def is_interval_functor(d: ChainDiagram, num: SubDiagram, den: SubDiagram):
    """Decide whether num/den is an interval functor.

    Returns the support Interval on success, None when num == den everywhere,
    and False when the quotient is not an interval functor.
    Raises DiagramError if den is not a subdiagram of num.
    """
    if not den <= num:
        raise DiagramError("den is not contained in num")
    nonzero = [a for a in range(1, d.length + 1) if num.part(a) != den.part(a)]
    if not nonzero:
        return None
    p, last = nonzero[0], nonzero[-1]
    if last - p + 1 != len(nonzero):
        return False
    for a in range(p, last):
        if not _step_is_iso(d, num, den, a):
            return False
    return Interval(p, last + 1)
