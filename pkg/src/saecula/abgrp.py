"""Finitely presented abelian groups (or vector spaces) and their subgroup lattices.

A subgroup of Z^n / R is stored as the full lattice L with R <= L <= Z^n, in
canonical form, so equality of subgroups is equality of stored bases.  Over a
field the same code runs with reduced column echelon form in place of HNF.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import fieldlinalg as fl
from . import intlinalg as il
from .intlinalg import IntMatrix


class NotNestedError(ValueError):
    """Raised when a quotient is requested for a pair with den not below num."""


# ---------------------------------------------------------------------------
# coefficient domains


class _IntegerBackend:
    characteristic = None

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            return x.numerator
        if isinstance(x, float) and not x.is_integer():
            raise ValueError(f"non-integral entry {x}")
        return int(x)

    def canonical(self, cols, n):
        return tuple(il.hnf_columns(cols, n))

    def kernel(self, cols, n):
        return il.kernel_columns(cols, n)

    def solve(self, basis, v):
        return il.solve_hnf_columns(basis, v)

    def quotient_coords(self, num, den):
        """Shape of span(num)/span(den) and generator coordinates over the num basis."""
        coords = []
        for d in den:
            c = il.solve_hnf_columns(num, d)
            if c is None:
                raise NotNestedError("den is not contained in num")
            coords.append(c)
        return self.shape_from_coords(coords, len(num))

    def shape_from_coords(self, coords, r):
        """Quotient Z^r / span(coords) for independent coordinate columns."""
        s = len(coords)
        if s == 0:
            return QuotientShape(r, ()), [[int(i == k) for k in range(r)] for i in range(r)]
        dec = il.snf(IntMatrix.from_columns(coords, r))
        diag = dec.diagonal
        uinv = dec.U_inv.to_rows()
        # num basis times U^-1 is adapted: den is spanned by diag[i] * (column i)
        picked = [i for i in range(s) if diag[i] != 1] + list(range(s, r))
        torsion = tuple(diag[i] for i in range(s) if diag[i] != 1)
        return QuotientShape(r - s, torsion), [[uinv[k][i] for k in range(r)] for i in picked]

    def quotient(self, num, den, n):
        shape, cs = self.quotient_coords(num, den)
        return shape, [_combine(num, c, n, self.coerce) for c in cs]


class _FieldBackend:
    def __init__(self, fld):
        self.field = fld
        self.characteristic = fld.characteristic

    def coerce(self, x):
        return self.field.coerce(x)

    def canonical(self, cols, n):
        return tuple(fl.rref_columns(self.field, cols, n))

    def kernel(self, cols, n):
        return fl.kernel_columns(self.field, cols, n)

    def solve(self, basis, v):
        return fl.solve_rref_columns(self.field, basis, v)

    def quotient_coords(self, num, den):
        coords = []
        for d in den:
            c = fl.solve_rref_columns(self.field, num, d)
            if c is None:
                raise NotNestedError("den is not contained in num")
            coords.append(c)
        return self.shape_from_coords(coords, len(num))

    def shape_from_coords(self, coords, r):
        ech = fl.rref_columns(self.field, coords, r)
        used = set(fl.pivot_rows(ech))
        one, zero = self.coerce(1), self.coerce(0)
        cs = [[one if k == i else zero for k in range(r)] for i in range(r) if i not in used]
        return QuotientShape(r - len(ech), (), self.characteristic), cs

    def quotient(self, num, den, n):
        shape, cs = self.quotient_coords(num, den)
        return shape, [_combine(num, c, n, self.coerce) for c in cs]


def _combine(basis, coeffs, n, coerce):
    return tuple(coerce(sum(c * b[row] for c, b in zip(coeffs, basis) if c)) for row in range(n))


@dataclass(frozen=True)
class Coefficients:
    """Coefficient domain: ``z``, ``q``, ``fp:<p>``, or ``zmod:<N>`` (Z/N)."""

    kind: str
    modulus: int = 0

    @classmethod
    def parse(cls, text: str | Coefficients) -> Coefficients:
        if isinstance(text, Coefficients):
            return text
        s = str(text).strip().lower()
        if s in ("z", "int", "integers"):
            return cls("z")
        if s in ("q", "rational", "rationals"):
            return cls("q")
        for prefix, kind in (("fp:", "fp"), ("f", "fp"), ("zmod:", "zmod")):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                m = int(s[len(prefix):])
                if kind == "fp":
                    fl.PrimeField(m)
                elif m < 2:
                    raise ValueError("Z/N needs N >= 2")
                return cls(kind, m)
        raise ValueError(f"unknown coefficient domain {text!r}")

    def __str__(self) -> str:
        return {"z": "z", "q": "q"}.get(self.kind) or f"{self.kind}:{self.modulus}"

    @property
    def is_field(self) -> bool:
        return self.kind in ("q", "fp")

    @property
    def finite_length(self) -> bool:
        """True when every finitely generated module has finite composition length."""
        return self.kind != "z"

    @property
    def backend(self):
        return _backend(self)

    def base_relations(self, rank: int) -> list[tuple]:
        if self.kind == "zmod":
            return [tuple(self.modulus if i == j else 0 for i in range(rank)) for j in range(rank)]
        return []


_BACKENDS: dict = {}


def _backend(c: Coefficients):
    b = _BACKENDS.get(c)
    if b is None:
        if c.kind == "q":
            b = _FieldBackend(fl.Rationals())
        elif c.kind == "fp":
            b = _FieldBackend(fl.PrimeField(c.modulus))
        else:
            b = _IntegerBackend()
        _BACKENDS[c] = b
    return b


Z = Coefficients("z")
Q = Coefficients("q")


def F(p: int) -> Coefficients:
    return Coefficients.parse(f"fp:{p}")


# ---------------------------------------------------------------------------
# shapes and composition-series vectors


@dataclass(frozen=True)
class QuotientShape:
    """Isomorphism type of a quotient.

    Over Z: Z^free_rank + sum Z/d_i.  Over a field (characteristic set, 0 for
    Q) only ``free_rank`` is used and it is the dimension.
    """

    free_rank: int
    invariant_factors: tuple = ()
    characteristic: int | None = None

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        if self.characteristic is not None:
            return f"dim {self.free_rank}"
        parts = [f"Z^{self.free_rank}" if self.free_rank > 1 else "Z"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) or "0"


def _factorize(n: int) -> Counter:
    out: Counter = Counter()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] += 1
            n //= d
        d += 1
    if n > 1:
        out[n] += 1
    return out


@dataclass(frozen=True)
class JhVector:
    """Jordan-Hoelder multiplicities keyed by simple object.

    Over Z the simple objects are Z/p (keyed by p); over F_p the single simple
    object is F_p = Z/p (keyed by p); over Q it is Q (keyed by 0).  A nonzero
    ``free_rank`` marks a Z-module of infinite length.
    """

    free_rank: int = 0
    torsion: tuple = ()  # sorted (label, multiplicity) pairs, multiplicities nonzero

    @classmethod
    def from_counter(cls, free_rank: int, counts) -> JhVector:
        return cls(free_rank, tuple(sorted((k, v) for k, v in dict(counts).items() if v)))

    @property
    def finite_length(self) -> bool:
        return self.free_rank == 0

    @property
    def counts(self) -> dict:
        return dict(self.torsion)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_nonnegative(self) -> bool:
        return self.free_rank >= 0 and all(v >= 0 for _, v in self.torsion)

    @property
    def length(self) -> int:
        if not self.finite_length:
            raise ValueError("infinite length")
        return sum(v for _, v in self.torsion)

    def __add__(self, other: JhVector) -> JhVector:
        c = Counter(self.counts)
        c.update(other.counts)
        return JhVector.from_counter(self.free_rank + other.free_rank, c)

    def __neg__(self) -> JhVector:
        return JhVector(-self.free_rank, tuple((k, -v) for k, v in self.torsion))

    def __sub__(self, other: JhVector) -> JhVector:
        return self + (-other)

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"[{k}]x{v}" for k, v in self.torsion]
        return " + ".join(parts) or "0"


ZERO_JH = JhVector()


def jh_vector(shape: QuotientShape) -> JhVector:
    if shape.characteristic is not None:
        return JhVector.from_counter(0, {shape.characteristic: shape.free_rank})
    c: Counter = Counter()
    for d in shape.invariant_factors:
        c.update(_factorize(d))
    return JhVector.from_counter(shape.free_rank, c)


# ---------------------------------------------------------------------------
# presentations, subgroups, homomorphisms


@dataclass(frozen=True)
class AbPresentation:
    """The group Z^rank / span(relations) over a coefficient domain."""

    rank: int
    relation_cols: tuple = ()
    coeff: Coefficients = Z

    @classmethod
    def make(cls, rank: int, relations: Iterable[Sequence] = (), coeff="z") -> AbPresentation:
        c = Coefficients.parse(coeff)
        be = c.backend
        rels = [tuple(be.coerce(x) for x in r) for r in relations]
        if any(len(r) != rank for r in rels):
            raise ValueError("relation length does not match rank")
        rels += c.base_relations(rank)
        return cls(rank, be.canonical(rels, rank), c)

    @property
    def relations(self) -> IntMatrix:
        return IntMatrix.from_columns(self.relation_cols, self.rank)

    @property
    def backend(self):
        return self.coeff.backend

    def zero(self) -> SubgroupElt:
        return SubgroupElt(self, self.relation_cols)

    def full(self) -> SubgroupElt:
        be = self.backend
        one = be.coerce(1)
        zero = be.coerce(0)
        return SubgroupElt(self, be.canonical(
            [tuple(one if i == j else zero for i in range(self.rank)) for j in range(self.rank)],
            self.rank))

    def subgroup(self, gens: Iterable[Sequence]) -> SubgroupElt:
        be = self.backend
        cols = [tuple(be.coerce(x) for x in g) for g in gens]
        if any(len(g) != self.rank for g in cols):
            raise ValueError("generator length does not match rank")
        return SubgroupElt(self, be.canonical(cols + list(self.relation_cols), self.rank))

    def shape(self) -> QuotientShape:
        return quotient_shape(self.full(), self.zero())

    def contains(self, v: Sequence) -> bool:
        """True iff the vector v is zero in this group."""
        return self.backend.solve(self.relation_cols, v) is not None


@dataclass(frozen=True)
class SubgroupElt:
    """A subgroup, stored as the canonical basis of its preimage lattice."""

    parent: AbPresentation
    cols: tuple

    @property
    def basis(self) -> IntMatrix:
        return IntMatrix.from_columns(self.cols, self.parent.rank)

    def contains(self, v: Sequence) -> bool:
        return self.parent.backend.solve(self.cols, v) is not None

    def __le__(self, other: SubgroupElt) -> bool:
        return sub_le(self, other)

    def __and__(self, other: SubgroupElt) -> SubgroupElt:
        return sub_meet(self, other)

    def __or__(self, other: SubgroupElt) -> SubgroupElt:
        return sub_join(self, other)

    def is_zero(self) -> bool:
        return self.cols == self.parent.relation_cols


@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by a (target.rank x source.rank) matrix."""

    source: AbPresentation
    target: AbPresentation
    matrix: IntMatrix = field(compare=True)

    @classmethod
    def make(cls, source: AbPresentation, target: AbPresentation, rows: Sequence[Sequence],
             check: bool = True) -> AbHom:
        be = target.backend
        rows = [[be.coerce(x) for x in r] for r in rows]
        if target.rank == 0:
            m = IntMatrix(0, source.rank, ())
        else:
            m = IntMatrix.from_rows(rows, source.rank)
        if m.rows != target.rank or m.cols != source.rank:
            raise ValueError(f"matrix must be {target.rank}x{source.rank}")
        f = cls(source, target, m)
        if check and not f.is_well_defined():
            raise ValueError("matrix does not send relations to relations")
        return f

    def is_well_defined(self) -> bool:
        return all(self.target.contains(self.apply(r)) for r in self.source.relation_cols)

    def apply(self, v: Sequence) -> tuple:
        be = self.target.backend
        return tuple(be.coerce(x) for x in self.matrix.apply(v))

    def columns(self) -> list[tuple]:
        be = self.target.backend
        return [tuple(be.coerce(x) for x in c) for c in self.matrix.columns()]


def identity_hom(a: AbPresentation) -> AbHom:
    return AbHom(a, a, IntMatrix.identity(a.rank))


def compose(f: AbHom, g: AbHom) -> AbHom:
    """g after f."""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    be = g.target.backend
    m = g.matrix @ f.matrix
    return AbHom(f.source, g.target, IntMatrix(m.rows, m.cols, tuple(be.coerce(x) for x in m.entries)))


# ---------------------------------------------------------------------------
# lattice operations


def _same_parent(a: SubgroupElt, b: SubgroupElt) -> AbPresentation:
    if a.parent != b.parent:
        raise ValueError("subgroups of different groups")
    return a.parent


def sub_le(a: SubgroupElt, b: SubgroupElt) -> bool:
    _same_parent(a, b)
    be = a.parent.backend
    return all(be.solve(b.cols, c) is not None for c in a.cols)


def sub_join(a: SubgroupElt, b: SubgroupElt) -> SubgroupElt:
    P = _same_parent(a, b)
    if a.cols == b.cols:
        return a
    return SubgroupElt(P, P.backend.canonical(list(a.cols) + list(b.cols), P.rank))


def sub_meet(a: SubgroupElt, b: SubgroupElt) -> SubgroupElt:
    P = _same_parent(a, b)
    if a.cols == b.cols:
        return a
    be = P.backend
    n = P.rank
    ra = len(a.cols)
    neg = be.coerce(-1)
    cols = list(a.cols) + [tuple(be.coerce(neg * x) for x in c) for c in b.cols]
    ker = be.kernel(cols, n)
    vecs = [
        tuple(be.coerce(sum(x[j] * a.cols[j][i] for j in range(ra) if x[j])) for i in range(n))
        for x in ker
    ]
    return SubgroupElt(P, be.canonical(vecs + list(P.relation_cols), n))


def join_all(items: Iterable[SubgroupElt], parent: AbPresentation) -> SubgroupElt:
    cols = list(parent.relation_cols)
    for s in items:
        if s.parent != parent:
            raise ValueError("subgroups of different groups")
        cols.extend(s.cols)
    return SubgroupElt(parent, parent.backend.canonical(cols, parent.rank))


def hom_image(f: AbHom, s: SubgroupElt) -> SubgroupElt:
    if s.parent != f.source:
        raise ValueError("subgroup is not in the source of the map")
    T = f.target
    vecs = [f.apply(c) for c in s.cols]
    return SubgroupElt(T, T.backend.canonical(vecs + list(T.relation_cols), T.rank))


def hom_preimage(f: AbHom, t: SubgroupElt) -> SubgroupElt:
    if t.parent != f.target:
        raise ValueError("subgroup is not in the target of the map")
    S, T = f.source, f.target
    be = T.backend
    neg = be.coerce(-1)
    cols = f.columns() + [tuple(be.coerce(neg * x) for x in c) for c in t.cols]
    ker = be.kernel(cols, T.rank)
    vecs = [tuple(x[: S.rank]) for x in ker]
    return SubgroupElt(S, S.backend.canonical(vecs + list(S.relation_cols), S.rank))


def hom_kernel(f: AbHom) -> SubgroupElt:
    return hom_preimage(f, f.target.zero())


def quotient_shape(num: SubgroupElt, den: SubgroupElt) -> QuotientShape:
    return quotient_with_generators(num, den)[0]


def quotient_with_generators(num: SubgroupElt, den: SubgroupElt) -> tuple[QuotientShape, list[tuple]]:
    """Shape of num/den plus ambient vectors generating the cyclic summands.

    Generators come ordered by invariant factor, free summands last.
    """
    P = _same_parent(num, den)
    return P.backend.quotient(num.cols, den.cols, P.rank)


PrimeField = fl.PrimeField
