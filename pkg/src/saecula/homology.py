"""Filtered chain complexes and the saecular factors of their homology.

A filtered complex is a finite set of cells, each with a dimension, an integer
grade in 1..n, and a boundary.  X_a is spanned by the cells of grade <= a.
In degree m, Z_a and B_a denote the cycles and boundaries of X_a inside
C_m(X_n), with B_{n+1} := Z_n.  The factor at [p, q) is

    (Z_p & B_q) / ((Z_p & B_{q-1}) | (Z_{p-1} & B_q)).

Two routes compute it: ``lattice`` builds these subgroups explicitly, while
``sweep`` runs one incremental column echelon per degree and reads each factor
off the birth-grade block of the boundary echelon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .abgrp import (
    AbHom,
    AbPresentation,
    Coefficients,
    QuotientShape,
    SubgroupElt,
    hom_image,
    hom_kernel,
    quotient_with_generators,
    sub_join,
    sub_meet,
)
from .diagram import ChainDiagram, Interval
from .intlinalg import IntMatrix
from .reduction import FieldEchelon, IntegerEchelon, reduce_mod_p


class ComplexError(ValueError):
    """Malformed filtered complex (bad faces, grades, or nonzero boundary squared)."""


@dataclass(frozen=True)
class Cell:
    id: object
    dim: int
    grade: int
    boundary: tuple = ()  # ((face_id, coefficient), ...)


def _reduce_scalar(coeff: Coefficients, x):
    if coeff.kind == "zmod":
        return int(x) % coeff.modulus
    return coeff.backend.coerce(x)


class FilteredComplex:
    """A finite filtered cell complex over a coefficient domain."""

    def __init__(self, cells: Iterable[Cell], coeff="z", grade_values: Sequence | None = None,
                 check: bool = True):
        self.coeff = Coefficients.parse(coeff)
        cells = list(cells)
        ids = [c.id for c in cells]
        if len(set(ids)) != len(ids):
            raise ComplexError("duplicate cell ids")
        for c in cells:
            if not isinstance(c.grade, int) or c.grade < 1:
                raise ComplexError(f"cell {c.id!r}: grade must be an integer >= 1")
            if c.dim < 0:
                raise ComplexError(f"cell {c.id!r}: negative dimension")
        order = {c.id: i for i, c in enumerate(cells)}
        self.n = max((c.grade for c in cells), default=0)
        self.grade_values = tuple(grade_values) if grade_values is not None else None
        by_dim: dict = {}
        for c in sorted(cells, key=lambda c: (c.dim, c.grade, order[c.id])):
            by_dim.setdefault(c.dim, []).append(c)
        self._by_dim = by_dim
        self.index = {c.id: (c.dim, i) for d, lst in by_dim.items() for i, c in enumerate(lst)}
        self.cells = cells
        self._cache: dict = {}
        for c in cells:
            for face, _ in c.boundary:
                if face not in self.index:
                    raise ComplexError(f"cell {c.id!r}: unknown face {face!r}")
                fd, fi = self.index[face]
                if fd != c.dim - 1:
                    raise ComplexError(f"cell {c.id!r}: face {face!r} has dimension {fd}")
                if by_dim[fd][fi].grade > c.grade:
                    raise ComplexError(f"cell {c.id!r}: face {face!r} enters later")
        if check:
            self.check_boundary_squared()

    @property
    def max_dim(self) -> int:
        return max(self._by_dim, default=-1)

    def cells_of_dim(self, m: int) -> list[Cell]:
        return self._by_dim.get(m, [])

    def size(self, m: int) -> int:
        return len(self._by_dim.get(m, []))

    def boundary_columns(self, m: int) -> list[dict]:
        """Column j: the boundary of the j-th m-cell as {row index of (m-1)-cell: coefficient}."""
        key = ("cols", m)
        if key not in self._cache:
            cols = []
            for c in self.cells_of_dim(m):
                col: dict = {}
                for face, a in c.boundary:
                    r = self.index[face][1]
                    col[r] = col.get(r, 0) + a
                col = {r: _reduce_scalar(self.coeff, x) for r, x in col.items()}
                cols.append({r: x for r, x in col.items() if x})
            self._cache[key] = cols
        return self._cache[key]

    def check_boundary_squared(self) -> None:
        for m in sorted(self._by_dim):
            if m < 2:
                continue
            lower = self.boundary_columns(m - 1)
            for j, col in enumerate(self.boundary_columns(m)):
                acc: dict = {}
                for r, a in col.items():
                    for s, b in lower[r].items():
                        acc[s] = acc.get(s, 0) + a * b
                bad = [s for s, x in sorted(acc.items()) if _reduce_scalar(self.coeff, x)]
                if bad:
                    cid = self.cells_of_dim(m)[j].id
                    fid = self.cells_of_dim(m - 2)[bad[0]].id
                    raise ComplexError(
                        f"boundary of boundary is nonzero: cell {cid!r} hits face {fid!r} "
                        f"with coefficient {acc[bad[0]]}")

    def with_coefficients(self, coeff) -> FilteredComplex:
        return FilteredComplex(self.cells, coeff, self.grade_values)

    def sparse_chain(self, m: int, vec: Sequence) -> dict:
        """Dense coordinate vector in C_m to {cell id: coefficient}, zeros dropped."""
        cells = self.cells_of_dim(m)
        out = {}
        for i, x in enumerate(vec):
            x = _reduce_scalar(self.coeff, x)
            if x:
                out[cells[i].id] = x
        return out


# ---------------------------------------------------------------------------
# explicit lattices


def chain_group(X: FilteredComplex, m: int) -> AbPresentation:
    key = ("group", m)
    if key not in X._cache:
        X._cache[key] = AbPresentation.make(X.size(m), (), X.coeff)
    return X._cache[key]


def boundary_map(X: FilteredComplex, m: int) -> AbHom:
    """The boundary C_m -> C_{m-1} (the zero map to the trivial group when m == 0)."""
    key = ("bd", m)
    if key not in X._cache:
        src = chain_group(X, m)
        tgt = chain_group(X, m - 1)
        rows = [[0] * src.rank for _ in range(tgt.rank)]
        for j, col in enumerate(X.boundary_columns(m)):
            for r, x in col.items():
                rows[r][j] = x
        be = tgt.backend
        entries = tuple(be.coerce(x) for r in rows for x in r)
        X._cache[key] = AbHom(src, tgt, IntMatrix(tgt.rank, src.rank, entries))
    return X._cache[key]


def filtration_step(X: FilteredComplex, m: int, k: int) -> SubgroupElt:
    """C_m(X_k) inside C_m(X_n); k is clamped to 0..n."""
    key = ("F", m, max(0, min(k, X.n)))
    if key not in X._cache:
        G = chain_group(X, m)
        cells = X.cells_of_dim(m)
        gens = [tuple(int(i == j) for i in range(G.rank)) for j, c in enumerate(cells) if c.grade <= k]
        X._cache[key] = G.subgroup(gens)
    return X._cache[key]


@dataclass
class CycleBoundaryFiltrations:
    complex: FilteredComplex
    degree: int
    cycles: list  # Z_0 .. Z_n
    boundaries: list  # B_0 .. B_{n+1}
    _grid: dict = field(default_factory=dict, repr=False)

    def cell(self, x: int, y: int) -> SubgroupElt:
        """Z_x meet B_y."""
        key = (x, y)
        if key not in self._grid:
            self._grid[key] = sub_meet(self.cycles[x], self.boundaries[y])
        return self._grid[key]

    def factor_pair(self, p: int, q: int) -> tuple[SubgroupElt, SubgroupElt]:
        num = self.cell(p, q)
        den = sub_join(self.cell(p, q - 1), self.cell(p - 1, q))
        return num, den


def cycle_boundary_filtrations(X: FilteredComplex, m: int) -> CycleBoundaryFiltrations:
    key = ("cb", m)
    if key in X._cache:
        return X._cache[key]
    n = X.n
    zall = hom_kernel(boundary_map(X, m))
    cycles = [sub_meet(zall, filtration_step(X, m, a)) for a in range(0, n + 1)]
    up = boundary_map(X, m + 1)
    boundaries = [hom_image(up, filtration_step(X, m + 1, a)) for a in range(0, n + 1)]
    boundaries.append(cycles[n])
    out = CycleBoundaryFiltrations(X, m, cycles, boundaries)
    X._cache[key] = out
    return out


@dataclass
class HomologyFactor:
    support: Interval
    shape: QuotientShape
    generators: list  # cycles as {cell id: coefficient}

    @property
    def representative(self) -> dict:
        return self.generators[0] if self.generators else {}


def _lattice_barcode(X: FilteredComplex, m: int) -> dict:
    cb = cycle_boundary_filtrations(X, m)
    out = {}
    for p in range(1, X.n + 1):
        for q in range(p + 1, X.n + 2):
            num, den = cb.factor_pair(p, q)
            shape, gens = quotient_with_generators(num, den)
            if not shape.is_trivial:
                out[Interval(p, q)] = HomologyFactor(
                    Interval(p, q), shape, [X.sparse_chain(m, g) for g in gens])
    return out


def degenerate_factors(X: FilteredComplex, m: int) -> dict:
    """The zero-length factors (Z_x & B_x) / ((Z_x & B_{x-1}) | (Z_{x-1} & B_x)), keyed by x."""
    cb = cycle_boundary_filtrations(X, m)
    out = {}
    for x in range(1, X.n + 1):
        num, den = cb.factor_pair(x, x)
        out[x] = quotient_with_generators(num, den)[0]
    return out


def homology_diagram(X: FilteredComplex, m: int) -> ChainDiagram:
    """The chain H_m(X_1) -> ... -> H_m(X_n), each presented as Z_a / B_a."""
    cb = cycle_boundary_filtrations(X, m)
    be = X.coeff.backend
    out_coeff = "z" if X.coeff.kind == "zmod" else X.coeff
    objs = []
    for a in range(1, X.n + 1):
        zb = cb.cycles[a].cols
        rels = [be.solve(zb, b) for b in cb.boundaries[a].cols]
        objs.append(AbPresentation.make(len(zb), rels, out_coeff))
    maps = []
    for a in range(1, X.n):
        src, tgt = cb.cycles[a].cols, cb.cycles[a + 1].cols
        cols = [be.solve(tgt, z) for z in src]
        rows = [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))]
        maps.append(AbHom.make(objs[a - 1], objs[a], rows))
    return ChainDiagram(objs, maps)


# ---------------------------------------------------------------------------
# sweep


def _solve_bottom(be, basis: list, v: Sequence):
    """Coordinates of v over vectors with distinct lowest-nonzero rows, or None."""
    lows = {}
    for i, b in enumerate(basis):
        r = max(k for k, x in enumerate(b) if x)
        lows[r] = i
    v = list(v)
    coords = [be.coerce(0)] * len(basis)
    integer = be.characteristic is None
    for r in range(len(v) - 1, -1, -1):
        if not v[r]:
            continue
        i = lows.get(r)
        if i is None:
            return None
        b = basis[i]
        if integer:
            c, rem = divmod(v[r], b[r])
            if rem:
                return None
        else:
            c = be.coerce(v[r] * be.field.inv(b[r]))
        coords[i] = c
        v = [be.coerce(x - c * y) for x, y in zip(v, b)]
    return coords


def _block_quotient(be, num_proj, num_full, den_proj, k):
    """Shape of span(num_proj)/span(den_proj) in a block of width k, with lifted generators."""
    coords = []
    for d in den_proj:
        c = _solve_bottom(be, num_proj, d)
        if c is None:
            raise ArithmeticError("boundary block is not nested in the previous one")
        coords.append(c)
    shape, cs = be.shape_from_coords(coords, len(num_proj))
    gens = []
    for c in cs:
        g: dict = {}
        for coef, full in zip(c, num_full):
            if coef:
                for r, x in full.items():
                    g[r] = be.coerce(g.get(r, 0) + coef * x)
        gens.append({r: x for r, x in g.items() if x})
    return shape, gens


def _sweep_barcode(X: FilteredComplex, m: int) -> dict:
    coeff = X.coeff
    be = coeff.backend
    cells = X.cells_of_dim(m)
    grade = [c.grade for c in cells]
    blocks: dict = {}
    for r, g in enumerate(grade):
        s, e = blocks.get(g, (r, r))
        blocks[g] = (s, r + 1)
    n = X.n
    down = X.boundary_columns(m) if m > 0 else [{} for _ in cells]
    up_cells = X.cells_of_dim(m + 1)
    up = X.boundary_columns(m + 1)

    def proj(vec: dict, p: int) -> tuple:
        s, e = blocks[p]
        return tuple(vec.get(r, 0) for r in range(s, e))

    def named(vec: dict) -> dict:
        return {cells[r].id: x for r, x in sorted(vec.items()) if x}

    births: dict = {p: [] for p in blocks}
    out: dict = {}

    if coeff.kind == "fp":
        p_mod = coeff.modulus
        red = reduce_mod_p(down, X.size(m - 1), p_mod, track=True)
        for j, low in enumerate(red.lows):
            if low < 0:
                births[grade[j]].append(red.v[j])
        red_up = reduce_mod_p(up, len(cells), p_mod, track=False)
        paired: set = set()
        found: dict = {}
        for j, low in enumerate(red_up.lows):
            if low < 0:
                continue
            paired.add(low)
            p, q = grade[low], up_cells[j].grade
            if q > p:
                found.setdefault((p, q), []).append(red_up.columns[j])
        for (p, q), gens in found.items():
            out[Interval(p, q)] = HomologyFactor(
                Interval(p, q), QuotientShape(len(gens), (), p_mod), [named(g) for g in gens])
        for p, zs in births.items():
            ess = [z for z in zs if max(z) not in paired]
            if ess:
                out[Interval(p, n + 1)] = HomologyFactor(
                    Interval(p, n + 1), QuotientShape(len(ess), (), p_mod), [named(z) for z in ess])
        return dict(sorted(out.items()))

    make = (lambda: IntegerEchelon()) if coeff.kind == "z" else (lambda: FieldEchelon(be.field))
    cyc = make()
    for r, col in enumerate(down):
        ker = cyc.insert(dict(col), {r: be.coerce(1)})
        if ker is not None:
            births[grade[r]].append(ker)

    bnd = make()
    lattice: dict = {p: () for p in blocks}
    by_grade: dict = {}
    for j, c in enumerate(up_cells):
        by_grade.setdefault(c.grade, []).append(j)
    for q in sorted(by_grade):
        bnd.touched.clear()
        for j in by_grade[q]:
            bnd.insert(dict(up[j]))
        for p in sorted({grade[low] for low in bnd.touched}):
            s, e = blocks[p]
            piv = [bnd.pivot_of[low][0] for low in range(s, e) if low in bnd.pivot_of]
            projs = [proj(c, p) for c in piv]
            canon = be.canonical(projs, e - s)
            if canon == lattice[p]:
                continue
            if q > p:
                shape, gens = _block_quotient(be, projs, piv, lattice[p], e - s)
                if not shape.is_trivial:
                    out[Interval(p, q)] = HomologyFactor(Interval(p, q), shape, [named(g) for g in gens])
            lattice[p] = canon
    for p, zs in births.items():
        if not zs:
            continue
        s, e = blocks[p]
        shape, gens = _block_quotient(be, [proj(z, p) for z in zs], zs, lattice[p], e - s)
        if not shape.is_trivial:
            out[Interval(p, n + 1)] = HomologyFactor(Interval(p, n + 1), shape, [named(g) for g in gens])
    return dict(sorted(out.items()))


def homology_barcode(X: FilteredComplex, m: int, method: str = "auto") -> dict:
    """Nonzero saecular factors of degree-m homology keyed by interval, ordered by (p, q).

    ``method`` is ``lattice``, ``sweep``, or ``auto`` (sweep unless the
    coefficients are Z/N, which only the lattice route handles).
    """
    if m < 0:
        raise ComplexError("negative degree")
    if method == "auto":
        method = "lattice" if X.coeff.kind == "zmod" else "sweep"
    if method == "sweep":
        if X.coeff.kind == "zmod":
            raise ValueError("the sweep route does not support Z/N coefficients")
        return _sweep_barcode(X, m)
    if method == "lattice":
        return _lattice_barcode(X, m)
    raise ValueError(f"unknown method {method!r}")


def chain_in_subgroup(X: FilteredComplex, m: int, chains: Iterable[dict]) -> SubgroupElt:
    """Subgroup of C_m generated by sparse chains."""
    G = chain_group(X, m)
    vecs = []
    for ch in chains:
        v = [0] * G.rank
        for cid, x in ch.items():
            v[X.index[cid][1]] = x
        vecs.append(v)
    return G.subgroup(vecs)


def to_fraction_string(x) -> object:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x
