"""Seeded random and named sample objects: diagrams, filtered complexes, group chains."""

from __future__ import annotations

import itertools
import random
from math import gcd

from .abgrp import AbHom, AbPresentation
from .diagram import ChainDiagram
from .homology import Cell, FilteredComplex
from .intlinalg import kernel_columns

# ---------------------------------------------------------------------------
# named examples


def cyclic_chain(orders=(9, 6, 4), multipliers=(2, 2)) -> ChainDiagram:
    """Z/k_1 -> Z/k_2 -> ... with multiplication maps (defaults to the 9, 6, 4 example)."""
    objs = [AbPresentation.make(1, [[k]]) for k in orders]
    maps = [AbHom.make(objs[i], objs[i + 1], [[c]]) for i, c in enumerate(multipliers)]
    return ChainDiagram(objs, maps)


def disk_complex(coeff="z") -> FilteredComplex:
    """A circle at grade 1, then 2-cells attached along 4 and 2 times it at grades 2 and 3."""
    cells = [
        Cell("v", 0, 1),
        Cell("zeta", 1, 1, (("v", 1), ("v", -1))),
        Cell("A", 2, 2, (("zeta", 4),)),
        Cell("B", 2, 3, (("zeta", 2),)),
    ]
    return FilteredComplex(cells, coeff)


# ---------------------------------------------------------------------------
# random chain diagrams


_TORSION = (2, 3, 4, 5, 6, 8, 9, 12)


def random_chain_diagram(rng: random.Random, max_length: int = 6, max_rank: int = 3,
                         finite: bool = False, coeff: str = "z") -> ChainDiagram:
    """A random chain of finitely presented groups (or vector spaces).

    Over Z each object is a sum of cyclic groups; maps are random integer
    matrices scaled so that relations go to relations.
    """
    n = rng.randint(1, max_length)
    if coeff != "z":
        dims = [rng.randint(0, max_rank) for _ in range(n)]
        objs = [AbPresentation.make(k, (), coeff) for k in dims]
        maps = []
        for a in range(n - 1):
            rows = [[rng.randint(-2, 2) for _ in range(dims[a])] for _ in range(dims[a + 1])]
            maps.append(AbHom.make(objs[a], objs[a + 1], rows))
        return ChainDiagram(objs, maps)
    orders = []
    for _ in range(n):
        k = rng.randint(1 if finite else 0, max_rank)
        orders.append([rng.choice(_TORSION) if (finite or rng.random() < 0.6) else 0 for _ in range(k)])
    objs = [
        AbPresentation.make(len(o), [[d if i == j else 0 for i in range(len(o))] for j, d in enumerate(o)])
        for o in orders
    ]
    maps = []
    for a in range(n - 1):
        src, tgt = orders[a], orders[a + 1]
        rows = []
        for t in tgt:
            row = []
            for d in src:
                if t == 0:
                    c = 1 if d == 0 else 0
                else:
                    c = t // gcd(t, d)
                row.append(c * rng.randint(-3, 3))
            rows.append(row)
        maps.append(AbHom.make(objs[a], objs[a + 1], rows))
    return ChainDiagram(objs, maps)


# ---------------------------------------------------------------------------
# random filtered complexes


def random_simplicial_complex(rng: random.Random, coeff: str = "fp:2", vertices: int = 7,
                              grades: int = 5, max_dim: int = 2, density: float = 0.5) -> FilteredComplex:
    """A random filtered simplicial complex; each simplex enters no earlier than its faces."""
    grade: dict = {}
    for v in range(vertices):
        grade[(v,)] = rng.randint(1, grades)
    simplices = [(v,) for v in range(vertices)]
    for d in range(1, max_dim + 1):
        for s in itertools.combinations(range(vertices), d + 1):
            faces = [s[:i] + s[i + 1:] for i in range(d + 1)]
            if all(f in grade for f in faces) and rng.random() < density:
                grade[s] = max(max(grade[f] for f in faces), rng.randint(1, grades))
                simplices.append(s)
    return simplicial_complex(simplices, grade, coeff)


def simplicial_complex(simplices, grade: dict, coeff: str = "z") -> FilteredComplex:
    cells = []
    for s in simplices:
        bd = tuple(("-".join(map(str, s[:i] + s[i + 1:])), (-1) ** i) for i in range(len(s))) \
            if len(s) > 1 else ()
        cells.append(Cell("-".join(map(str, s)), len(s) - 1, grade[s], bd))
    return FilteredComplex(cells, coeff, check=False)


def random_torsion_complex(rng: random.Random, coeff: str = "zmod:12", grades: int = 4,
                           sizes=(3, 4, 3, 2), max_coeff: int = 4) -> FilteredComplex:
    """A random cell complex whose boundaries carry integer multiplicities.

    Each new cell's boundary is a small random combination of integer cycles
    supported on earlier-or-equal grades, so boundary squared vanishes over Z.
    """
    cells: list = []
    prev: list = []  # (id, grade) of the previous dimension
    prev_cols: list = []  # boundaries of previous-dimension cells over their own faces
    prev_faces: list = []
    for d, k in enumerate(sizes):
        cur = []
        cur_cols = []
        for i in range(k):
            g = rng.randint(1, grades)
            cid = f"c{d}_{i}"
            bd: dict = {}
            if d > 0:
                avail = [j for j, (_, gj) in enumerate(prev) if gj <= g]
                if avail:
                    if d == 1:
                        basis = [tuple(int(a == b) for b in range(len(avail))) for a in range(len(avail))]
                    else:
                        nrows = len(prev_faces)
                        cols = [prev_cols[j] for j in avail]
                        dense = [tuple(c.get(r, 0) for r in range(nrows)) for c in cols]
                        basis = kernel_columns(dense, nrows)
                    if basis:
                        picks = rng.sample(range(len(basis)), min(len(basis), rng.randint(1, 2)))
                        for t in picks:
                            c = rng.choice([-1, 1]) * rng.randint(1, max_coeff)
                            for pos, x in enumerate(basis[t]):
                                if x:
                                    j = avail[pos]
                                    bd[j] = bd.get(j, 0) + c * x
            bd = {j: x for j, x in bd.items() if x}
            cells.append(Cell(cid, d, g, tuple((prev[j][0], x) for j, x in sorted(bd.items()))))
            cur.append((cid, g))
            cur_cols.append(bd)
        prev_faces = prev
        prev, prev_cols = cur, cur_cols
    return FilteredComplex(cells, coeff)


def grid_complex(rows: int, cols: int, coeff: str = "fp:2", seed: int = 0) -> FilteredComplex:
    """A triangulated rows x cols grid with random lower-star style grades 1..8."""
    rng = random.Random(seed)
    grade: dict = {}
    simplices = []
    vid = lambda i, j: i * (cols + 1) + j  # noqa: E731
    for i in range(rows + 1):
        for j in range(cols + 1):
            s = (vid(i, j),)
            grade[s] = rng.randint(1, 8)
            simplices.append(s)
    edges = set()
    tris = []
    for i in range(rows):
        for j in range(cols):
            a, b, c, d = vid(i, j), vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1)
            for t in ((a, b, d), (a, c, d)):
                if rng.random() < 0.85:
                    tris.append(tuple(sorted(t)))
            for e in ((a, b), (a, c), (a, d)):
                edges.add(tuple(sorted(e)))
    for i in range(rows + 1):
        for j in range(cols):
            edges.add(tuple(sorted((vid(i, j), vid(i, j + 1)))))
    for j in range(cols + 1):
        for i in range(rows):
            edges.add(tuple(sorted((vid(i, j), vid(i + 1, j)))))
    for e in sorted(edges):
        grade[e] = max(grade[(e[0],)], grade[(e[1],)])
        simplices.append(e)
    for t in tris:
        grade[t] = max(grade[(t[0], t[1])], grade[(t[0], t[2])], grade[(t[1], t[2])])
        simplices.append(t)
    return simplicial_complex(simplices, grade, coeff)
