"""Exact integer matrix kernel: Hermite and Smith normal forms, kernels, membership.

All arithmetic is on Python ints, so nothing overflows.  Lattices are column
spans throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Column = tuple


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major matrix of exact numbers (ints, or field elements)."""

    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = [tuple(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> IntMatrix:
        columns = [tuple(c) for c in columns]
        if any(len(c) != nrows for c in columns):
            raise ValueError("column length does not match row count")
        ncols = len(columns)
        return cls(nrows, ncols, tuple(columns[j][i] for i in range(nrows) for j in range(ncols)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(self.columns(), self.rows) if self.cols else IntMatrix(0, self.rows, ())

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = other.columns()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in ocols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[int]) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix | None = None

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries, in divisibility order."""
        return [d for d in self.diagonal if d != 0]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = s*a + t*b = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _combine(u: list, v: list, i: int) -> tuple[list, list]:
    """Unimodular 2-column operation leaving gcd at row i in the first output."""
    a, b = u[i], v[i]
    if b % a == 0:
        q = b // a
        return u, [y - q * x for x, y in zip(u, v)]
    g, s, t = xgcd(a, b)
    ag, bg = a // g, b // g
    new_u = [s * x + t * y for x, y in zip(u, v)]
    new_v = [bg * x - ag * y for x, y in zip(u, v)]
    return new_u, new_v


def _echelon(columns: list[list], pivot_rows: int) -> tuple[list[list], list[list]]:
    """Column-echelonize on the first ``pivot_rows`` rows using unimodular steps.

    Returns (pivots, rest): pivot columns in order of increasing pivot row,
    and the columns whose first ``pivot_rows`` entries became zero.
    """
    active = [c for c in columns if any(c)]
    pivots: list[list] = []
    rest: list[list] = []
    for i in range(pivot_rows):
        piv = None
        remaining = []
        for c in active:
            if c[i] == 0:
                remaining.append(c)
                continue
            if piv is None:
                piv = c
                continue
            piv, c = _combine(piv, c, i)
            if any(c[:pivot_rows]):
                remaining.append(c)
            elif any(c):
                rest.append(c)
        if piv is not None:
            if piv[i] < 0:
                piv = [-x for x in piv]
            pivots.append(piv)
            piv_row = i
            p = piv[i]
            for c in pivots[:-1]:
                q = c[piv_row] // p
                if q:
                    for k in range(len(c)):
                        c[k] -= q * piv[k]
        active = remaining
    for c in active:
        if any(c):
            rest.append(c)
    return pivots, rest


def hnf_columns(columns: Iterable[Sequence[int]], nrows: int) -> list[tuple]:
    """Canonical column HNF of the lattice spanned by ``columns``."""
    pivots, _ = _echelon([list(c) for c in columns], nrows)
    return [tuple(c) for c in pivots]


def hnf(M: IntMatrix) -> IntMatrix:
    """Canonical column-style Hermite normal form of the column lattice of M.

    Pivots are the topmost nonzero entries, strictly descending down the
    columns, positive; entries left of a pivot lie in [0, pivot).  Zero columns
    are dropped, so the result has ``rank(M)`` columns.
    """
    return IntMatrix.from_columns(hnf_columns(M.columns(), M.rows), M.rows)


def _pivot_rows(cols: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for c in cols:
        for i, x in enumerate(c):
            if x:
                out.append(i)
                break
    return out


def solve_hnf_columns(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of v in an echelon basis, or None if v is not in the lattice."""
    v = list(v)
    coords = []
    pivots = _pivot_rows(basis)
    j = 0
    for i in range(len(v)):
        if j < len(basis) and pivots[j] == i:
            b = basis[j]
            q, r = divmod(v[i], b[i])
            if r:
                return None
            if q:
                for k in range(i, len(v)):
                    v[k] -= q * b[k]
            coords.append(q)
            j += 1
        elif v[i]:
            return None
    return coords


def in_column_lattice(M: IntMatrix, v: Sequence[int]) -> bool:
    """True iff v is an integer combination of the columns of M."""
    if len(v) != M.rows:
        raise ValueError(f"vector of length {len(v)} against {M.rows} rows")
    return solve_hnf_columns(hnf_columns(M.columns(), M.rows), v) is not None


def kernel_columns(columns: Sequence[Sequence[int]], nrows: int) -> list[tuple]:
    """Saturated basis (in HNF) of {x : sum x_j columns[j] = 0}."""
    n = len(columns)
    aug = [list(c) + [int(k == j) for k in range(n)] for j, c in enumerate(columns)]
    _, rest = _echelon(aug, nrows)
    return hnf_columns([c[nrows:] for c in rest], n)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a saturated basis of the integer kernel of M."""
    return IntMatrix.from_columns(kernel_columns(M.columns(), M.rows), M.cols)


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms: U @ M @ V == D."""
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [[int(i == j) for j in range(m)] for i in range(m)]  # U^-1

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for r in W:
            r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]
        for r in W:
            r[src] += q * r[dst]

    def add_col(dst, src, q):
        for r in A:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, None)
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), None, j)
                if best[1] is not None:
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for r in W:
                r[t] = -r[t]

    return SmithDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(A, n), IntMatrix.from_rows(V, n),
        IntMatrix.from_rows(W, m),
    )


def rank(M: IntMatrix) -> int:
    return len(hnf_columns(M.columns(), M.rows))
