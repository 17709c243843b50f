"""Exact linear algebra over Q and F_p, mirroring the integer kernel's interface."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def mul(self, a, b):
        return a * b % self.p

    def sub_scaled(self, u: Sequence, v: Sequence, c) -> list:
        p = self.p
        return [(a - c * b) % p for a, b in zip(u, v)]

    def scale(self, u: Sequence, c) -> list:
        p = self.p
        return [a * c % p for a in u]


@dataclass(frozen=True)
class Rationals:
    @property
    def characteristic(self) -> int:
        return 0

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x):
        return 1 / Fraction(x)

    def mul(self, a, b):
        return a * b

    def sub_scaled(self, u, v, c) -> list:
        return [a - c * b for a, b in zip(u, v)]

    def scale(self, u, c) -> list:
        return [a * c for a in u]


def _echelon(field, columns: list[list], pivot_rows: int):
    """Reduced column echelon on the first ``pivot_rows`` rows.

    Returns (pivots, rest) in the same sense as the integer version; pivots
    are normalized to 1 and their pivot rows are cleared in every other pivot.
    """
    active = [c for c in columns if any(c)]
    pivots: list[list] = []
    piv_rows: list[int] = []
    rest: list[list] = []
    for i in range(pivot_rows):
        piv = None
        remaining = []
        for c in active:
            if not c[i]:
                remaining.append(c)
                continue
            if piv is None:
                piv = field.scale(c, field.inv(c[i]))
                continue
            c = field.sub_scaled(c, piv, c[i])
            if any(c[:pivot_rows]):
                remaining.append(c)
            elif any(c):
                rest.append(c)
        if piv is not None:
            for k, c in enumerate(pivots):
                if c[i]:
                    pivots[k] = field.sub_scaled(c, piv, c[i])
            pivots.append(piv)
            piv_rows.append(i)
        active = remaining
    rest.extend(c for c in active if any(c))
    return pivots, rest


def rref_columns(field, columns: Sequence[Sequence], nrows: int) -> list[tuple]:
    """Canonical basis of the column span: reduced column echelon form."""
    pivots, _ = _echelon(field, [[field.coerce(x) for x in c] for c in columns], nrows)
    return [tuple(c) for c in pivots]


def kernel_columns(field, columns: Sequence[Sequence], nrows: int) -> list[tuple]:
    n = len(columns)
    one = field.coerce(1)
    zero = field.coerce(0)
    aug = [[field.coerce(x) for x in c] + [one if k == j else zero for k in range(n)]
           for j, c in enumerate(columns)]
    _, rest = _echelon(field, aug, nrows)
    return rref_columns(field, [c[nrows:] for c in rest], n)


def solve_rref_columns(field, basis: Sequence[Sequence], v: Sequence) -> list | None:
    """Coordinates of v in a reduced echelon basis, or None if v is outside the span."""
    v = [field.coerce(x) for x in v]
    coords = []
    for b in basis:
        i = next(k for k, x in enumerate(b) if x)
        c = v[i]
        coords.append(c)
        if c:
            v = field.sub_scaled(v, b, c)
    if any(v):
        return None
    return coords


def pivot_rows(basis: Sequence[Sequence]) -> list[int]:
    return [next(k for k, x in enumerate(b) if x) for b in basis]
