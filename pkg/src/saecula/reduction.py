"""Column reduction engines for persistence sweeps.

The F_p reduction has a compiled implementation (``saecula._reduce``) and a
pure-Python twin (``saecula._reduce_py``) with identical input and output.  The
compiled one is used when it imports, unless ``SAECULA_KERNEL=python`` is set.
Integer and rational reductions are pure Python.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import _reduce_py
from .intlinalg import xgcd

try:
    from . import _reduce as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("SAECULA_KERNEL", "").lower() != "python":
    BACKEND = "cython"
else:
    BACKEND = "python"


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


@dataclass
class Reduction:
    lows: list  # low row of each reduced column, -1 if it reduced to zero
    columns: list  # reduced columns as {row: value}
    v: list | None  # column j of the transform as {column: value}


def _csc(columns):
    indptr = [0]
    indices = []
    data = []
    for c in columns:
        for r in sorted(c):
            indices.append(r)
            data.append(c[r])
        indptr.append(len(indices))
    return indptr, indices, data


def _dicts(csc):
    indptr, indices, data = csc
    return [
        {indices[k]: data[k] for k in range(indptr[j], indptr[j + 1])}
        for j in range(len(indptr) - 1)
    ]


def reduce_mod_p(columns: list[dict], nrows: int, p: int, track: bool = False,
                 backend: str | None = None) -> Reduction:
    """Left-to-right column reduction of sparse columns over F_p."""
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        impl = _compiled.reduce_mod_p
    elif backend == "python":
        impl = _reduce_py.reduce_mod_p
    else:
        raise ValueError(f"unknown backend {backend!r}")
    lows, red, v = impl(nrows, *_csc(columns), p, bool(track))
    return Reduction(list(lows), _dicts(red), _dicts(v) if v is not None else None)


def _axpy(dst: dict, src: dict, c) -> None:
    """dst += c * src, dropping zeros."""
    for r, x in src.items():
        y = dst.get(r, 0) + c * x
        if y:
            dst[r] = y
        else:
            dst.pop(r, None)


class IntegerEchelon:
    """Incremental column echelon over Z keyed by low row, using gcd steps.

    Each stored column has a distinct low; adding a column either installs a
    new low, merges into an existing one via a unimodular 2x2 step, or
    reduces to zero (returning its payload, which is then a kernel vector).
    """

    def __init__(self):
        self.pivot_of: dict = {}  # low -> (column, payload)
        self.touched: set = set()

    def insert(self, col: dict, payload: dict | None = None):
        col = {r: x for r, x in col.items() if x}
        while col:
            low = max(col)
            entry = self.pivot_of.get(low)
            if entry is None:
                self.pivot_of[low] = (col, payload)
                self.touched.add(low)
                return None
            piv, ppay = entry
            a, b = piv[low], col[low]
            if b % a == 0:
                q = b // a
                _axpy(col, piv, -q)
                if payload is not None:
                    _axpy(payload, ppay, -q)
                continue
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = {}
            _axpy(new_piv, piv, s)
            _axpy(new_piv, col, t)
            new_col = {}
            _axpy(new_col, piv, bg)
            _axpy(new_col, col, -ag)
            if payload is not None:
                new_ppay = {}
                _axpy(new_ppay, ppay, s)
                _axpy(new_ppay, payload, t)
                new_pay = {}
                _axpy(new_pay, ppay, bg)
                _axpy(new_pay, payload, -ag)
                ppay, payload = new_ppay, new_pay
            self.pivot_of[low] = (new_piv, ppay)
            self.touched.add(low)
            col = new_col
        return payload if payload is not None else {}


class FieldEchelon:
    """Incremental column echelon over a field (pivots never change once set)."""

    def __init__(self, fld):
        self.field = fld
        self.pivot_of: dict = {}
        self.touched: set = set()

    def insert(self, col: dict, payload: dict | None = None):
        F = self.field
        col = {r: F.coerce(x) for r, x in col.items() if F.coerce(x)}
        while col:
            low = max(col)
            entry = self.pivot_of.get(low)
            if entry is None:
                self.pivot_of[low] = (col, payload)
                self.touched.add(low)
                return None
            piv, ppay = entry
            c = F.mul(col[low], F.inv(piv[low]))
            _field_axpy(F, col, piv, c)
            if payload is not None:
                _field_axpy(F, payload, ppay, c)
        return payload if payload is not None else {}


def _field_axpy(F, dst: dict, src: dict, c) -> None:
    """dst -= c * src over the field F."""
    for r, x in src.items():
        y = F.coerce(dst.get(r, 0) - c * x)
        if y:
            dst[r] = y
        else:
            dst.pop(r, None)
