"""Leray-Serre spectral-sequence terms of a filtered complex, and their enumeration.

With F_k = C_m(X_k) (clamped: 0 for k <= 0, everything for k >= n) and m = p + q:

    Z^r_p = F_p & d^-1(F_{p-r})        (in degree m, d: C_m -> C_{m-1})
    B^r_p = F_p & d(F_{p+r})           (d: C_{m+1} -> C_m)
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} | B^{r-1}_p)

Each term's composition-series vector is predicted from the homology factors
tau^m[a, b) and the zero-length factors delta^m_x (see ``predicted``); the
enumeration check compares both sides.  It needs finite-length coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgrp import (
    JhVector,
    QuotientShape,
    SubgroupElt,
    ZERO_JH,
    hom_image,
    hom_preimage,
    jh_vector,
    quotient_shape,
    sub_join,
    sub_meet,
)
from .homology import (
    FilteredComplex,
    boundary_map,
    chain_group,
    degenerate_factors,
    filtration_step,
    homology_barcode,
)


class InfiniteLengthError(ValueError):
    """Composition-series counting was requested over infinite-length coefficients."""


def _clamp(X: FilteredComplex, k: int) -> int:
    return max(0, min(k, X.n))


def _z(X: FilteredComplex, m: int, p: int, k: int) -> SubgroupElt:
    """F_p & d^-1(F_k) in degree m."""
    p, k = _clamp(X, p), _clamp(X, k)
    key = ("lsZ", m, p, k)
    if key not in X._cache:
        pre = hom_preimage(boundary_map(X, m), filtration_step(X, m - 1, k)) if m > 0 \
            else chain_group(X, 0).full()
        X._cache[key] = sub_meet(filtration_step(X, m, p), pre)
    return X._cache[key]


def _b(X: FilteredComplex, m: int, p: int, k: int) -> SubgroupElt:
    """F_p & d(F_k) in degree m."""
    p, k = _clamp(X, p), _clamp(X, k)
    key = ("lsB", m, p, k)
    if key not in X._cache:
        img = hom_image(boundary_map(X, m + 1), filtration_step(X, m + 1, k))
        X._cache[key] = sub_meet(filtration_step(X, m, p), img)
    return X._cache[key]


@dataclass
class SpectralTerm:
    p: int
    q: int
    r: int
    z: SubgroupElt
    b: SubgroupElt
    e_num: SubgroupElt
    e_den: SubgroupElt

    @property
    def degree(self) -> int:
        return self.p + self.q

    @property
    def z_shape(self) -> QuotientShape:
        return quotient_shape(self.z, self.z.parent.zero())

    @property
    def b_shape(self) -> QuotientShape:
        return quotient_shape(self.b, self.b.parent.zero())

    @property
    def e_shape(self) -> QuotientShape:
        return quotient_shape(self.e_num, self.e_den)


def ls_terms(X: FilteredComplex, p: int, q: int, r: int) -> SpectralTerm:
    m = p + q
    if not 0 <= p <= X.n:
        raise ValueError(f"filtration index {p} outside 0..{X.n}")
    if m < 0:
        raise ValueError("negative total degree")
    if r < 0:
        raise ValueError("negative page")
    z = _z(X, m, p, p - r)
    b = _b(X, m, p, p + r)
    den = sub_join(_z(X, m, p - 1, p - r), _b(X, m, p, p + r - 1))
    return SpectralTerm(p, q, r, z, b, z, den)


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class _Census:
    tau: dict  # degree -> {(a, b): JhVector}
    delta: dict  # degree -> {x: JhVector}

    def t(self, m, a, b) -> JhVector:
        return self.tau.get(m, {}).get((a, b), ZERO_JH)

    def d(self, m, x) -> JhVector:
        return self.delta.get(m, {}).get(x, ZERO_JH)


def _census(X: FilteredComplex) -> _Census:
    tau, delta = {}, {}
    for m in range(0, X.max_dim + 1):
        tau[m] = {(iv.p, iv.q): jh_vector(f.shape) for iv, f in homology_barcode(X, m).items()}
        delta[m] = {x: jh_vector(s) for x, s in degenerate_factors(X, m).items()}
    return _Census(tau, delta)


def _total(items) -> JhVector:
    out = ZERO_JH
    for v in items:
        out = out + v
    return out


def predicted(X: FilteredComplex, census: _Census, m: int, p: int, r: int) -> dict:
    """Composition-series vectors of Z^r_p, B^r_p and (for r >= 1) E^r_p in degree m."""
    n = X.n
    t, d = census.t, census.d
    z = _total(
        [t(m, a, b) for a in range(1, p + 1) for b in range(a + 1, n + 2)]
        + [d(m, x) for x in range(1, p + 1)]
        + [t(m - 1, a, b) for a in range(1, p - r + 1) for b in range(a + 1, p + 1)]
        + [d(m - 1, x) for x in range(1, p - r + 1)]
    )
    top = min(p + r, n)
    b_ = _total(
        [t(m, a, b) for a in range(1, p + 1) for b in range(a + 1, top + 1)]
        + [d(m, x) for x in range(1, p + 1)]
    )
    out = {"z": z, "b": b_}
    if r >= 1:
        out["e"] = _total(
            [t(m, p, b) for b in range(min(p + r, n + 1), n + 2)]
            + [t(m - 1, a, p) for a in range(1, p - r + 1)]
        )
    return out


@dataclass
class EnumerationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def ls_enumeration_check(X: FilteredComplex, max_page: int | None = None) -> EnumerationReport:
    """Compare every Z^r_p, B^r_p, E^r_p against its predicted composition-series vector."""
    if not X.coeff.finite_length:
        raise InfiniteLengthError("enumeration needs finite-length coefficients (Q, F_p or Z/N)")
    census = _census(X)
    rep = EnumerationReport()
    pages = range(0, (X.n + 1 if max_page is None else max_page) + 1)
    for m in range(0, X.max_dim + 1):
        for p in range(1, X.n + 1):
            for r in pages:
                term = ls_terms(X, p, m - p, r)
                got = {"z": jh_vector(term.z_shape), "b": jh_vector(term.b_shape)}
                if r >= 1:
                    got["e"] = jh_vector(term.e_shape)
                want = predicted(X, census, m, p, r)
                for key, v in got.items():
                    rep.checked += 1
                    if v != want[key]:
                        rep.failures.append((key, m, p, r, str(want[key]), str(v)))
    return rep
