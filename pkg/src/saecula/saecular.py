"""Saecular filtrations, the common-dimension table, and interval factors.

For a chain diagram d of length n:

* image filtration:  Khat(p)_a = D_a for a <= p, image of f(p <= a) for a > p;
* kernel filtration: K(q)_a = ker f(a <= q) for a < q, 0 for a >= q, and
  K(n+1) = d;
* A[p][q] = Khat(p) meet K(q), with row and column 0 set to zero;
* the factor at [p, q) is A[p][q] / (A[p][q-1] join A[p-1][q]).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abgrp import (
    JhVector,
    QuotientShape,
    ZERO_JH,
    hom_image,
    hom_kernel,
    hom_preimage,
    jh_vector,
    quotient_shape,
    quotient_with_generators,
    sub_join,
    sub_meet,
)
from .diagram import (
    ChainDiagram,
    DiagramError,
    Interval,
    SubDiagram,
    is_interval_functor,
    join_diagrams,
    sub_join_diag,
    sub_meet_diag,
)
from .parallel import ordered_map


class NaturalityFailure(RuntimeError):
    """A factor or series step failed to be the expected interval functor."""


@dataclass
class SaecularFiltrations:
    diagram: ChainDiagram
    khat: dict  # p -> SubDiagram, p = 1..n+1
    kernel: dict  # q -> SubDiagram, q = 1..n+1


def saecular_filtrations(d: ChainDiagram) -> SaecularFiltrations:
    n = d.length
    khat = {}
    for p in range(1, n + 1):
        parts = []
        for a in range(1, n + 1):
            parts.append(d.obj(a).full() if a <= p else hom_image(d.composite(p, a), d.obj(p).full()))
        khat[p] = SubDiagram(d, parts, check=False)
    khat[n + 1] = d.full()
    kernel = {}
    for q in range(1, n + 1):
        parts = []
        for a in range(1, n + 1):
            parts.append(hom_kernel(d.composite(a, q)) if a < q else d.obj(a).zero())
        kernel[q] = SubDiagram(d, parts, check=False)
    kernel[n + 1] = d.full()
    return SaecularFiltrations(d, khat, kernel)


@dataclass
class CdfTable:
    """A[p][q] for 0 <= p, q <= n + 1, stored in ``grid[(p, q)]``."""

    diagram: ChainDiagram
    filtrations: SaecularFiltrations
    grid: dict

    @property
    def n(self) -> int:
        return self.diagram.length

    def __getitem__(self, pq: tuple[int, int]) -> SubDiagram:
        return self.grid[pq]


def cdf(filts: SaecularFiltrations) -> CdfTable:
    d = filts.diagram
    n = d.length
    zero = d.zero()
    keys = [(p, q) for p in range(0, n + 2) for q in range(0, n + 2)]

    def cell(pq):
        p, q = pq
        return zero if p == 0 or q == 0 else sub_meet_diag(filts.khat[p], filts.kernel[q])

    return CdfTable(d, filts, dict(zip(keys, ordered_map(cell, keys))))


def all_intervals(n: int) -> list[Interval]:
    """Every interval [p, q) with 1 <= p < q <= n + 1, in lexicographic order."""
    return [Interval(p, q) for p in range(1, n + 1) for q in range(p + 1, n + 2)]


# ---------------------------------------------------------------------------
# factors and barcodes


@dataclass
class IntervalFactor:
    support: Interval
    num: SubDiagram
    den: SubDiagram
    shape: QuotientShape
    generators: list  # ambient vectors in D_p generating the cyclic summands

    @property
    def jh(self) -> JhVector:
        return jh_vector(self.shape)


def factor_pair(table: CdfTable, iv: Interval) -> tuple[SubDiagram, SubDiagram]:
    p, q = iv.p, iv.q
    num = table[(p, q)]
    den = sub_join_diag(table[(p, q - 1)], table[(p - 1, q)])
    return num, den


def interval_factor(table: CdfTable, iv: Interval, verify: bool = True) -> IntervalFactor:
    """The saecular factor at ``iv``; raises NaturalityFailure if it is not an interval functor there."""
    if iv.q > table.n + 1:
        raise DiagramError(f"interval {iv} exceeds diagram length {table.n}")
    num, den = factor_pair(table, iv)
    if verify:
        support = is_interval_functor(table.diagram, num, den)
        if support is False or (support is not None and support != iv):
            raise NaturalityFailure(f"factor at {iv.label(table.n)} is not supported on that interval")
    shape, gens = quotient_with_generators(num.part(iv.p), den.part(iv.p))
    return IntervalFactor(iv, num, den, shape, gens)


def barcode(d: ChainDiagram, verify: bool = True) -> dict:
    """Nonzero saecular factors keyed by interval, ordered by (p, q)."""
    table = cdf(saecular_filtrations(d))
    return barcode_from_table(table, verify)


def barcode_from_table(table: CdfTable, verify: bool = True) -> dict:
    factors = ordered_map(lambda iv: interval_factor(table, iv, verify), all_intervals(table.n))
    return {f.support: f for f in factors if not f.shape.is_trivial}


# ---------------------------------------------------------------------------
# downsets, naturality, lattice homomorphism


def _predecessors(iv: Interval) -> list[Interval]:
    out = []
    if iv.p > 1:
        out.append(Interval(iv.p - 1, iv.q))
    if iv.q - 1 > iv.p:
        out.append(Interval(iv.p, iv.q - 1))
    return out


def is_downset(intervals: Iterable[Interval]) -> bool:
    s = set(intervals)
    return all(pr in s for iv in s for pr in _predecessors(iv))


def downset_closure(gens: Iterable[Interval]) -> frozenset:
    out = set()
    stack = list(gens)
    while stack:
        iv = stack.pop()
        if iv not in out:
            out.add(iv)
            stack.extend(_predecessors(iv))
    return frozenset(out)


def principal_downset(iv: Interval) -> frozenset:
    return downset_closure([iv])


def strict_downset(iv: Interval) -> frozenset:
    return downset_closure(_predecessors(iv))


def all_downsets(n: int) -> list[frozenset]:
    """Every downset of the interval poset (antichain enumeration; small n only)."""
    ivs = all_intervals(n)
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for s in frontier:
            for iv in ivs:
                if iv not in s and all(pr in s for pr in _predecessors(iv)):
                    t = s | {iv}
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def random_downset(n: int, rng: random.Random) -> frozenset:
    ivs = all_intervals(n)
    k = rng.randint(0, min(3, len(ivs)))
    return downset_closure(rng.sample(ivs, k))


def omega_on_downset(table: CdfTable, downset: Iterable[Interval]) -> SubDiagram:
    """Join of A[p][q] over the downset."""
    items = list(downset)
    if not is_downset(items):
        raise DiagramError("not a downset of the interval poset")
    return join_diagrams((table[(iv.p, iv.q)] for iv in items), table.diagram)


@dataclass
class CheckReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_naturality(filts: SaecularFiltrations, downset: Iterable[Interval],
                     table: CdfTable | None = None) -> CheckReport:
    """Verify pushforward/pullback compatibility of |S| with the filtrations.

    f(a<=b)(|S|_a) == |S|_b meet Khat(a)_b and
    f(a<=b)^-1(|S|_b) == |S|_a join K(b)_a, for all a <= b.
    """
    if table is None:
        table = cdf(filts)
    d = filts.diagram
    S = omega_on_downset(table, downset)
    rep = CheckReport()
    for a in range(1, d.length + 1):
        for b in range(a, d.length + 1):
            f = d.composite(a, b)
            push = hom_image(f, S.part(a))
            if push != sub_meet(S.part(b), filts.khat[a].part(b)):
                rep.failures.append(("pushforward", a, b))
            pull = hom_preimage(f, S.part(b))
            if pull != sub_join(S.part(a), filts.kernel[b].part(a)):
                rep.failures.append(("pullback", a, b))
            rep.checked += 2
    return rep


def check_lattice_hom(table: CdfTable, pairs: Iterable[tuple]) -> CheckReport:
    """Omega sends union to join and intersection to meet on the given downset pairs."""
    rep = CheckReport()
    cache: dict = {}

    def om(s):
        s = frozenset(s)
        if s not in cache:
            cache[s] = omega_on_downset(table, s)
        return cache[s]

    for S, T in pairs:
        S, T = frozenset(S), frozenset(T)
        if om(S | T) != sub_join_diag(om(S), om(T)):
            rep.failures.append(("join", sorted(S), sorted(T)))
        if om(S & T) != sub_meet_diag(om(S), om(T)):
            rep.failures.append(("meet", sorted(S), sorted(T)))
        rep.checked += 2
    return rep


# ---------------------------------------------------------------------------
# subsaecular series


def default_linearization(n: int) -> list[Interval]:
    return all_intervals(n)


def random_linearization(n: int, rng: random.Random) -> list[Interval]:
    """A uniformly chosen available interval at each step (a random linear extension)."""
    remaining = set(all_intervals(n))
    placed: set = set()
    out = []
    while remaining:
        ready = sorted(iv for iv in remaining if all(pr in placed for pr in _predecessors(iv)))
        iv = rng.choice(ready)
        out.append(iv)
        placed.add(iv)
        remaining.discard(iv)
    return out


def is_linear_extension(lin: Sequence[Interval], n: int) -> bool:
    if sorted(lin) != all_intervals(n):
        return False
    seen: set = set()
    for iv in lin:
        if any(pr not in seen for pr in _predecessors(iv)):
            return False
        seen.add(iv)
    return True


@dataclass
class SeriesStep:
    interval: Interval
    sub: SubDiagram
    shape: QuotientShape


@dataclass
class SubsaecularSeries:
    linearization: list
    chain: list  # Sigma_0 .. Sigma_N
    reduced: list  # SeriesStep for each strict increase

    @property
    def labels(self) -> list[SubDiagram]:
        return [s.sub for s in self.reduced]


def subsaecular_series(table: CdfTable, lin: Sequence[Interval] | None = None,
                       verify: bool = True) -> SubsaecularSeries:
    n = table.n
    lin = list(lin) if lin is not None else default_linearization(n)
    if not is_linear_extension(lin, n):
        raise DiagramError("not a linear extension of the interval poset")
    prev = table.diagram.zero()
    chain = [prev]
    reduced = []
    for iv in lin:
        cur = sub_join_diag(prev, table[(iv.p, iv.q)])
        chain.append(cur)
        if cur != prev:
            if verify:
                support = is_interval_functor(table.diagram, cur, prev)
                if support != iv:
                    raise NaturalityFailure(f"series step at {iv.label(n)} is not supported there")
            shape = quotient_shape(cur.part(iv.p), prev.part(iv.p))
            reduced.append(SeriesStep(iv, cur, shape))
        prev = cur
    return SubsaecularSeries(lin, chain, reduced)


# ---------------------------------------------------------------------------
# fields: explicit interval decomposition


@dataclass
class FieldDecomposition:
    threads: dict  # Interval -> list of {index: vector}


def field_decompose(d: ChainDiagram) -> FieldDecomposition:
    """Interval decomposition by pushing factor prebases forward along the diagram."""
    if not d.coeff.is_field:
        raise DiagramError("explicit decomposition needs field coefficients")
    n = d.length
    threads: dict = {}
    per_index: dict = {a: [] for a in range(1, n + 1)}
    for iv, fac in barcode(d).items():
        lst = []
        for v in fac.generators:
            th = {}
            for a in range(iv.p, min(iv.q, n + 1)):
                th[a] = d.composite(iv.p, a).apply(v)
                per_index[a].append(th[a])
            lst.append(th)
        threads[iv] = lst
    for a in range(1, n + 1):
        obj = d.obj(a)
        dim = obj.shape().free_rank
        if len(per_index[a]) != dim or obj.subgroup(per_index[a]) != obj.full():
            raise NaturalityFailure(f"threads do not form a basis at index {a}")
    return FieldDecomposition(threads)


# ---------------------------------------------------------------------------
# type-B persistence diagram


def rank_function(d: ChainDiagram, iv: Interval) -> JhVector:
    """Composition-series vector of the image of f(p <= q-1)."""
    if iv.q > d.length + 1:
        raise DiagramError(f"interval {iv} exceeds diagram length {d.length}")
    last = iv.q - 1
    img = hom_image(d.composite(iv.p, last), d.obj(iv.p).full())
    jh = jh_vector(quotient_shape(img, d.obj(last).zero()))
    if not jh.finite_length:
        raise ValueError("rank function needs finite-length objects")
    return jh


def type_b_pd(d: ChainDiagram, cross_check: bool = False) -> dict:
    """Moebius inversion of the rank function, keyed by interval (nonzero entries only)."""
    n = d.length
    R: dict = {}
    for iv in all_intervals(n):
        R[(iv.p, iv.q)] = rank_function(d, iv)

    def r(p, q):
        if p < 1 or q > n + 1 or p >= q:
            return ZERO_JH
        return R[(p, q)]

    out = {}
    for iv in all_intervals(n):
        p, q = iv.p, iv.q
        v = r(p, q) - r(p - 1, q) - r(p, q + 1) + r(p - 1, q + 1)
        if not v.is_nonnegative:
            raise ValueError(f"negative persistence diagram coordinate at {iv.label(n)}: {v}")
        if not v.is_zero:
            out[iv] = v
    if cross_check:
        via_factors = {iv: f.jh for iv, f in barcode(d).items()}
        if via_factors != out:
            raise NaturalityFailure("Moebius inversion disagrees with the saecular factors")
    return out
