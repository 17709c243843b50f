"""Acceptance criteria, one pass/fail line each.

Run with pytest (lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import standard_persistence  # noqa: E402
from saecula.abgrp import QuotientShape, jh_vector, quotient_shape, sub_join  # noqa: E402
from saecula.diagram import Interval  # noqa: E402
from saecula.fingroup import coset_barcode, g_saecular, is_normal, random_group_diagram, whole  # noqa: E402
from saecula.homology import chain_in_subgroup, cycle_boundary_filtrations, homology_barcode  # noqa: E402
from saecula.saecular import (  # noqa: E402
    all_downsets,
    barcode,
    barcode_from_table,
    cdf,
    check_lattice_hom,
    random_downset,
    random_linearization,
    saecular_filtrations,
    subsaecular_series,
    type_b_pd,
)
from saecula.samples import (  # noqa: E402
    cyclic_chain,
    disk_complex,
    grid_complex,
    random_chain_diagram,
    random_simplicial_complex,
    random_torsion_complex,
)
from saecula.spectral import ls_enumeration_check  # noqa: E402

SEED = 20240
RESULTS: list[str] = []


def record(number, title, ok, detail, elapsed):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({elapsed:.2f} s)"
    RESULTS.append(line)
    return ok


def _torsion_diagram_corpus():
    rng = random.Random(SEED + 4)
    return [random_chain_diagram(rng, max_length=6, max_rank=4, finite=True) for _ in range(200)]


def test_criterion_1_cyclic_fixture():
    t0 = time.perf_counter()
    d = cyclic_chain()
    table = cdf(saecular_filtrations(d))
    bars = {iv: f.shape for iv, f in barcode_from_table(table).items()}
    want = {Interval(1, 2): QuotientShape(0, (3,)), Interval(1, 3): QuotientShape(0, (3,)),
            Interval(2, 4): QuotientShape(0, (2,)), Interval(3, 4): QuotientShape(0, (2,))}

    def tup(sub):
        return tuple(quotient_shape(s, s.parent.zero()).invariant_factors for s in sub.parts)

    L1, L2, L3, L4 = ((3,), (), ()), ((9,), (3,), ()), ((9,), (6,), (2,)), ((9,), (6,), (4,))
    expected = {(1, 2): L1, (1, 3): L2, (1, 4): L2, (2, 2): L1, (2, 3): L2, (2, 4): L3,
                 (3, 2): L1, (3, 3): L2, (3, 4): L4, (4, 2): L1, (4, 3): L2, (4, 4): L4}
    zero = ((), (), ())
    grid_ok = all(tup(table[k]) == expected.get(k, zero) for k in table.grid)
    elapsed = time.perf_counter() - t0
    ok = bars == want and grid_ok and elapsed < 1
    assert record(1, "cyclic fixture", ok, f"barcode {'exact' if bars == want else 'WRONG'}, "
                  f"grid {'matches' if grid_ok else 'DIFFERS'}", elapsed)


def test_criterion_2_disk_fixture():
    t0 = time.perf_counter()
    X = disk_complex("z")
    bars = homology_barcode(X, 1)
    want = {Interval(1, 2): QuotientShape(1, ()), Interval(1, 3): QuotientShape(0, (2,)),
            Interval(1, 4): QuotientShape(0, (2,))}
    shapes_ok = {iv: f.shape for iv, f in bars.items()} == want
    cb = cycle_boundary_filtrations(X, 1)
    gens_ok = shapes_ok
    if shapes_ok:
        for (iv, f), k in zip(bars.items(), (4, 2, 1)):
            num, den = cb.factor_pair(iv.p, iv.q)
            got = sub_join(den, chain_in_subgroup(X, 1, f.generators))
            ref = sub_join(den, chain_in_subgroup(X, 1, [{"zeta": k}]))
            gens_ok &= got == ref == num
    elapsed = time.perf_counter() - t0
    ok = shapes_ok and gens_ok and elapsed < 1
    assert record(2, "disk fixture", ok, f"shapes {'exact' if shapes_ok else 'WRONG'}, "
                  f"generators {'generate 4z, 2z, z cosets' if gens_ok else 'WRONG'}", elapsed)


def test_criterion_3_field_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 3)
    bad = 0
    cells = []
    for i in range(200):
        X = None
        while X is None or len(X.cells) > 60:
            X = random_simplicial_complex(rng, "fp:2", vertices=rng.randint(5, 7), grades=rng.randint(2, 6),
                                          max_dim=3, density=rng.uniform(0.5, 0.95))
        cells.append(len(X.cells))
        for p in (2, 5):
            Y = X.with_coefficients(f"fp:{p}")
            got = Counter()
            for m in range(0, Y.max_dim + 1):
                for iv, f in homology_barcode(Y, m, "lattice").items():
                    got[(m, iv.p, iv.q)] += f.shape.free_rank
            bad += got != standard_persistence(Y, p)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and max(cells) <= 60 and elapsed < 30
    assert record(3, "field equivalence", ok, f"400 complex/field pairs, {bad} mismatches, "
                  f"{min(cells)}-{max(cells)} cells", elapsed)


def test_criterion_4_moebius_cross_check():
    t0 = time.perf_counter()
    bad = 0
    for d in _torsion_diagram_corpus():
        pd = type_b_pd(d)
        via = {iv: jh_vector(f.shape) for iv, f in barcode(d).items()}
        bad += pd != via
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    assert record(4, "type-B diagram equals JH of barcode", ok, f"200 diagrams, {bad} mismatches", elapsed)


def test_criterion_5_enumeration():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 5)
    checked = 0
    failures = 0
    rep = ls_enumeration_check(disk_complex("fp:2"))
    checked += rep.checked
    failures += len(rep.failures)
    sizes_seen = []
    for _ in range(50):
        sizes = tuple(rng.randint(2, 10) for _ in range(4))
        X = random_torsion_complex(rng, rng.choice(["zmod:4", "zmod:6", "zmod:12", "zmod:8", "fp:2", "fp:3"]),
                                   grades=rng.randint(2, 5), sizes=sizes)
        sizes_seen.append(len(X.cells))
        rep = ls_enumeration_check(X)
        checked += rep.checked
        failures += len(rep.failures)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and max(sizes_seen) <= 40 and elapsed < 60
    assert record(5, "Leray-Serre enumeration", ok, f"disk + 50 complexes, {checked} grid checks, "
                  f"{failures} failures", elapsed)


def test_criterion_6_lattice_homomorphism():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 6)
    checked = failures = 0
    for n in (1, 2, 3):
        ds = all_downsets(n)
        for _ in range(3):
            d = cyclic_chain() if n == 3 and _ == 0 else random_chain_diagram(rng, max_length=n, max_rank=3)
            while d.length != n:
                d = random_chain_diagram(rng, max_length=n, max_rank=3)
            rep = check_lattice_hom(cdf(saecular_filtrations(d)), [(a, b) for a in ds for b in ds])
            checked += rep.checked
            failures += len(rep.failures)
    for n in (4, 5, 6):
        d = random_chain_diagram(rng, max_length=n, max_rank=3)
        while d.length != n:
            d = random_chain_diagram(rng, max_length=n, max_rank=3)
        pairs = [(random_downset(n, rng), random_downset(n, rng)) for _ in range(500)]
        rep = check_lattice_hom(cdf(saecular_filtrations(d)), pairs)
        checked += rep.checked
        failures += len(rep.failures)
    elapsed = time.perf_counter() - t0
    ok = failures == 0
    assert record(6, "lattice homomorphism", ok, f"{checked} join/meet checks, {failures} failures", elapsed)


def test_criterion_7_linearization_independence():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 7)
    bad = 0
    for d in _torsion_diagram_corpus():
        table = cdf(saecular_filtrations(d))
        base = Counter((st.interval, st.shape) for st in subsaecular_series(table).reduced)
        for _ in range(5):
            lin = random_linearization(d.length, rng)
            bad += Counter((st.interval, st.shape) for st in subsaecular_series(table, lin).reduced) != base
    elapsed = time.perf_counter() - t0
    ok = bad == 0
    assert record(7, "linearization independence", ok, f"1000 linearizations, {bad} mismatches", elapsed)


def test_criterion_8_group_suite():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 8)
    nondist = abnormal = badcard = natural = 0
    max_order = 0
    for _ in range(100):
        d = random_group_diagram(rng, max_length=4)
        max_order = max(max_order, *(G.order for G in d.groups))
        g = g_saecular(d)
        nondist += not g.distributive
        for K in g.kernel.values():
            abnormal += not all(is_normal(K.part(a), whole(d.groups[a - 1])) for a in range(1, d.length + 1))
        for (p, q), f in coset_barcode(d).items():
            if not f.natural:
                continue
            natural += 1
            inside = [f.indices[a - 1] for a in range(p, min(q, d.length + 1))]
            outside = [f.indices[a - 1] for a in range(1, d.length + 1) if not p <= a < q]
            badcard += not (len(set(inside)) == 1 and all(x == 1 for x in outside) and f.interval_ok)
    elapsed = time.perf_counter() - t0
    ok = nondist == 0 and abnormal == 0 and badcard == 0 and max_order <= 24 and elapsed < 120
    assert record(8, "group suite", ok, f"100 diagrams, {nondist} non-distributive, {abnormal} non-normal "
                  f"kernels, {badcard}/{natural} natural factors off-interval", elapsed)


def test_criterion_9_performance():
    X = grid_complex(18, 19, "fp:2")
    t0 = time.perf_counter()
    homology_barcode(X, 1)
    t_f2 = time.perf_counter() - t0
    Y = X.with_coefficients("z")
    t0 = time.perf_counter()
    homology_barcode(Y, 1)
    t_z = time.perf_counter() - t0
    ok = len(X.cells) >= 2000 and t_f2 < 10 and t_z < 60
    assert record(9, "performance floor", ok, f"{len(X.cells)} cells, F_2 {t_f2:.2f} s, Z {t_z:.2f} s",
                  t_f2 + t_z)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
            print(RESULTS[-1] if RESULTS else f"{name}: error")
    sys.exit(1 if failed else 0)
