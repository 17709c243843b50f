import pytest
from sympy import Matrix

from saecula.abgrp import AbHom, AbPresentation, JhVector, QuotientShape, quotient_shape, sub_join
from saecula.diagram import ChainDiagram, DiagramError, Interval
from saecula.saecular import (
    NaturalityFailure,
    all_downsets,
    all_intervals,
    barcode,
    cdf,
    check_lattice_hom,
    check_naturality,
    field_decompose,
    interval_factor,
    is_linear_extension,
    omega_on_downset,
    principal_downset,
    random_downset,
    random_linearization,
    rank_function,
    saecular_filtrations,
    subsaecular_series,
    type_b_pd,
)
from saecula.samples import cyclic_chain, random_chain_diagram


def _tuple(sub):
    """Invariant factors of each part, as a subgroup of its ambient object."""
    return tuple(quotient_shape(s, s.parent.zero()).invariant_factors for s in sub.parts)


L1 = ((3,), (), ())
L2 = ((9,), (3,), ())
L3 = ((9,), (6,), (2,))
L4 = ((9,), (6,), (4,))


def test_kernel_filtration_value():
    f = saecular_filtrations(cyclic_chain())
    assert _tuple(f.kernel[2]) == L1
    assert f.kernel[4] == f.kernel[4].parent.full()


def test_cyclic_table_values():
    t = cdf(saecular_filtrations(cyclic_chain()))
    expected = {
        4: [None, L2, L3, L4, L4],
        3: [None, L2, L2, L2, L2],
        2: [None, L1, L1, L1, L1],
        1: [None, None, None, None, None],
        0: [None, None, None, None, None],
    }
    zero = ((), (), ())
    for q, row in expected.items():
        for p, want in enumerate(row):
            assert _tuple(t[(p, q)]) == (want or zero), (p, q)


def test_cyclic_barcode_and_generators():
    d = cyclic_chain()
    bars = barcode(d)
    assert {iv: f.shape for iv, f in bars.items()} == {
        Interval(1, 2): QuotientShape(0, (3,)),
        Interval(1, 3): QuotientShape(0, (3,)),
        Interval(2, 4): QuotientShape(0, (2,)),
        Interval(3, 4): QuotientShape(0, (2,)),
    }
    f = bars[Interval(1, 2)]
    # the generator together with the denominator spans the subgroup of order 3
    assert sub_join(f.den.part(1), d.obj(1).subgroup(f.generators)) == d.obj(1).subgroup([(3,)])


def test_trivial_factor_off_the_barcode():
    t = cdf(saecular_filtrations(cyclic_chain()))
    assert interval_factor(t, Interval(2, 3)).shape.is_trivial
    with pytest.raises(DiagramError):
        interval_factor(t, Interval(1, 5))


def test_reduced_series_ladder():
    t = cdf(saecular_filtrations(cyclic_chain()))
    s = subsaecular_series(t)
    assert [_tuple(st.sub) for st in s.reduced] == [L1, L2, L3, L4]
    assert [st.interval for st in s.reduced] == [Interval(1, 2), Interval(1, 3), Interval(2, 4), Interval(3, 4)]


def test_zero_diagram_table():
    z = AbPresentation.make(0)
    d = ChainDiagram([z, z], [AbHom.make(z, z, [])])
    t = cdf(saecular_filtrations(d))
    assert all(v == d.zero() for v in t.grid.values())
    assert barcode(d) == {}


def test_cdf_monotone(rng):
    for _ in range(15):
        d = random_chain_diagram(rng, max_length=4, max_rank=2)
        t = cdf(saecular_filtrations(d))
        n = d.length
        for p in range(n + 2):
            for q in range(n + 2):
                if p + 1 <= n + 1:
                    assert t[(p, q)] <= t[(p + 1, q)]
                if q + 1 <= n + 1:
                    assert t[(p, q)] <= t[(p, q + 1)]


def test_naturality_on_all_downsets(rng):
    for _ in range(8):
        d = random_chain_diagram(rng, max_length=3, max_rank=2)
        f = saecular_filtrations(d)
        t = cdf(f)
        for D in all_downsets(d.length):
            assert check_naturality(f, D, t).ok


def test_lattice_hom_small_exhaustive():
    d = cyclic_chain()
    t = cdf(saecular_filtrations(d))
    ds = all_downsets(3)
    pairs = [(a, b) for a in ds for b in ds]
    rep = check_lattice_hom(t, pairs)
    assert rep.ok and rep.checked == 2 * len(pairs)


def test_omega_principal_downset_is_cdf_entry():
    t = cdf(saecular_filtrations(cyclic_chain()))
    for iv in all_intervals(3):
        assert omega_on_downset(t, principal_downset(iv)) == t[(iv.p, iv.q)]
    with pytest.raises(DiagramError):
        omega_on_downset(t, [Interval(2, 3)])


def test_random_linearizations_are_extensions(rng):
    for n in range(1, 6):
        lin = random_linearization(n, rng)
        assert is_linear_extension(lin, n)
    with pytest.raises(DiagramError):
        subsaecular_series(cdf(saecular_filtrations(cyclic_chain())), list(reversed(all_intervals(3))))


def _rank_oracle(d, p, q):
    m = Matrix(d.composite(p, q - 1).matrix.to_rows()) if d.obj(p).rank and d.obj(q - 1).rank else None
    return 0 if m is None else m.rank()


def test_field_barcode_against_rank_inversion(rng):
    for _ in range(25):
        d = random_chain_diagram(rng, max_length=5, max_rank=3, coeff="q")
        n = d.length

        def r(p, q):
            if p < 1 or q > n + 1 or p >= q:
                return 0
            return _rank_oracle(d, p, q)

        want = {}
        for iv in all_intervals(n):
            k = r(iv.p, iv.q) - r(iv.p - 1, iv.q) - r(iv.p, iv.q + 1) + r(iv.p - 1, iv.q + 1)
            if k:
                want[iv] = k
        got = {iv: f.shape.free_rank for iv, f in barcode(d).items()}
        assert got == want


def test_field_decomposition_threads(rng):
    for _ in range(10):
        d = random_chain_diagram(rng, max_length=4, max_rank=3, coeff="fp:3")
        dec = field_decompose(d)
        for iv, threads in dec.threads.items():
            for th in threads:
                assert sorted(th) == list(range(iv.p, min(iv.q, d.length + 1)))
    with pytest.raises(DiagramError):
        field_decompose(cyclic_chain())


def test_type_b_pd_cyclic():
    pd = type_b_pd(cyclic_chain(), cross_check=True)
    c3, c2 = JhVector.from_counter(0, {3: 1}), JhVector.from_counter(0, {2: 1})
    assert pd == {Interval(1, 2): c3, Interval(1, 3): c3, Interval(2, 4): c2, Interval(3, 4): c2}


def test_rank_function_needs_finite_length():
    free = AbPresentation.make(1)
    with pytest.raises(ValueError):
        rank_function(ChainDiagram([free], []), Interval(1, 2))


def test_series_verification_catches_bad_step(monkeypatch):
    import saecula.saecular as sa
    t = cdf(saecular_filtrations(cyclic_chain()))
    monkeypatch.setattr(sa, "is_interval_functor", lambda *a: False)
    with pytest.raises(NaturalityFailure):
        subsaecular_series(t)


def test_random_downset_is_downset(rng):
    from saecula.saecular import is_downset
    for _ in range(50):
        assert is_downset(random_downset(rng.randint(1, 6), rng))
