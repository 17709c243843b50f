import pytest

from saecula.abgrp import ZERO_JH, jh_vector
from saecula.homology import Cell, FilteredComplex, homology_barcode
from saecula.samples import disk_complex, random_torsion_complex
from saecula.spectral import InfiniteLengthError, ls_enumeration_check, ls_terms


def _uncorrected_formulas(X, m, p, r):
    """Uncorrected enumeration identities: no degenerate terms, B indexed by p - r, E without r."""
    n = X.n
    tau = {k: {(iv.p, iv.q): jh_vector(f.shape) for iv, f in homology_barcode(X, k).items()}
           for k in (m - 1, m) if k >= 0}

    def t(k, a, b):
        return tau.get(k, {}).get((a, b), ZERO_JH)

    def total(xs):
        out = ZERO_JH
        for x in xs:
            out = out + x
        return out

    ivs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 2)]
    # max of [a, b) is b - 1; unbounded bars have no finite max
    b_lit = total(t(m, a, b) for a, b in ivs if b <= n and b - 1 <= p - r)
    z_lit = total([t(m, a, b) for a, b in ivs if a <= p]
                  + [t(m - 1, a, b) for a, b in ivs if a <= p - r and b <= n and b - 1 <= p])
    e_lit = total([t(m, p, s + 1) for s in range(p + 1, n + 1)]
                  + [t(m - 1, s, p + 1) for s in range(1, p - r + 1)])
    return {"z": z_lit, "b": b_lit, "e": e_lit}


def test_disk_over_f2():
    rep = ls_enumeration_check(disk_complex("fp:2"))
    assert rep.ok and rep.checked > 100


def test_disk_over_z_mod_8():
    assert ls_enumeration_check(disk_complex("zmod:8")).ok


def test_random_torsion_complexes(rng):
    for _ in range(8):
        X = random_torsion_complex(rng, rng.choice(["zmod:4", "zmod:6", "zmod:12", "fp:3"]))
        rep = ls_enumeration_check(X)
        assert rep.ok, rep.failures[:3]


def test_integer_coefficients_rejected():
    with pytest.raises(InfiniteLengthError):
        ls_enumeration_check(disk_complex("z"))


def test_term_arguments_validated():
    X = disk_complex("fp:2")
    for args in [(-1, 1, 0), (4, 0, 0), (0, -1, 0), (1, 0, -1)]:
        with pytest.raises(ValueError):
            ls_terms(X, *args)


def test_page_zero_and_large_page():
    X = disk_complex("fp:2")
    # E^0_p is the associated graded piece F_p / F_{p-1} of the chains
    for p in range(1, X.n + 1):
        for m in range(0, 3):
            cells = sum(1 for c in X.cells if c.dim == m and c.grade == p)
            assert ls_terms(X, p, m - p, 0).e_shape.free_rank == cells
    # at a page past the length, E^r_p in degree 1 counts the bars born at p
    assert ls_terms(X, 1, 0, 10).e_shape.free_rank == 1
    assert ls_terms(X, 2, -1, 10).e_shape.free_rank == 0


def _mismatches(X):
    out = []
    for m in range(0, X.max_dim + 1):
        for p in range(1, X.n + 1):
            for r in range(0, X.n + 2):
                term = ls_terms(X, p, m - p, r)
                got = {"z": jh_vector(term.z_shape), "b": jh_vector(term.b_shape)}
                if r >= 1:
                    got["e"] = jh_vector(term.e_shape)
                old = _uncorrected_formulas(X, m, p, r)
                out += [(k, m, p, r) for k in got if got[k] != old[k]]
    return out


def test_uncorrected_identities_fail_on_the_disk():
    """Uncorrected, the E identity disagrees with direct computation on the disk over F_2."""
    bad = _mismatches(disk_complex("fp:2"))
    assert {k for k, *_ in bad} == {"e"}
    assert ls_enumeration_check(disk_complex("fp:2")).ok


def test_uncorrected_boundary_identity_fails_on_an_edge():
    # two points joined at grade 2: B^1_1 = F_1 & d(F_2) is one-dimensional
    X = FilteredComplex([Cell("a", 0, 1), Cell("b", 0, 1), Cell("e", 1, 2, (("a", -1), ("b", 1)))], "fp:2")
    assert jh_vector(ls_terms(X, 1, -1, 1).b_shape).length == 1
    assert _uncorrected_formulas(X, 0, 1, 1)["b"].length == 0
    assert ("b", 0, 1, 1) in _mismatches(X)
    assert ls_enumeration_check(X).ok


def test_degenerate_terms_are_needed():
    from saecula.spectral import _census, predicted

    # b - a is born and killed at grade 1
    X = FilteredComplex([Cell("a", 0, 1), Cell("b", 0, 1), Cell("e", 1, 1, (("a", -1), ("b", 1)))], "fp:2")
    census = _census(X)
    assert census.d(0, 1).length == 1
    z = jh_vector(ls_terms(X, 1, -1, 0).z_shape)
    assert predicted(X, census, 0, 1, 0)["z"] == z
    census.delta.clear()
    assert predicted(X, census, 0, 1, 0)["z"] != z
