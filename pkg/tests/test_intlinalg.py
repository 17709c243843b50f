import itertools
import random

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from saecula.intlinalg import (
    IntMatrix,
    hnf,
    hnf_columns,
    in_column_lattice,
    kernel_basis,
    kernel_columns,
    rank,
    snf,
    solve_hnf_columns,
    xgcd,
)


def _random_matrix(rng, m, n, lo=-9, hi=9):
    return IntMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)], n)


def _sympy_invariants(M):
    D = smith_normal_form(Matrix(M.to_rows()))
    return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]


def _random_unimodular(rng, n):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            c = rng.randint(-2, 2)
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    return IntMatrix.from_rows(U, n)


def test_xgcd_identity():
    for a, b in itertools.product(range(-12, 13), repeat=2):
        g, s, t = xgcd(a, b)
        assert g >= 0 and s * a + t * b == g
        if a or b:
            assert a % g == 0 and b % g == 0


def test_snf_frozen_example():
    # invariant factors frozen from sympy
    M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    dec = snf(M)
    assert dec.diagonal == [2, 6, 12]
    assert dec.U @ M @ dec.V == dec.D


def test_snf_against_sympy(rng):
    for _ in range(150):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = _random_matrix(rng, m, n)
        dec = snf(M)
        assert dec.U @ M @ dec.V == dec.D
        assert dec.U @ dec.U_inv == IntMatrix.identity(m)
        inv = dec.invariant_factors
        assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
        assert all(d > 0 for d in inv)
        assert inv == _sympy_invariants(M)


def test_snf_zero_and_empty():
    assert snf(IntMatrix.zeros(2, 3)).invariant_factors == []
    assert snf(IntMatrix.from_rows([[0, 5]])).invariant_factors == [5]


def test_hnf_is_canonical(rng):
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = _random_matrix(rng, m, n)
        H = hnf(M)
        H2 = hnf(M @ _random_unimodular(rng, n))
        assert H == H2
        cols = H.columns()
        pivots = [next(i for i, x in enumerate(c) if x) for c in cols]
        assert pivots == sorted(set(pivots))
        for j, (c, r) in enumerate(zip(cols, pivots)):
            assert c[r] > 0
            for k in range(j):
                assert 0 <= cols[k][r] < c[r]
        assert H.cols == rank(M)


def test_hnf_spans_same_lattice(rng):
    for _ in range(60):
        M = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        basis = hnf_columns(M.columns(), M.rows)
        for c in M.columns():
            assert solve_hnf_columns(basis, c) is not None
        H = IntMatrix.from_columns(basis, M.rows)
        for c in basis:
            assert in_column_lattice(M, c)
        assert hnf(H) == H


def test_membership_brute_force():
    M = IntMatrix.from_columns([(2, 0), (0, 3)], 2)
    for v in itertools.product(range(-6, 7), repeat=2):
        assert in_column_lattice(M, v) == (v[0] % 2 == 0 and v[1] % 3 == 0)


def test_kernel_is_saturated_basis(rng):
    for _ in range(80):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        M = _random_matrix(rng, m, n, -3, 3)
        K = kernel_columns(M.columns(), m)
        assert len(K) == n - rank(M)
        for k in K:
            assert M.apply(k) == (0,) * m
        # saturation: SNF of the kernel basis has all invariant factors 1
        if K:
            assert set(snf(IntMatrix.from_columns(K, n)).invariant_factors) == {1}


def test_kernel_frozen():
    K = kernel_basis(IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]]))
    assert K.cols == 2
    assert set(snf(K).invariant_factors) == {1}


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        in_column_lattice(IntMatrix.identity(2), (1, 2, 3))
