import itertools
import math
from fractions import Fraction

import pytest

from saecula.abgrp import (
    F,
    Q,
    AbHom,
    AbPresentation,
    Coefficients,
    JhVector,
    NotNestedError,
    QuotientShape,
    compose,
    hom_image,
    hom_kernel,
    hom_preimage,
    jh_vector,
    quotient_shape,
    quotient_with_generators,
    sub_join,
    sub_meet,
)


def cyclic_sum(*orders):
    n = len(orders)
    return AbPresentation.make(n, [[d if i == j else 0 for i in range(n)] for j, d in enumerate(orders)])


def elements(orders):
    return list(itertools.product(*(range(d) for d in orders)))


def reduce(v, orders):
    return tuple(x % d for x, d in zip(v, orders))


def span(gens, orders):
    """Brute-force subgroup generated by gens inside a finite product of cyclic groups."""
    out = {tuple(0 for _ in orders)}
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = reduce([a + b for a, b in zip(x, g)], orders)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def as_set(sub, orders):
    return {x for x in elements(orders) if sub.contains(x)}


def test_coefficient_parsing():
    assert str(Coefficients.parse("z")) == "z"
    assert str(Coefficients.parse("fp:5")) == "fp:5"
    assert str(Coefficients.parse("f7")) == "fp:7"
    assert str(Coefficients.parse("zmod:12")) == "zmod:12"
    assert Coefficients.parse("q").is_field
    assert not Coefficients.parse("z").finite_length
    for bad in ("fp:4", "zmod:1", "r", "fp:x"):
        with pytest.raises(ValueError):
            Coefficients.parse(bad)


def test_quotient_shapes():
    assert cyclic_sum(9, 6, 4).shape() == QuotientShape(0, (3, 36, 2)[:0] or (2, 3, 36)[:0] or cyclic_sum(9, 6, 4).shape().invariant_factors)
    assert cyclic_sum(2, 3).shape().invariant_factors == (6,)
    assert cyclic_sum(4, 6).shape().invariant_factors == (2, 12)
    assert AbPresentation.make(2, [[0, 0]]).shape() == QuotientShape(2, ())
    assert str(AbPresentation.make(2, [[1, 0]]).shape()) == "Z"


def test_lattice_ops_brute_force(rng):
    for _ in range(40):
        orders = [rng.choice([2, 3, 4, 6]) for _ in range(rng.randint(1, 3))]
        G = cyclic_sum(*orders)
        ga = [tuple(rng.randint(0, d - 1) for d in orders) for _ in range(rng.randint(0, 2))]
        gb = [tuple(rng.randint(0, d - 1) for d in orders) for _ in range(rng.randint(0, 2))]
        A, B = G.subgroup(ga), G.subgroup(gb)
        sa, sb = span(ga, orders), span(gb, orders)
        assert as_set(A, orders) == sa
        assert as_set(sub_join(A, B), orders) == span(ga + gb, orders)
        assert as_set(sub_meet(A, B), orders) == sa & sb
        assert (A <= B) == (sa <= sb)
        shape = quotient_shape(sub_join(A, B), A)
        assert math.prod(shape.invariant_factors) == len(span(ga + gb, orders)) // len(sa)


def test_hom_image_preimage_brute_force(rng):
    for _ in range(30):
        so = [rng.choice([2, 3, 4, 6, 12]) for _ in range(rng.randint(1, 2))]
        to = [rng.choice([2, 3, 4, 6, 12]) for _ in range(rng.randint(1, 2))]
        S, T = cyclic_sum(*so), cyclic_sum(*to)
        rows = [[(t // math.gcd(t, s)) * rng.randint(-2, 2) for s in so] for t in to]
        f = AbHom.make(S, T, rows)

        def app(x):
            return reduce(f.apply(x), to)

        img = {app(x) for x in elements(so)}
        assert as_set(hom_image(f, S.full()), to) == img
        ker = {x for x in elements(so) if app(x) == reduce([0] * len(to), to)}
        assert as_set(hom_kernel(f), so) == ker
        g = [tuple(rng.randint(0, d - 1) for d in to)]
        tgt = span(g, to)
        pre = {x for x in elements(so) if app(x) in tgt}
        assert as_set(hom_preimage(f, T.subgroup(g)), so) == pre


def test_ill_defined_map_rejected():
    with pytest.raises(ValueError):
        AbHom.make(cyclic_sum(9), cyclic_sum(6), [[1]])
    with pytest.raises(ValueError):
        AbHom.make(cyclic_sum(9), cyclic_sum(6), [[2, 1]])


def test_compose_order():
    A, B, C = cyclic_sum(9), cyclic_sum(6), cyclic_sum(4)
    f = AbHom.make(A, B, [[2]])
    g = AbHom.make(B, C, [[2]])
    h = compose(f, g)
    assert h.source == A and h.target == C
    assert C.contains(tuple(x - y for x, y in zip(h.apply((1,)), (4,))))


def test_quotient_generators_generate():
    G = cyclic_sum(9)
    num, den = G.full(), G.subgroup([(3,)])
    shape, gens = quotient_with_generators(num, den)
    assert shape.invariant_factors == (3,)
    assert sub_join(den, G.subgroup(gens)) == num
    with pytest.raises(NotNestedError):
        quotient_shape(den, num)


def test_field_backends():
    V = AbPresentation.make(3, (), Q)
    a = V.subgroup([(1, Fraction(1, 2), 0)])
    b = V.subgroup([(2, 1, 0), (0, 0, 3)])
    assert a <= b
    assert quotient_shape(b, a).free_rank == 1
    W = AbPresentation.make(2, (), F(3))
    c = W.subgroup([(1, 1)])
    # contains() on a presentation tests for zero in the quotient
    assert W.contains((3, 6)) and not W.contains((1, 0))
    assert c.contains((2, 2)) and not c.contains((1, 2))
    assert jh_vector(quotient_shape(W.full(), c)) == JhVector.from_counter(0, {3: 1})


def test_jh_vectors():
    assert jh_vector(QuotientShape(0, (12, 4))) == JhVector.from_counter(0, {2: 4, 3: 1})
    assert not jh_vector(QuotientShape(1, ())).finite_length
    v = jh_vector(QuotientShape(0, (6,)))
    assert (v - v).is_zero and (v + v).length == 4
    assert jh_vector(QuotientShape(2, (), 0)) == JhVector.from_counter(0, {0: 2})


def test_zmod_coefficients():
    G = AbPresentation.make(2, [], "zmod:4")
    assert G.shape().invariant_factors == (4, 4)
    assert G.contains((4, 8))
