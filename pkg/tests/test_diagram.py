import pytest

from saecula.abgrp import AbHom, AbPresentation, hom_image
from saecula.diagram import (
    ChainDiagram,
    DiagramError,
    Interval,
    SubDiagram,
    is_interval_functor,
    join_diagrams,
)
from saecula.samples import cyclic_chain


def test_interval_basics():
    iv = Interval(2, 4)
    assert iv.contains(2) and iv.contains(3) and not iv.contains(4)
    assert Interval(1, 3).le(iv) and not iv.le(Interval(1, 3))
    assert iv.label(3) == "[2,inf)" and iv.label(4) == "[2,4)"
    with pytest.raises(ValueError):
        Interval(3, 3)


def test_composites():
    d = cyclic_chain()
    assert d.length == 3
    f = d.composite(1, 3)
    assert f.apply((1,)) == (4,)
    assert d.composite(2, 2).apply((5,)) == (5,)
    with pytest.raises(DiagramError):
        d.composite(3, 1)


def test_image_of_first_map():
    # the image of Z/9 in Z/6 under multiplication by 2 has order 3
    d = cyclic_chain()
    img = hom_image(d.maps[0], d.obj(1).full())
    assert img == d.obj(2).subgroup([(2,)])
    assert img.basis.cols == 1


def test_construction_errors():
    A = AbPresentation.make(1, [[9]])
    B = AbPresentation.make(1, [[6]])
    with pytest.raises(DiagramError):
        ChainDiagram([], [])
    with pytest.raises(DiagramError):
        ChainDiagram([A, B], [])
    f = AbHom.make(A, B, [[2]])
    with pytest.raises(DiagramError):
        ChainDiagram([B, A], [f])
    with pytest.raises(DiagramError):
        ChainDiagram([A, AbPresentation.make(1, (), "q")], [f])


def test_subdiagram_must_be_closed():
    d = cyclic_chain()
    parts = [d.obj(1).full(), d.obj(2).zero(), d.obj(3).zero()]
    with pytest.raises(DiagramError):
        SubDiagram(d, parts)


def test_interval_functor_detection():
    d = cyclic_chain()
    full, zero = d.full(), d.zero()
    assert is_interval_functor(d, zero, zero) is None
    # the whole diagram is not an interval functor (orders 9, 6, 4)
    assert is_interval_functor(d, full, zero) is False
    # Z/4 at the end alone: support [3, 4)
    last = SubDiagram(d, [d.obj(1).zero(), d.obj(2).zero(), d.obj(3).full()], check=False)
    assert is_interval_functor(d, last, zero) == Interval(3, 4)
    with pytest.raises(DiagramError):
        is_interval_functor(d, zero, full)


def test_join_diagrams_empty_is_zero():
    d = cyclic_chain()
    assert join_diagrams([], d) == d.zero()
    assert (d.full() & d.zero()) == d.zero() and (d.full() | d.zero()) == d.full()
