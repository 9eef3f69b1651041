from __future__ import annotations

import pytest

from troprefine.algebra import HalfLaurent
from troprefine.errors import MalformedType, NotTrivalent
from troprefine.fan import IntVec2
from troprefine.tropical import (
    EDGE,
    LEG,
    CombinatorialType,
    Graph,
    bg_multiplicity,
    canonical_form,
    curve_multiplicity,
    vertex_multiplicity,
)


def tripod(a, b, points=((LEG, 0), (LEG, 1))):
    c = IntVec2(-a[0] - b[0], -a[1] - b[1])
    return CombinatorialType(
        Graph(1, (), ((0, 1), (0, 2), (0, 3))),
        (),
        (IntVec2(*a), IntVec2(*b), c),
        (0,),
        points,
    )


def test_multiplicities():
    t = tripod((1, 0), (0, 1))
    assert vertex_multiplicity(t, 0) == 1
    w = tripod((-1, 0), (0, -2))
    assert curve_multiplicity(w) == 2
    assert bg_multiplicity(w) == HalfLaurent.q_integer(2)


def test_balancing_enforced():
    with pytest.raises(MalformedType):
        CombinatorialType(Graph(1, (), ((0, 1), (0, 2))), (), (IntVec2(1, 0), IntVec2(0, 1)), (0,), ())


def test_not_trivalent():
    t = CombinatorialType(
        Graph(1, (), ((0, 1), (0, 2), (0, 3), (0, 4))),
        (),
        (IntVec2(1, 0), IntVec2(-1, 0), IntVec2(0, 1), IntVec2(0, -1)),
        (0,),
        (),
    )
    with pytest.raises(NotTrivalent):
        vertex_multiplicity(t, 0)


def test_disconnected_graph_rejected():
    with pytest.raises(MalformedType):
        Graph(2, (), ((0, 1), (1, 2)))


def two_vertex(order):
    # two vertices joined by an edge of direction (1,1); legs listed in the given order
    legs = {"a": ((0, 1), IntVec2(-1, 0)), "b": ((0, 2), IntVec2(0, -1)), "c": ((1, 3), IntVec2(1, 0)), "d": ((1, 4), IntVec2(0, 1))}
    chosen = [legs[k] for k in order]
    return CombinatorialType(
        Graph(2, ((0, 1),), tuple(l for l, _ in chosen)),
        (IntVec2(1, 1),),
        tuple(d for _, d in chosen),
        (0, 0),
        ((EDGE, 0),),
    )


def test_canonical_form_is_invariant_under_relabelling():
    assert canonical_form(two_vertex("abcd")) == canonical_form(two_vertex("dcba"))
    assert canonical_form(tripod((1, 0), (0, 1))) != canonical_form(tripod((1, 0), (0, 1), ((LEG, 0), (LEG, 2))))
