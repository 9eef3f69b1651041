from __future__ import annotations

import pytest

from troprefine.errors import DegenerateCollinear, NegativeGenus, NonzeroSum, ValidationError, ZeroVector
from troprefine.fan import CountingProblem, IntVec2, dual_polygon, projective_plane, rotate_cw, validate_balanced


def test_validate_balanced():
    d = validate_balanced([(1, 0), (0, 1), (-1, -1)])
    assert len(d) == 3
    assert d[2] == IntVec2(0, 1)
    with pytest.raises(NonzeroSum) as exc:
        validate_balanced([(1, 0), (0, 1), (-1, 0)])
    assert exc.value.residual == (0, 1)
    with pytest.raises(ZeroVector):
        validate_balanced([(0, 0), (1, 0), (-1, 0)])
    with pytest.raises(ValidationError):
        validate_balanced([])


def test_target_genus():
    cubic = projective_plane(3)
    assert CountingProblem(cubic, 8).genus == 0
    assert CountingProblem(cubic, 9).genus == 1
    assert CountingProblem(cubic, 7, {1}).genus == 0
    assert CountingProblem(cubic, 8).num_trivalent == 7
    with pytest.raises(NegativeGenus):
        CountingProblem(cubic, 7)
    with pytest.raises(ValidationError):
        CountingProblem(cubic, 8, {10})


def test_problem_key_ignores_labels():
    a = CountingProblem(validate_balanced([(1, 0), (0, 1), (-1, -1)]), 2)
    b = CountingProblem(validate_balanced([(0, 1), (-1, -1), (1, 0)]), 2)
    assert a.key() == b.key()


def test_dual_polygon_of_plane_curves():
    for d in (1, 2, 3):
        s = dual_polygon(projective_plane(d))
        assert set(s.dual_polygon) == {IntVec2(0, 0), IntVec2(d, 0), IntVec2(0, d)} or len(s.dual_polygon) == 3
        pts = s.lattice_points()
        assert len(pts) == (d + 1) * (d + 2) // 2
        assert s.anticanonical_degree == 3 * d
        assert s.ray_degrees == (d, d, d)


def test_weighted_triangle_polygon():
    s = dual_polygon(validate_balanced([(-1, 0), (0, -2), (1, 2)]))
    assert sorted(s.ray_degrees) == [1, 1, 2]
    # an edge of lattice length 2 appears among the edge vectors
    assert any(e.divisibility == 2 for e in s.edge_vectors)


def test_edge_directions_contain_delta():
    d = projective_plane(2)
    allowed = dual_polygon(d).edge_directions()
    for v in d.vectors:
        assert v in allowed
    assert IntVec2(3, 0) not in allowed


def test_collinear_rejected():
    with pytest.raises(DegenerateCollinear):
        dual_polygon(validate_balanced([(1, 0), (-1, 0)]))


def test_rotation():
    assert rotate_cw((1, 0)) == IntVec2(0, -1)
    assert IntVec2(4, 6).primitive() == IntVec2(2, 3)
