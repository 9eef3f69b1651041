"""Balanced collections of lattice vectors and their toric dictionary."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import DegenerateCollinear, NegativeGenus, NonzeroSum, ValidationError, ZeroVector


class IntVec2(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return IntVec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return IntVec2(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return IntVec2(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return IntVec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    @property
    def divisibility(self) -> int:
        return math.gcd(self.x, self.y)

    def primitive(self) -> IntVec2:
        g = self.divisibility
        return IntVec2(self.x // g, self.y // g)


ZERO = IntVec2(0, 0)


def det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def rotate_cw(v) -> IntVec2:
    """Rotation by -90 degrees."""
    return IntVec2(v[1], -v[0])


def vec_sum(vs: Iterable) -> IntVec2:
    x = y = 0
    for v in vs:
        x += v[0]
        y += v[1]
    return IntVec2(x, y)


@dataclass(frozen=True)
class BalancedCollection:
    vectors: tuple[IntVec2, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, label: int) -> IntVec2:
        """Vector carrying the 1-based ``label``."""
        return self.vectors[label - 1]

    @property
    def divisibilities(self) -> tuple[int, ...]:
        return tuple(v.divisibility for v in self.vectors)

    def sorted_key(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(tuple(v) for v in self.vectors))


def validate_balanced(vectors: Iterable) -> BalancedCollection:
    vs = []
    for v in vectors:
        x, y = v
        if int(x) != x or int(y) != y:
            raise ValidationError(f"non-integral vector {v!r}")
        vs.append(IntVec2(int(x), int(y)))
    if not vs:
        raise ValidationError("empty collection")
    for v in vs:
        if v == ZERO:
            raise ZeroVector("collection contains the zero vector")
    residual = vec_sum(vs)
    if residual != ZERO:
        raise NonzeroSum(residual)
    return BalancedCollection(tuple(vs))


@dataclass(frozen=True)
class CountingProblem:
    """(Δ, n, Δ^F): fixed_ends holds 1-based labels of Δ."""

    delta: BalancedCollection
    n: int
    fixed_ends: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "fixed_ends", frozenset(int(i) for i in self.fixed_ends))
        if self.n < 0:
            raise ValidationError("number of points must be non-negative")
        for i in self.fixed_ends:
            if not 1 <= i <= len(self.delta):
                raise ValidationError(f"fixed end label {i} out of range 1..{len(self.delta)}")
        target_genus(self)

    @property
    def genus(self) -> int:
        return target_genus(self)

    @property
    def num_trivalent(self) -> int:
        return 2 * self.genus - 2 + len(self.delta)

    def key(self) -> tuple:
        # label-free identity: Δ up to permutation, with the fixed ends as a sub-multiset
        fixed = sorted(tuple(self.delta[i]) for i in self.fixed_ends)
        return (self.delta.sorted_key(), self.n, tuple(fixed))


def target_genus(p: CountingProblem) -> int:
    g = p.n + 1 - len(p.delta) + len(p.fixed_ends)
    if g < 0:
        raise NegativeGenus(f"target genus {g} < 0 for |Δ|={len(p.delta)}, n={p.n}")
    return g


@dataclass(frozen=True)
class ToricSummary:
    rays: tuple[IntVec2, ...]
    ray_degrees: tuple[int, ...]
    anticanonical_degree: int
    dual_polygon: tuple[IntVec2, ...]

    @cached_property
    def edge_vectors(self) -> tuple[IntVec2, ...]:
        vs = self.dual_polygon
        return tuple(vs[(i + 1) % len(vs)] - vs[i] for i in range(len(vs)))

    def lattice_points(self) -> list[IntVec2]:
        xs = [v.x for v in self.dual_polygon]
        ys = [v.y for v in self.dual_polygon]
        out = []
        for x in range(min(xs), max(xs) + 1):
            for y in range(min(ys), max(ys) + 1):
                if self.contains(IntVec2(x, y)):
                    out.append(IntVec2(x, y))
        return out

    def contains(self, p) -> bool:
        vs = self.dual_polygon
        for i, a in enumerate(vs):
            if det(vs[(i + 1) % len(vs)] - a, IntVec2(*p) - a) < 0:
                return False
        return True

    def edge_directions(self) -> frozenset[IntVec2]:
        """Weighted directions any edge of a curve with this Newton polygon can take."""
        pts = self.lattice_points()
        return frozenset(rotate_cw(a - b) for a in pts for b in pts if a != b)


def _angle_key(v: IntVec2):
    # exact counterclockwise order starting from the positive x-axis
    half = 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1
    return (half, _CrossOrder(v))


class _CrossOrder:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return det(self.v, other.v) > 0

    def __eq__(self, other):
        return det(self.v, other.v) == 0


def dual_polygon(d: BalancedCollection) -> ToricSummary:
    degrees: dict[IntVec2, int] = {}
    for v in d.vectors:
        ray = v.primitive()
        degrees[ray] = degrees.get(ray, 0) + v.divisibility
    rays = sorted(degrees, key=_angle_key)
    if not any(det(rays[0], r) != 0 for r in rays):
        raise DegenerateCollinear("all vectors are collinear; the dual polygon is a segment")
    edges = sorted((rotate_cw(r) * degrees[r] for r in rays), key=_angle_key)
    verts = [ZERO]
    for e in edges[:-1]:
        verts.append(verts[-1] + e)
    lo = min(range(len(verts)), key=lambda i: tuple(verts[i]))
    base = verts[lo]
    verts = [v - base for v in verts[lo:] + verts[:lo]]
    return ToricSummary(
        rays=tuple(rays),
        ray_degrees=tuple(degrees[r] for r in rays),
        anticanonical_degree=sum(d.divisibilities),
        dual_polygon=tuple(verts),
    )


def projective_plane(degree: int) -> BalancedCollection:
    """Δ for plane curves of the given degree: d copies each of (1,0), (0,1), (-1,-1)."""
    if degree < 1:
        raise ValidationError("degree must be positive")
    return validate_balanced([(1, 0)] * degree + [(0, 1)] * degree + [(-1, -1)] * degree)
