"""Parametrized tropical curves in the plane: graphs, types, realizations, multiplicities.

Marked points sit on edges (or legs) of a trivalent skeleton rather than on
explicit bivalent vertices; ``point_assignment[j]`` names the edge carrying
point j+1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from .algebra import HalfLaurent
from .errors import MalformedType, NotTrivalent, ValidationError
from .fan import ZERO, CountingProblem, IntVec2, det, vec_sum

Point = tuple[Fraction, Fraction]

EDGE, LEG, VERTEX = "edge", "leg", "vertex"


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    bounded_edges: tuple[tuple[int, int], ...]
    legs: tuple[tuple[int, int], ...]  # (vertex, label)

    def __post_init__(self):
        for u, v in self.bounded_edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise MalformedType(f"edge ({u}, {v}) references a missing vertex")
        for v, _ in self.legs:
            if not 0 <= v < self.num_vertices:
                raise MalformedType(f"leg at missing vertex {v}")
        if self.num_vertices and not self._connected():
            raise MalformedType("graph is disconnected")

    def _connected(self) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
        for u, v in self.bounded_edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    @property
    def betti_number(self) -> int:
        return len(self.bounded_edges) - self.num_vertices + 1

    def valence(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.bounded_edges) + sum(
            1 for w, _ in self.legs if w == v
        )


@dataclass(frozen=True)
class CombinatorialType:
    graph: Graph
    edge_directions: tuple[IntVec2, ...]  # v_{u,E} for E = (u, w), seen from u
    leg_directions: tuple[IntVec2, ...]
    vertex_genus: tuple[int, ...]
    point_assignment: tuple[tuple[str, int], ...]
    fixed_labels: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        g = self.graph
        if len(self.edge_directions) != len(g.bounded_edges):
            raise MalformedType("one direction per bounded edge is required")
        if len(self.leg_directions) != len(g.legs):
            raise MalformedType("one direction per leg is required")
        if len(self.vertex_genus) != g.num_vertices:
            raise MalformedType("one genus per vertex is required")
        for d in self.leg_directions:
            if d == ZERO:
                raise MalformedType("legs must have nonzero direction")
        for v in range(g.num_vertices):
            if vec_sum(d for _, _, d in self.incident(v)) != ZERO:
                raise MalformedType(f"balancing fails at vertex {v}")
        for kind, idx in self.point_assignment:
            limit = {EDGE: len(g.bounded_edges), LEG: len(g.legs), VERTEX: g.num_vertices}
            if kind not in limit or not 0 <= idx < limit[kind]:
                raise MalformedType(f"bad point assignment ({kind}, {idx})")

    @property
    def n(self) -> int:
        return len(self.point_assignment)

    def incident(self, v: int) -> Iterator[tuple[str, int, IntVec2]]:
        """(kind, index, direction pointing away from v) for every edge and leg at v."""
        for i, (a, b) in enumerate(self.graph.bounded_edges):
            d = self.edge_directions[i]
            if a == v:
                yield EDGE, i, d
            if b == v:
                yield EDGE, i, -d
        for i, (w, _) in enumerate(self.graph.legs):
            if w == v:
                yield LEG, i, self.leg_directions[i]

    def points_on(self, kind: str, idx: int) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.point_assignment) if a == (kind, idx))

    def weight(self, kind: str, idx: int) -> int:
        d = self.edge_directions[idx] if kind == EDGE else self.leg_directions[idx]
        return d.divisibility

    def check_type_delta(self, problem: CountingProblem) -> None:
        """Legs must carry the vectors of Δ under their labels."""
        labels = sorted(lab for _, lab in self.graph.legs)
        if labels != list(range(1, len(problem.delta) + 1)):
            raise MalformedType("leg labels must be exactly 1..|Δ|")
        for (_, lab), d in zip(self.graph.legs, self.leg_directions):
            if problem.delta[lab] != d:
                raise MalformedType(f"leg {lab} has direction {tuple(d)}, expected {tuple(problem.delta[lab])}")
        if self.fixed_labels != problem.fixed_ends:
            raise MalformedType("fixed legs do not match the problem's fixed ends")
        if self.n != problem.n:
            raise MalformedType("point count does not match the problem")

    @cached_property
    def canonical_text(self) -> str:
        return canonical_form(self)


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[Point, ...]
    seed: int

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ValidationError("configuration points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class RealizedCurve:
    ctype: CombinatorialType
    positions: tuple[Point, ...]
    lengths: tuple[Fraction, ...]
    point_params: tuple[Fraction, ...]

    def check(self, config: PointConfiguration, anchors=None) -> None:
        """Verify the edge equations and incidences exactly; raise ValidationError otherwise."""
        t = self.ctype
        for i, (a, b) in enumerate(t.graph.bounded_edges):
            d, ell = t.edge_directions[i], self.lengths[i]
            if ell <= 0:
                raise ValidationError(f"edge {i} has non-positive length")
            pa, pb = self.positions[a], self.positions[b]
            if (pb[0] - pa[0], pb[1] - pa[1]) != (ell * d.x, ell * d.y):
                raise ValidationError(f"edge equation fails on edge {i}")
        for j, (kind, idx) in enumerate(t.point_assignment):
            p = self.point_on_curve(j)
            if p != config.points[j]:
                raise ValidationError(f"point {j + 1} is not on its assigned edge")
        if anchors is not None:
            for i, (v, lab) in enumerate(t.graph.legs):
                if lab in t.fixed_labels:
                    x = anchors.anchors[lab]
                    h = self.positions[v]
                    if det((h[0] - x[0], h[1] - x[1]), t.leg_directions[i]) != 0:
                        raise ValidationError(f"fixed leg {lab} is off its half-line")

    def point_on_curve(self, j: int) -> Point:
        t = self.ctype
        kind, idx = t.point_assignment[j]
        s = self.point_params[j]
        if kind == VERTEX:
            return self.positions[idx]
        if kind == EDGE:
            base = self.positions[t.graph.bounded_edges[idx][0]]
            d = t.edge_directions[idx]
        else:
            base = self.positions[t.graph.legs[idx][0]]
            d = t.leg_directions[idx]
        return (base[0] + s * d.x, base[1] + s * d.y)


def curve_genus(t: CombinatorialType) -> int:
    return t.graph.betti_number + sum(t.vertex_genus)


def _pointed_vertices(t: CombinatorialType) -> set[int]:
    return {idx for kind, idx in t.point_assignment if kind == VERTEX}


def vertex_multiplicity(t: CombinatorialType, v: int) -> int:
    dirs = [d for _, _, d in t.incident(v)]
    if len(dirs) != 3:
        raise NotTrivalent(f"vertex {v} has valence {len(dirs)}")
    return abs(det(dirs[0], dirs[1]))


def _trivalent_multiplicities(t: CombinatorialType) -> list[int]:
    pointed = _pointed_vertices(t)
    out = []
    for v in range(t.graph.num_vertices):
        val = t.graph.valence(v)
        if val == 3:
            out.append(vertex_multiplicity(t, v))
        elif not (val == 2 and v in pointed):
            raise MalformedType(f"vertex {v} is neither trivalent nor a bivalent pointed vertex")
    return out


def curve_multiplicity(t: CombinatorialType) -> int:
    m = 1
    for mv in _trivalent_multiplicities(t):
        m *= mv
    return m


def bg_multiplicity(t: CombinatorialType) -> HalfLaurent:
    out = HalfLaurent.constant(1)
    for mv in _trivalent_multiplicities(t):
        out = out * HalfLaurent.q_integer(mv)
    return out


def trivalent_count_check(t: CombinatorialType, p: CountingProblem) -> bool:
    count = sum(1 for v in range(t.graph.num_vertices) if t.graph.valence(v) == 3)
    return count == 2 * p.genus - 2 + len(p.delta)


# --- canonical form -----------------------------------------------------------


def _local_descriptors(t: CombinatorialType):
    """Per-vertex list of (neighbor or None, descriptor) for refinement and encoding."""
    out: list[list[tuple[int | None, tuple]]] = [[] for _ in range(t.graph.num_vertices)]
    for i, (a, b) in enumerate(t.graph.bounded_edges):
        pts = t.points_on(EDGE, i)
        d = t.edge_directions[i]
        out[a].append((b, ("e", tuple(d), pts)))
        out[b].append((a, ("e", tuple(-d), pts)))
    for i, (v, lab) in enumerate(t.graph.legs):
        fixed = lab if lab in t.fixed_labels else 0
        out[v].append((None, ("l", tuple(t.leg_directions[i]), t.points_on(LEG, i), fixed)))
    for v in range(t.graph.num_vertices):
        out[v].append((None, ("g", t.vertex_genus[v], t.points_on(VERTEX, v))))
    return out


def _rank(values: list) -> list[int]:
    distinct = sorted(set(values))
    index = {x: i for i, x in enumerate(distinct)}
    return [index[x] for x in values]


def _refine(colors: list[int], local) -> list[int]:
    while True:
        sig = [
            (colors[v], tuple(sorted((-1 if w is None else colors[w], desc) for w, desc in local[v])))
            for v in range(len(colors))
        ]
        new = _rank(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _encode(t: CombinatorialType, order: list[int]) -> str:
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for i, (a, b) in enumerate(t.graph.bounded_edges):
        d = t.edge_directions[i]
        pa, pb = pos[a], pos[b]
        if pa > pb or (pa == pb and tuple(-d) < tuple(d)):
            pa, pb, d = pb, pa, -d
        edges.append((pa, pb, tuple(d), t.points_on(EDGE, i)))
    legs = []
    for i, (v, lab) in enumerate(t.graph.legs):
        fixed = lab if lab in t.fixed_labels else 0
        legs.append((pos[v], tuple(t.leg_directions[i]), t.points_on(LEG, i), fixed))
    verts = [(pos[v], t.vertex_genus[v], t.points_on(VERTEX, v)) for v in range(t.graph.num_vertices)]
    parts = [
        "E" + ";".join(f"{a}-{b}:{d[0]},{d[1]}" + (f"@{'.'.join(str(j + 1) for j in p)}" if p else "") for a, b, d, p in sorted(edges)),
        "L" + ";".join(f"{a}:{d[0]},{d[1]}" + (f"@{'.'.join(str(j + 1) for j in p)}" if p else "") + (f"!F{f}" if f else "") for a, d, p, f in sorted(legs)),
    ]
    extra = [(a, g, p) for a, g, p in sorted(verts) if g or p]
    if extra:
        parts.append("V" + ";".join(f"{a}:g{g}" + (f"@{'.'.join(str(j + 1) for j in p)}" if p else "") for a, g, p in extra))
    return "|".join(parts)


def canonical_form(t: CombinatorialType) -> str:
    """Isomorphism-invariant text for a type; legs with equal direction are interchangeable."""
    local = _local_descriptors(t)
    init = _rank([tuple(sorted(desc for _, desc in local[v])) for v in range(t.graph.num_vertices)])
    best: list[str] = []

    def search(colors: list[int]) -> None:
        colors = _refine(colors, local)
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        tied = [vs for c, vs in sorted(classes.items()) if len(vs) > 1]
        if not tied:
            order = sorted(range(len(colors)), key=lambda v: colors[v])
            text = _encode(t, order)
            if not best or text < best[0]:
                best[:] = [text]
            return
        for v in tied[0]:
            # individualize v: split its class, v first
            shifted = [2 * c + (0 if u == v else 1) if c == colors[v] else 2 * c for u, c in enumerate(colors)]
            search(_rank(shifted))

    if t.graph.num_vertices == 0:
        return _encode(t, [])
    search(init)
    return best[0]
