"""Ray-propagation search for rigid genus-0 curves through a point configuration.

Cutting a rigid curve at its marked points leaves trees with exactly one
unfixed leg.  Orienting every such tree towards that leg, each trivalent
vertex has two incoming edges, so the curve can be grown outward from the
points: rays leave each point along its edge, two rays meeting at a vertex
merge into one whose direction is their sum, and every chain ends in a leg.

The search is organized around two kinds of sub-curve, both keyed by the legs
``S`` (counts per leg class) and the constraint tokens ``T`` (point indices,
then one token per fixed end) they contain:

* a *rigid piece* has as many points as unfixed legs; its position is forced
  and it emits a single ray towards the rest of the curve;
* a *flexible piece* has one point fewer; it is grown from an incoming ray.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Union

from gmpy2 import mpq

from .errors import DegenerateConfiguration, ValidationError
from .fan import ZERO, CountingProblem, IntVec2, det
from .tropical import EDGE, LEG, CombinatorialType, Graph, PointConfiguration, RealizedCurve

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Rigid:
    origin: Point | None  # None: the ray comes in from infinity along a fixed end
    base: Point  # a point on the ray's line (the origin, or the fixed end's anchor)
    delta: IntVec2  # direction of the emitted ray
    node: tuple


@dataclass(frozen=True)
class LegEnd:
    cls: int


@dataclass(frozen=True)
class Junction:
    pos: Point
    piece: Rigid
    rest: "Flex"


Flex = Union[LegEnd, Junction]


def _meet(b1: Point, inf1: bool, d1, b2: Point, inf2: bool, d2) -> Point | None:
    """Intersection of two rays strictly ahead of their origins (lines from infinity accept any point)."""
    den = det(d1, d2)
    w = (b2[0] - b1[0], b2[1] - b1[1])
    if den == 0:
        if det(w, d1) == 0:
            raise DegenerateConfiguration("two candidate edges are collinear")
        return None
    s = det(w, d2) / den
    t = det(w, d1) / den
    if (not inf1 and s == 0) or (not inf2 and t == 0):
        raise DegenerateConfiguration("a candidate vertex falls on a marked point")
    if (not inf1 and s < 0) or (not inf2 and t < 0):
        return None
    return (b1[0] + s * d1[0], b1[1] + s * d1[1])


class PropagationSearch:
    def __init__(self, problem: CountingProblem, config: PointConfiguration, anchors=None, allowed=None):
        if problem.genus != 0:
            raise ValidationError("the propagation search handles target genus 0 only")
        if problem.n == 0:
            raise ValidationError("the propagation search needs at least one marked point")
        self.problem = problem
        self.points = config.points
        # the search runs on gmpy2 rationals; assembled curves are converted back to Fraction
        self._fast_points = [(mpq(x.numerator, x.denominator), mpq(y.numerator, y.denominator)) for x, y in config.points]
        self.n = len(config.points)
        self.allowed = allowed
        delta = problem.delta
        classes: dict[IntVec2, list[int]] = {}
        for lab in range(1, len(delta) + 1):
            if lab not in problem.fixed_ends:
                classes.setdefault(delta[lab], []).append(lab)
        self.class_dirs = list(classes)
        self.class_labels = [classes[d] for d in self.class_dirs]
        self.full = tuple(len(v) for v in self.class_labels)
        self.fixed_labels = sorted(problem.fixed_ends)
        self.fixed_dirs = [delta[lab] for lab in self.fixed_labels]
        if self.fixed_labels and anchors is None:
            raise ValidationError("fixed ends need anchors")
        self.fixed_anchors = (
            [tuple(mpq(c.numerator, c.denominator) for c in anchors.anchors[lab]) for lab in self.fixed_labels]
            if anchors
            else []
        )
        self.ntok = self.n + len(self.fixed_labels)
        self.point_mask = (1 << self.n) - 1
        self._submultisets: dict[tuple, dict[int, list[tuple]]] = {}
        self._rigid: dict[tuple, list[Rigid]] = {}
        self._flex: dict[tuple, list[Flex]] = {}

    # -- bookkeeping helpers --

    def _sum(self, S: tuple, T: int) -> IntVec2:
        x = y = 0
        for c, d in zip(S, self.class_dirs):
            x += c * d.x
            y += c * d.y
        for i, d in enumerate(self.fixed_dirs):
            if T >> (self.n + i) & 1:
                x += d.x
                y += d.y
        return IntVec2(x, y)

    def _npts(self, T: int) -> int:
        return bin(T & self.point_mask).count("1")

    def _subs(self, S: tuple) -> dict[int, list[tuple]]:
        subs = self._submultisets.get(S)
        if subs is None:
            subs = {}
            for sub in product(*(range(c + 1) for c in S)):
                subs.setdefault(sum(sub), []).append(sub)
            self._submultisets[S] = subs
        return subs

    def _ok_direction(self, v: IntVec2) -> bool:
        return v != ZERO and (self.allowed is None or v in self.allowed)

    @staticmethod
    def _submasks(T: int):
        sub = T
        while sub:
            yield sub
            sub = (sub - 1) & T

    # -- pieces --

    def rigid(self, S: tuple, T: int) -> list[Rigid]:
        key = (S, T)
        hit = self._rigid.get(key)
        if hit is not None:
            return hit
        out: list[Rigid] = []
        total = self._sum(S, T)
        size = sum(S)
        if T and self._npts(T) == size and self._ok_direction(total):
            delta = -total
            if size == 0 and T & (T - 1) == 0:
                i = T.bit_length() - 1 - self.n
                a = self.fixed_anchors[i]
                out.append(Rigid(None, a, delta, ("fixed", self.fixed_labels[i])))
            for j in range(self.n):
                if T >> j & 1:
                    p = self._fast_points[j]
                    for fl in self.flex(S, T & ~(1 << j), p, total):
                        out.append(Rigid(p, p, delta, ("point", j, fl)))
            low = T & -T
            for T1 in self._submasks(T):
                if not T1 & low or T1 == T:
                    continue
                T2 = T & ~T1
                for S1 in self._subs(S).get(self._npts(T1), ()):
                    S2 = tuple(a - b for a, b in zip(S, S1))
                    pa = self.rigid(S1, T1)
                    if not pa:
                        continue
                    pb = self.rigid(S2, T2)
                    for A in pa:
                        for B in pb:
                            o = _meet(A.base, A.origin is None, A.delta, B.base, B.origin is None, B.delta)
                            if o is not None:
                                out.append(Rigid(o, o, delta, ("merge", A, B)))
        self._rigid[key] = out
        return out

    def flex(self, S: tuple, T: int, x: Point, d: IntVec2) -> list[Flex]:
        key = (S, T, x, d)
        hit = self._flex.get(key)
        if hit is not None:
            return hit
        out: list[Flex] = []
        if T == 0 and sum(S) == 1:
            out.append(LegEnd(S.index(1)))
        else:
            for T1 in self._submasks(T):
                T2 = T & ~T1
                for S1 in self._subs(S).get(self._npts(T1), ()):
                    S2 = tuple(a - b for a, b in zip(S, S1))
                    if not any(S2):
                        continue
                    d2 = self._sum(S2, T2)
                    if not self._ok_direction(d2):
                        continue
                    for R in self.rigid(S1, T1):
                        o = _meet(x, False, d, R.base, R.origin is None, R.delta)
                        if o is None:
                            continue
                        for rest in self.flex(S2, T2, o, d2):
                            out.append(Junction(o, R, rest))
        self._flex[key] = out
        return out

    def curves(self) -> list[tuple[IntVec2, Flex, Flex]]:
        """Every rigid curve, split at the first marked point into its two flexible halves."""
        p0 = self._fast_points[0]
        T_all = ((1 << self.ntok) - 1) & ~1
        out = []
        for TA in [0, *self._submasks(T_all)]:
            TB = T_all & ~TA
            for SA in self._subs(self.full).get(self._npts(TA) + 1, ()):
                SB = tuple(a - b for a, b in zip(self.full, SA))
                if not any(SB):
                    continue
                w = self._sum(SA, TA)
                if not self._ok_direction(w) or tuple(w) <= (0, 0):
                    continue
                fa = self.flex(SA, TA, p0, w)
                if not fa:
                    continue
                fb = self.flex(SB, TB, p0, -w)
                for a in fa:
                    for b in fb:
                        out.append((w, a, b))
        return out

    # -- assembling a curve from the search tree --

    def assemble(self, w: IntVec2, fa: Flex, fb: Flex) -> RealizedCurve:
        builder = _Builder(self)
        sa = builder.flex_stub(fa, w)
        sb = builder.flex_stub(fb, -w)
        builder.join(sa, sb, w, point=0)
        return builder.finish()


class _Builder:
    """Turns a search tree into a CombinatorialType plus exact geometry."""

    def __init__(self, search: PropagationSearch):
        self.s = search
        self.positions: list[Point] = []
        self.edges: list[tuple[int, int]] = []
        self.edge_dirs: list[IntVec2] = []
        self.legs: list[tuple[int, int]] = []
        self.leg_dirs: list[IntVec2] = []
        self.assign: dict[int, tuple[str, int]] = {}
        self.params: dict[int, Fraction] = {}
        self.next_label = [0] * len(search.class_dirs)

    def _vertex(self, pos) -> int:
        self.positions.append(tuple(Fraction(int(c.numerator), int(c.denominator)) for c in pos))
        return len(self.positions) - 1

    # A stub is (kind, payload, points): the far end of an edge leaving some vertex,
    # with the marked points met along the way.

    def flex_stub(self, f: Flex, d: IntVec2):
        if isinstance(f, LegEnd):
            labels = self.s.class_labels[f.cls]
            lab = labels[self.next_label[f.cls]]
            self.next_label[f.cls] += 1
            return ("leg", lab, [])
        v = self._vertex(f.pos)
        self.attach(v, self.rigid_stub(f.piece), -f.piece.delta)
        onward = d + f.piece.delta
        self.attach(v, self.flex_stub(f.rest, onward), onward)
        return ("vertex", v, [])

    def rigid_stub(self, r: Rigid):
        kind = r.node[0]
        if kind == "fixed":
            return ("fixed", r.node[1], [])
        if kind == "point":
            j, fl = r.node[1], r.node[2]
            stub = self.flex_stub(fl, -r.delta)
            stub[2].append(j)
            return stub
        _, A, B = r.node
        v = self._vertex(r.origin)
        self.attach(v, self.rigid_stub(A), -A.delta)
        self.attach(v, self.rigid_stub(B), -B.delta)
        return ("vertex", v, [])

    def attach(self, v: int, stub, d: IntVec2) -> None:
        """Connect vertex v to the stub's far end; d is the direction leaving v."""
        kind, payload, pts = stub
        pv = self.positions[v]
        if kind == "vertex":
            self.edges.append((v, payload))
            self.edge_dirs.append(d)
            idx, where = len(self.edges) - 1, EDGE
        else:
            self.legs.append((v, payload))
            self.leg_dirs.append(d)
            idx, where = len(self.legs) - 1, LEG
        for j in pts:
            p = self.s.points[j]
            self.assign[j] = (where, idx)
            self.params[j] = (p[0] - pv[0]) / d.x if d.x else (p[1] - pv[1]) / d.y

    def join(self, sa, sb, w: IntVec2, point: int) -> None:
        sa[2].append(point)
        if sa[0] == "vertex":
            self.attach(sa[1], ("vertex", sb[1], sa[2]) if sb[0] == "vertex" else (sb[0], sb[1], sa[2] + sb[2]), -w)
        elif sb[0] == "vertex":
            self.attach(sb[1], (sa[0], sa[1], sa[2] + sb[2]), w)
        else:
            raise ValidationError("a curve with no vertex cannot occur for a non-collinear Δ")

    def finish(self) -> RealizedCurve:
        s = self.s
        graph = Graph(len(self.positions), tuple(self.edges), tuple(self.legs))
        ctype = CombinatorialType(
            graph=graph,
            edge_directions=tuple(self.edge_dirs),
            leg_directions=tuple(self.leg_dirs),
            vertex_genus=(0,) * len(self.positions),
            point_assignment=tuple(self.assign[j] for j in range(s.n)),
            fixed_labels=frozenset(s.fixed_labels),
        )
        lengths = []
        for (a, b), d in zip(self.edges, self.edge_dirs):
            pa, pb = self.positions[a], self.positions[b]
            lengths.append((pb[0] - pa[0]) / d.x if d.x else (pb[1] - pa[1]) / d.y)
        return RealizedCurve(ctype, tuple(self.positions), tuple(lengths), tuple(self.params[j] for j in range(s.n)))
