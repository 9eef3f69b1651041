"""Rigid tropical curves through generic points: configurations, realization, counts."""
from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from ._linalg import solve_unique
from .algebra import HalfLaurent, laurent_eval
from .errors import DegenerateConfiguration, GenericityExhausted, ValidationError
from .fan import ZERO, CountingProblem, IntVec2, det, dual_polygon
from .search import PropagationSearch
from .tropical import (
    EDGE,
    LEG,
    VERTEX,
    CombinatorialType,
    Graph,
    PointConfiguration,
    RealizedCurve,
    bg_multiplicity,
    curve_multiplicity,
)

log = logging.getLogger(__name__)

RETRY_BOUND = 16
SEED_MULTIPLIER = 2654435761
Y_DENOMINATOR = 10**6


@dataclass(frozen=True)
class FixedEndData:
    anchors: dict[int, tuple[Fraction, Fraction]]  # Δ^F label -> base point x_v

    def __hash__(self):
        return hash(tuple(sorted(self.anchors.items())))


@dataclass(frozen=True)
class EnumerationResult:
    problem: CountingProblem
    config: PointConfiguration
    curves: tuple[RealizedCurve, ...]
    classical_count: int
    refined_count: HalfLaurent
    anchors: FixedEndData | None = None

    def __post_init__(self):
        if sum(curve_multiplicity(c.ctype) for c in self.curves) != self.classical_count:
            raise ValidationError("classical count is not the sum of curve multiplicities")
        refined = HalfLaurent.constant(0)
        for c in self.curves:
            refined = refined + bg_multiplicity(c.ctype)
        if refined != self.refined_count:
            raise ValidationError("refined count is not the sum of q-multiplicities")
        if laurent_eval(self.refined_count, 1) != self.classical_count:
            raise ValidationError("refined count does not specialize to the classical count")


def generate_point_config(p: CountingProblem, seed: int) -> PointConfiguration:
    """Stretched configuration: x_j = 10^(j^2), y_j a seeded rational with denominator 10^6."""
    rng = random.Random(seed)
    pts = []
    for j in range(1, p.n + 1):
        y = Fraction(rng.randrange(1, Y_DENOMINATOR), Y_DENOMINATOR)
        pts.append((Fraction(10 ** (j * j)), y))
    return PointConfiguration(tuple(pts), seed)


def generate_anchors(p: CountingProblem, seed: int) -> FixedEndData:
    """Seeded base points for the fixed half-lines, well away from the stretched points."""
    rng = random.Random(f"anchors/{seed}")
    anchors = {}
    for lab in sorted(p.fixed_ends):
        x = Fraction(rng.randrange(-(10**9), 10**9), 10**3)
        y = Fraction(rng.randrange(-(10**9), 10**9), 10**3)
        anchors[lab] = (x, y)
    return FixedEndData(anchors)


# --- realization by exact linear algebra ---------------------------------------


def realize_type(
    t: CombinatorialType, config: PointConfiguration, anchors: FixedEndData | None = None
) -> RealizedCurve | None:
    """Solve the edge, cycle and incidence equations of a type over the rationals.

    Returns the unique curve with strictly positive lengths and points strictly
    inside their edges, None if there is no such unique solution, and raises
    DegenerateConfiguration if the unique solution touches a boundary.
    """
    g = t.graph
    if len(config) != t.n:
        raise ValidationError("configuration size does not match the type")
    ne = len(g.bounded_edges)
    nunk = 2 + ne + t.n
    # spanning tree from vertex 0: h(V) as an affine form in the unknowns
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(g.num_vertices)}
    for i, (a, b) in enumerate(g.bounded_edges):
        adj[a].append((b, i, 1))
        adj[b].append((a, i, -1))
    forms: dict[int, list[list[Fraction]]] = {}
    zero = [Fraction(0)] * nunk
    root_x = list(zero)
    root_y = list(zero)
    root_x[0] = Fraction(1)
    root_y[1] = Fraction(1)
    forms[0] = [root_x, root_y]
    tree_edges = set()
    stack = [0]
    while stack:
        v = stack.pop()
        for w, i, sgn in adj[v]:
            if w in forms:
                continue
            d = t.edge_directions[i] * sgn
            fx, fy = list(forms[v][0]), list(forms[v][1])
            fx[2 + i] += d.x
            fy[2 + i] += d.y
            forms[w] = [fx, fy]
            tree_edges.add(i)
            stack.append(w)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, (a, b) in enumerate(g.bounded_edges):
        if i in tree_edges:
            continue
        d = t.edge_directions[i]
        for c, dc in ((0, d.x), (1, d.y)):
            row = [x - y for x, y in zip(forms[b][c], forms[a][c])]
            row[2 + i] -= dc
            rows.append(row)
            rhs.append(Fraction(0))
    for j, (kind, idx) in enumerate(t.point_assignment):
        p = config.points[j]
        if kind == VERTEX:
            base, d = idx, ZERO
        elif kind == EDGE:
            base, d = g.bounded_edges[idx][0], t.edge_directions[idx]
        else:
            base, d = g.legs[idx][0], t.leg_directions[idx]
        for c, dc in ((0, d.x), (1, d.y)):
            row = list(forms[base][c])
            row[2 + ne + j] += dc
            rows.append(row)
            rhs.append(p[c])
        if kind == VERTEX:
            row = list(zero)
            row[2 + ne + j] = Fraction(1)
            rows.append(row)
            rhs.append(Fraction(0))
    for i, (v, lab) in enumerate(g.legs):
        if lab not in t.fixed_labels:
            continue
        if anchors is None:
            raise ValidationError("type has fixed ends but no anchors were given")
        x = anchors.anchors[lab]
        d = t.leg_directions[i]
        rows.append([d.y * a - d.x * b for a, b in zip(forms[v][0], forms[v][1])])
        rhs.append(d.y * x[0] - d.x * x[1])
    sol = solve_unique(rows, rhs)
    if sol is None:
        return None
    lengths = tuple(sol[2 : 2 + ne])
    params = tuple(sol[2 + ne :])
    boundary = False
    for ell in lengths:
        if ell < 0:
            return None
        boundary |= ell == 0
    for j, (kind, idx) in enumerate(t.point_assignment):
        if kind == VERTEX:
            continue
        s = params[j]
        top = lengths[idx] if kind == EDGE else None
        if s < 0 or (top is not None and s > top):
            return None
        boundary |= s == 0 or (top is not None and s == top)
    if boundary:
        raise DegenerateConfiguration("the realization sits on the boundary of its cone")
    positions = tuple(
        (
            sum((a * b for a, b in zip(forms[v][0], sol)), Fraction(0)),
            sum((a * b for a, b in zip(forms[v][1], sol)), Fraction(0)),
        )
        for v in range(g.num_vertices)
    )
    return RealizedCurve(t, positions, lengths, params)


def certify_generic(curve: RealizedCurve) -> None:
    """Check the genericity conditions on a realized rigid curve; raise DegenerateConfiguration."""
    if len(set(curve.positions)) != len(curve.positions):
        raise DegenerateConfiguration("two vertices have the same image")
    t = curve.ctype
    pieces = []
    for i, (a, b) in enumerate(t.graph.bounded_edges):
        pieces.append((curve.positions[a], t.edge_directions[i], curve.lengths[i]))
    for i, (v, _) in enumerate(t.graph.legs):
        pieces.append((curve.positions[v], t.leg_directions[i], None))
    for (p1, d1, l1), (p2, d2, l2) in combinations(pieces, 2):
        if det(d1, d2) != 0:
            continue
        w = (p2[0] - p1[0], p2[1] - p1[1])
        if det(w, d1) != 0:
            continue
        # collinear: compare the parameter intervals along d1
        scale = Fraction(d2.x, d1.x) if d1.x else Fraction(d2.y, d1.y)
        off = w[0] / d1.x if d1.x else w[1] / d1.y
        lo1, hi1 = Fraction(0), (math.inf if l1 is None else l1)
        if l2 is None:
            lo2, hi2 = (off, math.inf) if scale > 0 else (-math.inf, off)
        else:
            lo2, hi2 = sorted((off, off + scale * l2))
        if max(lo1, lo2) < min(hi1, hi2):
            raise DegenerateConfiguration("two edges overlap along a segment")


# --- brute-force type enumeration ----------------------------------------------


def _trivalent_trees(k: int):
    """All trivalent trees with leaves 0..k-1 (as edge lists over nodes; internal nodes >= k)."""
    if k < 3:
        return
    def grow(edges, nxt, leaf):
        if leaf == k:
            yield edges
            return
        for i, (a, b) in enumerate(edges):
            rest = edges[:i] + edges[i + 1 :]
            yield from grow(rest + [(a, nxt), (nxt, b), (nxt, leaf)], nxt + 1, leaf + 1)
    yield from grow([(k, 0), (k, 1), (k, 2)], k + 1, 3)


def _one_leg_ok(t: CombinatorialType, cut: set[tuple[str, int]]) -> bool:
    """Removing the marked points leaves components with exactly one unfixed leg each."""
    g = t.graph
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (a, b) in enumerate(g.bounded_edges):
        if (EDGE, i) not in cut:
            parent[find(a)] = find(b)
    free_legs: dict[int, int] = {}
    for i, (v, lab) in enumerate(g.legs):
        if (LEG, i) in cut or lab in t.fixed_labels:
            continue
        r = find(v)
        free_legs[r] = free_legs.get(r, 0) + 1
    roots = {find(v) for v in range(g.num_vertices)}
    return all(free_legs.get(r, 0) == 1 for r in roots)


def enumerate_types(p: CountingProblem) -> list[CombinatorialType]:
    """Every candidate type for the problem, up to isomorphism (exponential; small problems only)."""
    genus = p.genus
    allowed = dual_polygon(p.delta).edge_directions()
    m = len(p.delta)
    k = m + 2 * genus
    glue_choices = sorted(allowed) if genus else [()]
    skeletons: dict[str, CombinatorialType] = {}
    for tree in _trivalent_trees(k):
        internal = sorted({x for e in tree for x in e if x >= k})
        vid = {x: i for i, x in enumerate(internal)}
        leaf_at = {}
        inner = []
        for a, b in tree:
            if a >= k and b >= k:
                inner.append((a, b))
            else:
                leaf, node = (a, b) if a < k else (b, a)
                leaf_at[leaf] = node
        stubs = list(range(m, k))
        for pairing in _pairings(stubs):
            for dirs in product(glue_choices, repeat=genus):
                leaf_dir = {i: p.delta[i + 1] for i in range(m)}
                for (sa, sb), u in zip(pairing, dirs):
                    leaf_dir[sa] = IntVec2(*u)
                    leaf_dir[sb] = -IntVec2(*u)
                t = _build_skeleton(p, tree, inner, leaf_at, leaf_dir, vid, pairing, allowed)
                if t is not None:
                    skeletons.setdefault(t.canonical_text, t)
    out: dict[str, CombinatorialType] = {}
    for sk in skeletons.values():
        g = sk.graph
        slots = [(EDGE, i) for i in range(len(g.bounded_edges))] + [
            (LEG, i) for i, (_, lab) in enumerate(g.legs) if lab not in p.fixed_ends
        ]
        for chosen in combinations(slots, p.n):
            if not _one_leg_ok(sk, set(chosen)):
                continue
            for perm in permutations(chosen):
                t = CombinatorialType(sk.graph, sk.edge_directions, sk.leg_directions, sk.vertex_genus, tuple(perm), sk.fixed_labels)
                out.setdefault(t.canonical_text, t)
    return [out[key] for key in sorted(out)]


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1 :]
        for pr in _pairings(rest):
            yield [(a, items[i])] + pr


def _build_skeleton(p, tree, inner, leaf_at, leaf_dir, vid, pairing, allowed):
    # outgoing direction of a tree edge from node x towards y = sum of leaf directions beyond y
    adj: dict[int, list[int]] = {}
    for a, b in tree:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    def beyond(x, y):
        total = IntVec2(0, 0)
        stack = [(y, x)]
        while stack:
            node, prev = stack.pop()
            if node in leaf_dir:
                total = total + leaf_dir[node]
                continue
            for z in adj[node]:
                if z != prev:
                    stack.append((z, node))
        return total

    edges, edge_dirs = [], []
    for a, b in inner:
        d = beyond(a, b)
        if d == ZERO or d not in allowed:
            return None
        edges.append((vid[a], vid[b]))
        edge_dirs.append(d)
    for sa, sb in pairing:
        u = leaf_dir[sa]
        edges.append((vid[leaf_at[sa]], vid[leaf_at[sb]]))
        edge_dirs.append(u)
    m = len(p.delta)
    legs = tuple((vid[leaf_at[i]], i + 1) for i in range(m))
    try:
        graph = Graph(len(vid), tuple(edges), legs)
        return CombinatorialType(
            graph,
            tuple(edge_dirs),
            tuple(p.delta[i + 1] for i in range(m)),
            (0,) * len(vid),
            (),
            frozenset(p.fixed_ends),
        )
    except ValidationError:
        return None


# --- full enumeration -------------------------------------------------------------


def _certify(args):
    curve, config, anchors = args
    again = realize_type(curve.ctype, config, anchors)
    if again is None or again.positions != curve.positions or again.lengths != curve.lengths:
        raise RuntimeError(f"search and linear solve disagree on {curve.ctype.canonical_text}")
    certify_generic(again)
    return again


def _collect(problem, config, anchors, method, jobs) -> list[RealizedCurve]:
    if method == "auto":
        method = "propagation" if problem.genus == 0 and problem.n >= 1 else "brute"
    if method == "propagation":
        allowed = dual_polygon(problem.delta).edge_directions()
        search = PropagationSearch(problem, config, anchors, allowed)
        found = [search.assemble(*c) for c in search.curves()]
        tasks = [(c, config, anchors) for c in found]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(_certify, tasks))
        return [_certify(t) for t in tasks]
    if method == "brute":
        curves = []
        for t in enumerate_types(problem):
            c = realize_type(t, config, anchors)
            if c is not None:
                certify_generic(c)
                curves.append(c)
        return curves
    raise ValidationError(f"unknown enumeration method {method!r}")


def _enumerate(problem: CountingProblem, seed: int, fixed: bool, method: str, jobs: int) -> EnumerationResult:
    s = seed
    for attempt in range(RETRY_BOUND):
        config = generate_point_config(problem, s)
        anchors = generate_anchors(problem, s) if fixed else None
        try:
            curves = _collect(problem, config, anchors, method, jobs)
        except DegenerateConfiguration as exc:
            log.info("seed %d not generic (%s); re-seeding", s, exc)
            s = s * SEED_MULTIPLIER + attempt + 1
            continue
        curves.sort(key=lambda c: c.ctype.canonical_text)
        classical = sum(curve_multiplicity(c.ctype) for c in curves)
        refined = HalfLaurent.constant(0)
        for c in curves:
            refined = refined + bg_multiplicity(c.ctype)
        return EnumerationResult(problem, config, tuple(curves), classical, refined, anchors)
    raise GenericityExhausted(f"no generic configuration after {RETRY_BOUND} seeds starting from {seed}")


def enumerate_curves(p: CountingProblem, seed: int = 1, method: str = "auto", jobs: int = 1) -> EnumerationResult:
    if p.fixed_ends:
        raise ValidationError("problem has fixed ends; use enumerate_curves_fixed_ends")
    return _enumerate(p, seed, False, method, jobs)


def enumerate_curves_fixed_ends(
    p: CountingProblem, anchors: FixedEndData | None = None, seed: int = 1, method: str = "auto", jobs: int = 1
) -> EnumerationResult:
    """Fixed-end variant; anchors default to seeded ones (re-drawn together with the points on retry)."""
    if not p.fixed_ends:
        raise ValidationError("fixed_ends is empty; use enumerate_curves")
    if anchors is None:
        return _enumerate(p, seed, True, method, jobs)
    if set(anchors.anchors) != set(p.fixed_ends):
        raise ValidationError("anchors must be given for exactly the fixed ends")
    s = seed
    for attempt in range(RETRY_BOUND):
        config = generate_point_config(p, s)
        try:
            curves = _collect(p, config, anchors, method, jobs)
        except DegenerateConfiguration:
            s = s * SEED_MULTIPLIER + attempt + 1
            continue
        curves.sort(key=lambda c: c.ctype.canonical_text)
        classical = sum(curve_multiplicity(c.ctype) for c in curves)
        refined = sum((bg_multiplicity(c.ctype) for c in curves), HalfLaurent.constant(0))
        return EnumerationResult(p, config, tuple(curves), classical, refined, anchors)
    raise GenericityExhausted(f"no generic configuration after {RETRY_BOUND} seeds starting from {seed}")
