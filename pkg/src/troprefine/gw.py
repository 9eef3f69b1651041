"""Higher-genus generating series from refined tropical counts.

Under q = e^{iu} each trivalent vertex of multiplicity m contributes
F_m(u) = 2 sin(m u / 2), the real form of (-i)(q^{m/2} - q^{-m/2}).  Summing the
per-vertex products over the curves gives a series whose u^{2g-2+|Δ|}
coefficient is the genus-g invariant N_g.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    HalfLaurent,
    TruncatedSeries,
    format_rational,
    laurent_to_series,
    series_divide,
    sine_numerator_series,
)
from .enumeration import EnumerationResult
from .errors import BelowTargetGenus, InvalidQuadrilateral, OrderExceeded, RouteMismatch, ValidationError
from .fan import CountingProblem, IntVec2, det
from .tropical import _trivalent_multiplicities


@dataclass(frozen=True)
class GWSeries:
    problem: CountingProblem
    series: TruncatedSeries
    leading_power: int
    invariants_by_genus: dict[int, Fraction] = field(default_factory=dict)
    refined_count: HalfLaurent | None = None

    def __post_init__(self):
        for k in range(self.series.order + 1):
            c = self.series[k]
            if c and (k < self.leading_power or (k - self.leading_power) % 2):
                raise ValidationError(f"series has a coefficient at u^{k}, off the parity of u^{self.leading_power}")

    @property
    def base_genus(self) -> int:
        return (self.leading_power + 2 - len(self.problem.delta)) // 2

    def to_json(self) -> dict:
        return {
            "leading_power": self.leading_power,
            "series": self.series.to_json(),
            "invariants": {str(g): format_rational(v) for g, v in sorted(self.invariants_by_genus.items())},
            "refined_count": None if self.refined_count is None else self.refined_count.to_json(),
        }


def vertex_contribution(m: int, order: int) -> TruncatedSeries:
    """F_m(u) = 2 sin(m u / 2); depends on the vertex only through m."""
    return sine_numerator_series(m, order)


def _genus_table(problem: CountingProblem, series: TruncatedSeries, leading: int) -> dict[int, Fraction]:
    base = (leading + 2 - len(problem.delta)) // 2
    return {base + j: series[leading + 2 * j] for j in range((series.order - leading) // 2 + 1)}


def _laurent_route(refined: HalfLaurent, k: int, order: int) -> TruncatedSeries:
    """Series of (-i)^k N(q) (q^{1/2} - q^{-1/2})^k."""
    p = refined * HalfLaurent.sine_numerator(1) ** k
    s = laurent_to_series(p, order)
    # laurent_to_series already absorbs one factor of -i when p is antisymmetric
    sign = (-1) ** ((k - 1) // 2) if k % 2 else (-1) ** (k // 2)
    return s * sign


def _vertex_route(result: EnumerationResult, order: int) -> TruncatedSeries:
    total = TruncatedSeries.zero(order)
    for c in result.curves:
        term = TruncatedSeries.one(order)
        for m in _trivalent_multiplicities(c.ctype):
            term = term * vertex_contribution(m, order)
        total = total + term
    return total


def _build(result: EnumerationResult, order: int, prefactor: Fraction) -> GWSeries:
    p = result.problem
    k = 2 * p.genus - 2 + len(p.delta)
    by_vertex = _vertex_route(result, order)
    by_laurent = _laurent_route(result.refined_count, k, order)
    if by_vertex != by_laurent:
        raise RouteMismatch(f"per-vertex series {by_vertex} differs from Laurent-side series {by_laurent}")
    s = by_vertex * prefactor
    return GWSeries(p, s, k, _genus_table(p, s, k), result.refined_count)


def gw_generating_series(r: EnumerationResult, order: int) -> GWSeries:
    """Σ_h Π_V F_{m(V)}(u), cross-checked against the Laurent-side product."""
    return _build(r, order, Fraction(1))


def gw_series_fixed_ends(r: EnumerationResult, order: int) -> GWSeries:
    """As gw_generating_series, times Π 1/|v| over the fixed ends."""
    p = r.problem
    if not p.fixed_ends:
        return gw_generating_series(r, order)
    prefactor = Fraction(1)
    for lab in p.fixed_ends:
        prefactor /= p.delta[lab].divisibility
    return _build(r, order, prefactor)


def series_from_refined_count(problem: CountingProblem, refined: HalfLaurent, order: int) -> GWSeries:
    """Series obtained from an arbitrary refined count by the Laurent-side formula alone."""
    k = 2 * problem.genus - 2 + len(problem.delta)
    s = _laurent_route(refined, k, order)
    return GWSeries(problem, s, k, _genus_table(problem, s, k), refined)


def extract_invariant(s: GWSeries, g: int) -> Fraction:
    """N_g, the coefficient of u^{2g-2+|Δ|}."""
    if g < s.base_genus:
        raise BelowTargetGenus(f"genus {g} is below the target genus {s.base_genus}")
    power = 2 * g - 2 + len(s.problem.delta)
    if power > s.series.order:
        raise OrderExceeded(f"u^{power} is beyond the truncation order {s.series.order}")
    return s.series[power]


# --- the quadrilateral identity and the recursion it implies --------------------


@dataclass(frozen=True)
class QuadrilateralInstance:
    A: IntVec2
    B: IntVec2
    C: IntVec2
    D: IntVec2

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, IntVec2(*getattr(self, name)))
        validate_quadrilateral(self)

    @property
    def E(self) -> IntVec2:
        return self.B + self.D - self.A

    def doubled_areas(self) -> dict[str, int]:
        A, B, C, D, E = self.A, self.B, self.C, self.D, self.E
        tri = lambda p, q, r: abs(det(q - p, r - p))  # noqa: E731
        return {
            "ABD": tri(A, B, D),
            "BCD": tri(B, C, D),
            "ACD": tri(A, C, D),
            "ABC": tri(A, B, C),
            "BCE": tri(B, C, E),
            "DEC": tri(D, E, C),
        }


def validate_quadrilateral(q: QuadrilateralInstance) -> None:
    vs = [q.A, q.B, q.C, q.D]
    sides = [vs[(i + 1) % 4] - vs[i] for i in range(4)]
    turns = [det(sides[i], sides[(i + 1) % 4]) for i in range(4)]
    if not (all(t > 0 for t in turns) or all(t < 0 for t in turns)):
        raise InvalidQuadrilateral("ABCD is not a strictly convex quadrilateral")
    if det(sides[0], sides[2]) == 0 or det(sides[1], sides[3]) == 0:
        raise InvalidQuadrilateral("ABCD has a pair of parallel sides")
    sign = 1 if turns[0] > 0 else -1
    e = q.E
    if not all(sign * det(sides[i], e - vs[i]) > 0 for i in range(4)):
        raise InvalidQuadrilateral("E = B + D - A is not strictly inside ABCD")


@lru_cache(maxsize=None)
def _F_series_product(a: int, b: int, order: int) -> TruncatedSeries:
    return vertex_contribution(a, order) * vertex_contribution(b, order)


@lru_cache(maxsize=None)
def _F_laurent_product(a: int, b: int) -> HalfLaurent:
    return HalfLaurent.sine_numerator(a) * HalfLaurent.sine_numerator(b)


def quad_identity_check(q: QuadrilateralInstance, order: int) -> bool:
    """F(2|ACD|)F(2|ABC|) = F(2|BCD|)F(2|ABD|) + F(2|BCE|)F(2|DEC|), in q and in u."""
    validate_quadrilateral(q)
    ar = q.doubled_areas()
    if any(v <= 0 for v in ar.values()):
        raise InvalidQuadrilateral("a sub-triangle is degenerate")
    lhs_q = _F_laurent_product(ar["ACD"], ar["ABC"])
    rhs_q = _F_laurent_product(ar["BCD"], ar["ABD"]) + _F_laurent_product(ar["BCE"], ar["DEC"])
    lhs_u = _F_series_product(ar["ACD"], ar["ABC"], order)
    rhs_u = _F_series_product(ar["BCD"], ar["ABD"], order) + _F_series_product(ar["BCE"], ar["DEC"], order)
    return lhs_q == rhs_q and lhs_u == rhs_u


def lattice_quadrilaterals(max_doubled_area: int = 20):
    """Every valid instance with all six doubled areas at most the bound, up to GL2(Z) and translation.

    Normal form: A = 0, B = (b, 0) with b > 0, D = (d1, d2) with 0 <= d1 < d2.
    """
    M = max_doubled_area
    A = IntVec2(0, 0)
    for b in range(1, M + 1):
        for d2 in range(1, M // b + 1):
            for d1 in range(d2):
                B, D = IntVec2(b, 0), IntVec2(d1, d2)
                # 2|ABC| = b*c2 and 2|ACD| = |c1*d2 - c2*d1| bound C
                for c2 in range(1, M // b + 1):
                    lo = -(M + c2 * abs(d1)) // d2 - 1
                    hi = (M + c2 * abs(d1)) // d2 + 1
                    for c1 in range(lo, hi + 1):
                        C = IntVec2(c1, c2)
                        try:
                            inst = QuadrilateralInstance(A, B, C, D)
                        except InvalidQuadrilateral:
                            continue
                        ar = inst.doubled_areas()
                        if max(ar.values()) <= M and min(ar.values()) > 0:
                            yield inst


def recursion_closure_check(m_max: int, order: int) -> bool:
    """Rebuild F(3..m_max) from F(1), F(2) by
    F(2n-1) = (F(n)^2 - F(n-1)^2) / F(1) and F(2n-2) = (F(n)^2 - F(n-2)^2) / F(2)."""
    if m_max < 3:
        raise ValueError("m_max must be at least 3")
    work = order + m_max  # each division costs one order
    F = {1: vertex_contribution(1, work), 2: vertex_contribution(2, work)}
    for m in range(3, m_max + 1):
        if m % 2:
            n = (m + 1) // 2
            F[m] = series_divide(F[n] * F[n] - F[n - 1] * F[n - 1], F[1])
        else:
            n = (m + 2) // 2
            F[m] = series_divide(F[n] * F[n] - F[n - 2] * F[n - 2], F[2])
        if F[m].order < order:
            raise OrderExceeded(f"precision exhausted at F({m})")
    return all(F[m].truncate(order) == vertex_contribution(m, order) for m in range(3, m_max + 1))
