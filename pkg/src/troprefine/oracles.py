"""Independent ground truth: Kontsevich's recursion and the cubic genus-one relation."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .algebra import HalfLaurent, format_rational
from .errors import WrongProblem
from .fan import CountingProblem, projective_plane
from .gw import GWSeries, extract_invariant

CUBIC_GENUS_ONE_RATIO = Fraction(-9, 24)


def _fmt(x) -> str:
    return str(x) if isinstance(x, HalfLaurent) else format_rational(x)


@dataclass(frozen=True)
class OracleReport:
    name: str
    inputs: str
    expected: Fraction | HalfLaurent
    observed: Fraction | HalfLaurent
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "inputs": self.inputs,
            "expected": _fmt(self.expected),
            "observed": _fmt(self.observed),
            "pass": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@lru_cache(maxsize=None)
def kontsevich_rational_count(d: int) -> int:
    """Number of rational plane curves of degree d through 3d-1 general points."""
    if d < 1:
        raise ValueError("degree must be positive")
    if d == 1:
        return 1
    total = 0
    for d1 in range(1, d):
        d2 = d - d1
        total += kontsevich_rational_count(d1) * kontsevich_rational_count(d2) * (
            d1 * d1 * d2 * d2 * comb(3 * d - 4, 3 * d1 - 2) - d1**3 * d2 * comb(3 * d - 4, 3 * d1 - 1)
        )
    return total


def cubic_problem() -> CountingProblem:
    return CountingProblem(projective_plane(3), 8)


def appendix_relation_check(s: GWSeries) -> OracleReport:
    """N_1 = -(9/24) N_0 for rational cubics through eight points."""
    if s.problem.key() != cubic_problem().key():
        raise WrongProblem("the genus-one relation is specific to plane cubics through 8 points")
    n0 = extract_invariant(s, 0)
    n1 = extract_invariant(s, 1)
    expected = CUBIC_GENUS_ONE_RATIO * n0
    if n0 == 0:
        # 0 = 0 holds vacuously; a zero series says nothing about the relation
        return OracleReport("cubic_genus_one_relation", "N_0 = 0", expected, n1, False, "degenerate input: N_0 = 0")
    return OracleReport(
        "cubic_genus_one_relation",
        f"N_0 = {format_rational(n0)}",
        expected,
        n1,
        n1 == expected,
    )
