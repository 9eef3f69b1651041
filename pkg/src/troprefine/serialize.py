"""JSON forms of the result types and an on-disk cache of enumerations."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from fractions import Fraction
from pathlib import Path

from .algebra import HalfLaurent, TruncatedSeries, format_rational, parse_rational
from .enumeration import EnumerationResult, FixedEndData
from .errors import TropRefineError, ValidationError
from .fan import CountingProblem, IntVec2, validate_balanced
from .gw import GWSeries
from .tropical import (
    CombinatorialType,
    Graph,
    PointConfiguration,
    RealizedCurve,
    bg_multiplicity,
    curve_multiplicity,
    trivalent_count_check,
)

log = logging.getLogger(__name__)

CODE_VERSION = "troprefine-1"
CACHE_ENV = "TROPREFINE_CACHE"
DEFAULT_CACHE_DIR = ".troprefine-cache"


def _pt(p) -> list[str]:
    return [format_rational(p[0]), format_rational(p[1])]


def _unpt(p) -> tuple[Fraction, Fraction]:
    return (parse_rational(p[0]), parse_rational(p[1]))


def problem_to_json(p: CountingProblem) -> dict:
    return {
        "delta": [list(v) for v in p.delta.vectors],
        "n": p.n,
        "fixed_ends": sorted(p.fixed_ends),
    }


def problem_from_json(data: dict) -> CountingProblem:
    try:
        delta = validate_balanced(tuple(v) for v in data["delta"])
        return CountingProblem(delta, int(data["n"]), frozenset(data.get("fixed_ends", ())))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed problem description: {exc}") from exc


def type_to_json(t: CombinatorialType) -> dict:
    g = t.graph
    return {
        "num_vertices": g.num_vertices,
        "bounded_edges": [list(e) for e in g.bounded_edges],
        "legs": [list(l) for l in g.legs],
        "edge_directions": [list(d) for d in t.edge_directions],
        "leg_directions": [list(d) for d in t.leg_directions],
        "vertex_genus": list(t.vertex_genus),
        "point_assignment": [list(a) for a in t.point_assignment],
        "fixed_labels": sorted(t.fixed_labels),
        "canonical": t.canonical_text,
    }


def type_from_json(data: dict) -> CombinatorialType:
    graph = Graph(
        int(data["num_vertices"]),
        tuple(tuple(e) for e in data["bounded_edges"]),
        tuple(tuple(l) for l in data["legs"]),
    )
    return CombinatorialType(
        graph,
        tuple(IntVec2(*d) for d in data["edge_directions"]),
        tuple(IntVec2(*d) for d in data["leg_directions"]),
        tuple(data["vertex_genus"]),
        tuple((k, int(i)) for k, i in data["point_assignment"]),
        frozenset(data.get("fixed_labels", ())),
    )


def curve_to_json(c: RealizedCurve) -> dict:
    return {
        "type": type_to_json(c.ctype),
        "positions": [_pt(p) for p in c.positions],
        "lengths": [format_rational(x) for x in c.lengths],
        "point_params": [format_rational(x) for x in c.point_params],
        "m_h": curve_multiplicity(c.ctype),
        "m_h_q": bg_multiplicity(c.ctype).to_json(),
    }


def curve_from_json(data: dict) -> RealizedCurve:
    c = RealizedCurve(
        type_from_json(data["type"]),
        tuple(_unpt(p) for p in data["positions"]),
        tuple(parse_rational(x) for x in data["lengths"]),
        tuple(parse_rational(x) for x in data["point_params"]),
    )
    if "m_h" in data and data["m_h"] != curve_multiplicity(c.ctype):
        raise ValidationError("stored m_h disagrees with the curve")
    if "m_h_q" in data and HalfLaurent.from_json(data["m_h_q"]) != bg_multiplicity(c.ctype):
        raise ValidationError("stored m_h(q) disagrees with the curve")
    return c


def result_to_json(r: EnumerationResult) -> dict:
    return {
        "problem": problem_to_json(r.problem),
        "seed": r.config.seed,
        "config": [_pt(p) for p in r.config.points],
        "anchors": None
        if r.anchors is None
        else {str(k): _pt(v) for k, v in sorted(r.anchors.anchors.items())},
        "num_curves": len(r.curves),
        "curves": [curve_to_json(c) for c in r.curves],
        "classical_count": r.classical_count,
        "refined_count": r.refined_count.to_json(),
        "refined_count_text": str(r.refined_count),
    }


def result_from_json(data: dict) -> EnumerationResult:
    """Rebuild a result and re-check every invariant a fresh enumeration guarantees."""
    problem = problem_from_json(data["problem"])
    config = PointConfiguration(tuple(_unpt(p) for p in data["config"]), int(data["seed"]))
    anchors = None
    if data.get("anchors") is not None:
        anchors = FixedEndData({int(k): _unpt(v) for k, v in data["anchors"].items()})
    curves = tuple(curve_from_json(c) for c in data["curves"])
    for c in curves:
        c.ctype.check_type_delta(problem)
        c.check(config, anchors)
        if not trivalent_count_check(c.ctype, problem):
            raise ValidationError("stored curve has the wrong number of trivalent vertices")
    if len(curves) != data.get("num_curves", len(curves)):
        raise ValidationError("curve count disagrees with the stored curves")
    return EnumerationResult(
        problem,
        config,
        curves,
        int(data["classical_count"]),
        HalfLaurent.from_json(data["refined_count"]),
        anchors,
    )


def gw_series_from_json(problem: CountingProblem, data: dict) -> GWSeries:
    refined = data.get("refined_count")
    return GWSeries(
        problem,
        TruncatedSeries.from_json(data["series"]),
        int(data["leading_power"]),
        {int(g): parse_rational(v) for g, v in data["invariants"].items()},
        None if refined is None else HalfLaurent.from_json(refined),
    )


# --- cache -----------------------------------------------------------------------


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or DEFAULT_CACHE_DIR)


def cache_key(p: CountingProblem, seed: int, method: str = "auto") -> str:
    delta, n, fixed = p.key()
    blob = json.dumps(
        {"delta": delta, "n": n, "fixed": fixed, "seed": seed, "method": method, "version": CODE_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_load(p: CountingProblem, seed: int, method: str = "auto") -> EnumerationResult | None:
    path = cache_dir() / f"{cache_key(p, seed, method)}.json"
    if not path.exists():
        return None
    try:
        with open(path) as fh:
            r = result_from_json(json.load(fh))
    except (TropRefineError, ValueError, KeyError, TypeError) as exc:
        log.warning("discarding invalid cache entry %s: %s", path, exc)
        return None
    # the key is label-free; a hit stored under another labelling of Δ is not reused
    if problem_to_json(r.problem) != problem_to_json(p):
        return None
    return r


def cache_store(r: EnumerationResult, seed: int, method: str = "auto") -> Path:
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{cache_key(r.problem, seed, method)}.json"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(result_to_json(r), fh)
    os.replace(tmp, path)
    return path
