from __future__ import annotations

import os
import sys

import pytest

from troprefine import CountingProblem, enumerate_curves, enumerate_curves_fixed_ends, projective_plane, validate_balanced


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running; enabled with TROPREFINE_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("TROPREFINE_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow; set TROPREFINE_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("TROPREFINE_CACHE", str(tmp_path / "cache"))


def plane_problem(d: int) -> CountingProblem:
    return CountingProblem(projective_plane(d), 3 * d - 1)


LINE = validate_balanced([(1, 0), (0, 1), (-1, -1)])
WEIGHTED = validate_balanced([(-1, 0), (0, -2), (1, 2)])
ONE_INTERIOR = validate_balanced([(1, -2), (1, 1), (-2, 1)])


@pytest.fixture(scope="session")
def plane_results():
    """Enumerations of the line, conic and cubic problems for seeds 1, 2, 3."""
    return {(d, s): enumerate_curves(plane_problem(d), seed=s) for d in (1, 2, 3) for s in (1, 2, 3)}


@pytest.fixture(scope="session")
def cubic_result(plane_results):
    return plane_results[(3, 1)]


@pytest.fixture(scope="session")
def fixed_end_results():
    return {
        "line": enumerate_curves_fixed_ends(CountingProblem(LINE, 1, {1}), seed=1),
        "weighted": enumerate_curves_fixed_ends(CountingProblem(WEIGHTED, 1, {2}), seed=1),
        "cubic": enumerate_curves_fixed_ends(CountingProblem(projective_plane(3), 7, {1}), seed=1),
    }


@pytest.fixture(scope="session")
def genus_one_result():
    return enumerate_curves(CountingProblem(ONE_INTERIOR, 3), seed=1)


@pytest.fixture(scope="session")
def all_results(plane_results, fixed_end_results, genus_one_result):
    out = {f"p2:{d} seed {s}": r for (d, s), r in plane_results.items()}
    out.update({f"fixed {k}": r for k, r in fixed_end_results.items()})
    out["genus one"] = genus_one_result
    return out
