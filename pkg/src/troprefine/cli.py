"""Command-line interface: ``troprefine count|series|verify``.

Exit status: 0 success, 1 a verification check failed, 2 invalid input,
3 no generic configuration within the retry bound.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from .algebra import DEFAULT_ORDER
from .enumeration import enumerate_curves, enumerate_curves_fixed_ends
from .errors import GenericityExhausted, ValidationError
from .fan import CountingProblem, projective_plane, validate_balanced
from .gw import gw_series_fixed_ends, lattice_quadrilaterals, quad_identity_check, recursion_closure_check
from .oracles import OracleReport, appendix_relation_check, kontsevich_rational_count
from .serialize import cache_load, cache_store, problem_from_json, result_to_json

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_GENERICITY = 0, 1, 2, 3

PRESETS = {"line": 1, "conic": 2, "cubic": 3}

log = logging.getLogger("troprefine")


def _parse_vectors(text: str):
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    # "1,0;0,1;-1,-1"
    return [tuple(int(c) for c in part.split(",")) for part in text.split(";") if part.strip()]


def _parse_labels(text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.replace(";", ",").split(",") if x.strip())
    except ValueError as exc:
        raise ValidationError(f"bad --fixed-ends list {text!r}") from exc


def load_problem(args) -> CountingProblem:
    """Build the problem from --delta (preset, file or inline) and --n/--fixed-ends."""
    source = args.delta
    file_data: dict = {}
    if source in PRESETS or source.startswith("p2:"):
        try:
            degree = PRESETS.get(source) or int(source[3:])
        except ValueError as exc:
            raise ValidationError(f"bad preset {source!r}") from exc
        vectors = projective_plane(degree).vectors
    elif os.path.exists(source):
        try:
            with open(source) as fh:
                raw = json.load(fh)
            file_data = raw if isinstance(raw, dict) else {"delta": raw}
            vectors = file_data["delta"]
        except (ValueError, KeyError) as exc:
            raise ValidationError(f"cannot read a problem from {source}: {exc}") from exc
    else:
        try:
            vectors = _parse_vectors(source)
        except (ValueError, TypeError) as exc:
            raise ValidationError(f"cannot parse --delta {source!r}") from exc
    delta = validate_balanced(vectors)
    fixed = _parse_labels(args.fixed_ends) if args.fixed_ends else frozenset(file_data.get("fixed_ends", ()))
    n = args.n if args.n is not None else file_data.get("n")
    if n is None:
        n = len(delta) - 1 - len(fixed)  # the genus-0 value
    return problem_from_json({"delta": [list(v) for v in delta.vectors], "n": n, "fixed_ends": sorted(fixed)})


def _enumerate(p: CountingProblem, args):
    use_cache = not args.no_cache
    if use_cache:
        hit = cache_load(p, args.seed)
        if hit is not None:
            log.info("cache hit")
            return hit
    t0 = time.time()
    if p.fixed_ends:
        r = enumerate_curves_fixed_ends(p, seed=args.seed, jobs=args.jobs)
    else:
        r = enumerate_curves(p, seed=args.seed, jobs=args.jobs)
    log.info("enumerated %d curves in %.2fs", len(r.curves), time.time() - t0)
    if use_cache:
        try:
            cache_store(r, args.seed)
        except OSError as exc:
            log.warning("could not write cache: %s", exc)
    return r


def _write_out(path: str | None, payload: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def cmd_count(args) -> int:
    p = load_problem(args)
    r = _enumerate(p, args)
    print(f"classical_count: {r.classical_count}")
    print(f"refined_count: {r.refined_count}")
    print(f"curves: {len(r.curves)}")
    _write_out(args.out, result_to_json(r))
    return EXIT_OK


def cmd_series(args) -> int:
    p = load_problem(args)
    r = _enumerate(p, args)
    s = gw_series_fixed_ends(r, args.order)
    print(f"refined_count: {r.refined_count}")
    print(f"series: {s.series}")
    if not s.invariants_by_genus:
        print(
            f"warning: order {args.order} is below the leading power u^{s.leading_power}; no invariants",
            file=sys.stderr,
        )
    print("g\tN_g")
    for g, v in sorted(s.invariants_by_genus.items()):
        print(f"{g}\t{v}")
    _write_out(args.out, s.to_json())
    return EXIT_OK


# --- verification suites -----------------------------------------------------------


def _suite_invariance(args) -> list[OracleReport]:
    problems = [load_problem(args)] if args.delta else [
        CountingProblem(projective_plane(d), 3 * d - 1) for d in (1, 2, 3)
    ]
    reports = []
    for p in problems:
        counts = {}
        for seed in (1, 2, 3):
            ns = argparse.Namespace(**{**vars(args), "seed": seed})
            counts[seed] = _enumerate(p, ns).refined_count
        label = f"|Δ|={len(p.delta)} n={p.n}"
        for seed in (2, 3):
            reports.append(
                OracleReport("invariance", f"{label} seed {seed} vs 1", counts[1], counts[seed], counts[seed] == counts[1])
            )
    return reports


def _suite_quadrilateral(args) -> list[OracleReport]:
    order = args.order
    total = failed = 0
    reports = []
    for q in lattice_quadrilaterals(20):
        total += 1
        if not quad_identity_check(q, order):
            failed += 1
            pts = ", ".join(f"{k}={tuple(getattr(q, k))}" for k in "ABCD")
            reports.append(OracleReport("quadrilateral", pts, 1, 0, False))
    reports.insert(
        0, OracleReport("quadrilateral", f"{total} instances, doubled areas <= 20, order {order}", total, total - failed, failed == 0)
    )
    return reports


def _suite_recursion(args) -> list[OracleReport]:
    ok = recursion_closure_check(8, args.order)
    return [OracleReport("recursion", f"m_max=8 order={args.order}", 1, int(ok), ok)]


def _suite_oracle(args) -> list[OracleReport]:
    reports = []
    cubic = None
    for d in (1, 2, 3):
        p = CountingProblem(projective_plane(d), 3 * d - 1)
        r = _enumerate(p, args)
        expected = kontsevich_rational_count(d)
        reports.append(OracleReport("kontsevich", f"d={d}", expected, r.classical_count, expected == r.classical_count))
        if d == 3:
            cubic = r
    reports.append(appendix_relation_check(gw_series_fixed_ends(cubic, max(args.order, 9))))
    return reports


SUITES = {
    "invariance": _suite_invariance,
    "quadrilateral": _suite_quadrilateral,
    "recursion": _suite_recursion,
    "oracle": _suite_oracle,
}


def cmd_verify(args) -> int:
    reports = SUITES[args.suite](args)
    for rep in reports:
        print(rep.to_json_line())
    if args.out:
        with open(args.out, "w") as fh:
            for rep in reports:
                fh.write(rep.to_json_line() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="troprefine", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, delta_required=True):
        sp.add_argument(
            "--delta",
            required=delta_required,
            help="JSON file, inline vectors ('1,0;0,1;-1,-1' or JSON), or a preset: line, conic, cubic, p2:D",
        )
        sp.add_argument("--n", type=int, default=None, help="number of points (default: the genus-0 value)")
        sp.add_argument("--fixed-ends", default=None, help="comma-separated 1-based labels of fixed ends")
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--out", default=None, help="write JSON output here")
        sp.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")

    sp = sub.add_parser("count", help="classical and refined counts")
    common(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("series", help="generating series and the table g -> N_g")
    common(sp)
    sp.add_argument("--order", type=int, default=DEFAULT_ORDER)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("verify", help="run a property suite")
    common(sp, delta_required=False)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--order", type=int, default=15)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "order", 0) is not None and getattr(args, "order", 0) < 0:
        print("error: --order must be non-negative", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GenericityExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY


if __name__ == "__main__":
    sys.exit(main())
