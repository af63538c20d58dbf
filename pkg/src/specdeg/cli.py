"""Command-line interface.

Exit codes: 0 yes/accept/pass, 1 no/reject/fail, 2 input error, 3 budget exhausted.
The default node budget comes from ``SPECDEG_BUDGET`` when set.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .decider import (
    BUDGET_EXCEEDED,
    DEFAULT_BUDGET,
    NOT_DEGENERATE,
    BudgetExceeded,
    approximate_sdeg,
    decide,
    format_rational,
    parse_rational,
    spectral_degeneracy_number,
    verify_certificate,
)
from .degeneracy import peel, satisfies_converse, converse_bound
from .generators import FamilySpec, generate, parse_family_spec
from .graph import GraphFormatError, components, degree_stats, graph_hash, read_graph, write_graph
from .hardness import build_gadget, gadget_map_document, reduction_end_to_end
from .partition import bucket_diagnostic
from .spectra import EnclosureNotNarrowed, check_bound_suite, spectral_radius_enclosure

REPORT_SCHEMA = 1
BUDGET_ENV = "SPECDEG_BUDGET"

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

PLANAR_FAMILIES = {"path", "cycle", "star", "grid", "triangulated_grid", "random_tree"}
ALL_CHECKS = ("degree", "hayes", "planar", "cioaba", "converse", "buckets")

CSV_COLUMNS = [
    "family", "params", "seed", "n", "m", "max_degree", "min_degree", "degeneracy",
    "sdeg_lo", "sdeg_hi", "sdeg_exact", "sdeg_certified",
    "rho_lo", "rho_hi",
    "hayes_bound", "planar_bound", "cioaba_bound", "converse_bound",
    "degree", "hayes", "planar", "cioaba", "converse", "buckets",
]

_STATUS = {"satisfied": "pass", "violated": "fail", "indeterminate": "indeterminate",
           "hypothesis-unmet": "n/a"}


class InputError(Exception):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"{BUDGET_ENV} must be a positive integer")
    return value


def _enclosure(lo: float, hi: float) -> dict:
    """Decimal midpoint with an explicit radius covering ``[lo, hi]``."""
    mid = (lo + hi) / 2
    radius = max(hi - mid, mid - lo)
    radius = math.nextafter(radius, math.inf) if radius > 0 else 0.0
    return {"center": repr(mid), "radius": repr(radius)}


def _report(command: str, inputs: dict, findings: dict, status: str, started: float) -> dict:
    return {
        "schema_version": REPORT_SCHEMA,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "status": status,
        "findings": findings,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }


def _emit(report: dict, out) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    try:
        return read_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (GraphFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _positive_rational(text: str) -> Fraction:
    try:
        d = parse_rational(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if d <= 0:
        raise InputError(f"d must be a positive rational, got {text}")
    return d


def _budget(args) -> int:
    if args.budget is not None:
        if args.budget < 1:
            raise InputError("--budget must be positive")
        return args.budget
    return default_budget()


# -- commands ----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    g = _load(args.file)
    delta, delta_min, _ = degree_stats(g)
    findings: dict = {
        "n": g.n,
        "m": g.m,
        "max_degree": delta,
        "min_degree": delta_min,
        "duplicate_edges": g.duplicates,
        "components": len(components(g)),
        "degeneracy": peel(g).degeneracy,
    }
    if g.m == 0:
        findings.update(spectral_radius=_enclosure(0.0, 0.0), sdeg=None, bounds=[])
        _emit(_report("analyze", {"file": str(args.file), "graph_hash": graph_hash(g)},
                      findings, "pass", started), args.out)
        return EXIT_YES
    try:
        enc = spectral_radius_enclosure(g, tol=1e-9, warm_start=True)
    except EnclosureNotNarrowed as exc:
        enc = exc.enclosure
    findings["spectral_radius"] = _enclosure(enc.lo, enc.hi)
    interval = approximate_sdeg(g)
    findings["sdeg"] = {
        "lo": format_rational(interval.d_lo),
        "hi": format_rational(interval.d_hi),
        "lo_attained": interval.d_lo_attained,
        "witness_edges": [list(e) for e in interval.witness],
    }
    checks = check_bound_suite(g, planar=args.planar, hayes_d=findings["degeneracy"],
                               cioaba=True)
    findings["bounds"] = [c.as_dict() for c in checks]
    status = "fail" if any(c.status == "violated" for c in checks) else "pass"
    _emit(_report("analyze", {"file": str(args.file), "graph_hash": graph_hash(g),
                              "planar_asserted": args.planar}, findings, status, started), args.out)
    return EXIT_NO if status == "fail" else EXIT_YES


def cmd_decide(args) -> int:
    started = time.perf_counter()
    d = _positive_rational(args.d)
    budget = _budget(args)
    g = _load(args.file)
    result = decide(g, d, budget=budget, jobs=args.jobs)
    findings = {"verdict": result.verdict, "d": format_rational(d),
                "stats": {k: v for k, v in result.stats.as_dict().items() if k != "wall_time"}}
    if result.certificate is not None:
        findings["certificate"] = result.certificate.to_dict()
        if args.certificate:
            with open(args.certificate, "w", encoding="utf-8") as fh:
                fh.write(result.certificate.to_json())
    status = {NOT_DEGENERATE: "fail", BUDGET_EXCEEDED: "budget"}.get(result.verdict, "pass")
    _emit(_report("decide", {"file": str(args.file), "graph_hash": graph_hash(g),
                             "d": format_rational(d), "budget": budget}, findings, status, started),
          args.out)
    return {"pass": EXIT_YES, "fail": EXIT_NO, "budget": EXIT_BUDGET}[status]


def cmd_verify(args) -> int:
    started = time.perf_counter()
    g = _load(args.graph)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.certificate}: {exc.strerror}") from None
    outcome = verify_certificate(g, text)
    status = "pass" if outcome.accepted else "fail"
    _emit(_report("verify", {"graph": str(args.graph), "graph_hash": graph_hash(g)},
                  {"accepted": outcome.accepted, "reason": outcome.reason}, status, started), args.out)
    if not outcome.accepted:
        print(f"rejected: {outcome.reason}", file=sys.stderr)
    return EXIT_YES if outcome.accepted else EXIT_NO


def _gadget_d(args) -> int:
    if args.d < 3:
        raise InputError("the gadget needs d >= 3: d-regular subgraph detection is "
                         "NP-complete only for fixed d >= 3")
    return args.d


def cmd_gadget(args) -> int:
    d = _gadget_d(args)
    g = _load(args.file)
    try:
        gadget = build_gadget(g, d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(write_graph(gadget.graph))
    map_path = args.map or f"{args.output}.map.json"
    with open(map_path, "w", encoding="utf-8") as fh:
        json.dump(gadget_map_document(gadget), fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.output} (n={gadget.graph.n}, m={gadget.graph.m}) and {map_path}",
          file=sys.stderr)
    return EXIT_YES


def cmd_reduction_check(args) -> int:
    started = time.perf_counter()
    d = _gadget_d(args)
    budget = _budget(args)
    g = _load(args.file)
    if g.max_degree > d + 1:
        raise InputError(f"maximum degree {g.max_degree} exceeds d + 1 = {d + 1}")
    try:
        report = reduction_end_to_end(g, d, budget)
    except BudgetExceeded as exc:
        _emit(_report("reduction-check", {"file": str(args.file), "graph_hash": graph_hash(g), "d": d},
                      {"error": str(exc)}, "budget", started), args.out)
        return EXIT_BUDGET
    status = "pass" if report.ok else "fail"
    _emit(_report("reduction-check", {"file": str(args.file), "graph_hash": graph_hash(g), "d": d,
                                      "budget": budget}, report.as_dict(), status, started), args.out)
    return EXIT_YES if report.ok else EXIT_NO


def family_row(spec: FamilySpec, checks, exact_limit: int, budget: int) -> dict:
    """One CSV row: graph statistics, sdeg interval and per-check status."""
    g = generate(spec)
    delta, delta_min, _ = degree_stats(g)
    k = peel(g).degeneracy
    row = {c: "" for c in CSV_COLUMNS}
    row.update(family=spec.family, params=spec.label(), seed=spec.seed, n=g.n, m=g.m,
               max_degree=delta, min_degree=delta_min, degeneracy=k)
    for c in ALL_CHECKS:
        row[c] = "skipped" if c not in checks else "n/a"
    if g.m == 0:
        return row

    # sdeg: exact enclosure at desk scale, degeneracy-based interval otherwise
    d_upper = None
    if g.m <= exact_limit:
        try:
            s = spectral_degeneracy_number(g, budget=budget)
            row.update(sdeg_lo=repr(s.lo), sdeg_hi=repr(s.hi), sdeg_certified="yes")
            if s.exact is not None:
                row["sdeg_exact"] = format_rational(s.exact)
                d_upper = s.exact
            else:
                d_upper = Fraction(s.hi)
        except BudgetExceeded:
            pass
    if d_upper is None:
        interval = approximate_sdeg(g)
        row.update(sdeg_lo=format_rational(interval.d_lo), sdeg_hi=format_rational(interval.d_hi),
                   sdeg_certified="no")
        d_upper = interval.d_hi

    suite = check_bound_suite(g, planar=spec.family in PLANAR_FAMILIES and "planar" in checks,
                              hayes_d=k if "hayes" in checks else None,
                              cioaba="cioaba" in checks)
    by_name = {c.name: c for c in suite}
    if suite:
        row.update(rho_lo=repr(suite[0].lo), rho_hi=repr(suite[0].hi))
    if "degree" in checks:
        parts = [by_name["degree-lower"].status, by_name["degree-upper"].status]
        row["degree"] = "fail" if "violated" in parts else (
            "pass" if parts == ["satisfied"] * 2 else "indeterminate")
    for name in ("hayes", "planar", "cioaba"):
        if name in by_name:
            row[name] = _STATUS[by_name[name].status]
            if not math.isnan(by_name[name].bound):
                row[f"{name}_bound"] = repr(by_name[name].bound)
    if "converse" in checks:
        row["converse_bound"] = repr(converse_bound(d_upper, delta))
        row["converse"] = "pass" if satisfies_converse(delta_min, d_upper, delta) else "fail"
    if "buckets" in checks:
        row["buckets"] = "pass" if bucket_diagnostic(g, d_upper).ok else "fail"
    return row


def cmd_theorems(args) -> int:
    checks = tuple(args.checks.split(",")) if args.checks else ALL_CHECKS
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise InputError(f"unknown checks {sorted(unknown)}; choose from {', '.join(ALL_CHECKS)}")
    if not args.family:
        raise InputError("at least one --family is required")
    if args.seeds < 1:
        raise InputError("--seeds must be positive")
    budget = _budget(args)
    rows = []
    for text in args.family:
        for seed in range(args.seed_start, args.seed_start + args.seeds):
            try:
                spec = parse_family_spec(text, seed)
                rows.append(family_row(spec, checks, args.exact_limit, budget))
            except ValueError as exc:
                raise InputError(f"{text}: {exc}") from None
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.csv:
            out.close()
    failed = [r for r in rows if any(r[c] == "fail" for c in ALL_CHECKS)]
    for r in failed:
        print(f"FAIL: {r['params']} seed {r['seed']}", file=sys.stderr)
    return EXIT_NO if failed else EXIT_YES


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specdeg", description="Spectral degeneracy toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="degree statistics, spectra, sdeg interval, bound suite")
    a.add_argument("file")
    a.add_argument("--planar", action="store_true", help="assert that the graph is planar")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    dcd = sub.add_parser("decide", help="exact decision; exit 0 degenerate, 1 not, 3 budget")
    dcd.add_argument("file")
    dcd.add_argument("--d", required=True, help="threshold as num/den")
    dcd.add_argument("--budget", type=int, help=f"node budget per cap (default ${BUDGET_ENV} "
                                                  f"or {DEFAULT_BUDGET})")
    dcd.add_argument("--certificate", help="write the certificate here on a negative verdict")
    dcd.add_argument("--jobs", type=int, default=1, help="worker processes over degree caps")
    dcd.add_argument("--out")
    dcd.set_defaults(func=cmd_decide)

    v = sub.add_parser("verify", help="check a certificate; exit 0 accept, 1 reject")
    v.add_argument("graph")
    v.add_argument("certificate")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    gd = sub.add_parser("gadget", help="build the reduction gadget graph")
    gd.add_argument("file")
    gd.add_argument("--d", type=int, required=True)
    gd.add_argument("output")
    gd.add_argument("--map", help="sidecar path (default OUTPUT.map.json)")
    gd.set_defaults(func=cmd_gadget)

    r = sub.add_parser("reduction-check", help="check both sides of the reduction")
    r.add_argument("file")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--budget", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduction_check)

    t = sub.add_parser("theorems", help="CSV matrix of bound checks over seeded families")
    t.add_argument("--family", action="append", help="e.g. grid:rows=5,cols=5 (repeatable)")
    t.add_argument("--checks", help=f"comma list from {','.join(ALL_CHECKS)}")
    t.add_argument("--seeds", type=int, default=1)
    t.add_argument("--seed-start", type=int, default=0)
    t.add_argument("--exact-limit", type=int, default=14,
                   help="compute sdeg exactly for graphs with at most this many edges")
    t.add_argument("--budget", type=int)
    t.add_argument("--csv", help="output path (default stdout)")
    t.set_defaults(func=cmd_theorems)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
