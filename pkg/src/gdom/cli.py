"""The ``gdom`` command line: analyze, relate, check, hunt, report.

Exit codes for ``check``: 0 holds / holds-with-equality, 1 violated,
2 hypothesis failed, 3 inconclusive or error.  Every run appends one
self-contained JSONL record (schema 1) to ``--log-dir`` so hunts and
checks can be replayed: same command + seed reproduces the same payload,
timestamps aside.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .checks import (
    HOLDS,
    HOLDS_WITH_EQUALITY,
    HYPOTHESIS_FAILED,
    VIOLATED,
    InequalityId,
    check,
)
from .counting import (
    CountingBoundExceeded,
    count_independent_sets,
    count_matchings,
    count_spanning_trees,
    tutte_polynomial,
)
from .multigraph import GraphError, Multigraph, has_cut_edge, parse_graph
from .relations import (
    certificate_to_json,
    check_domination,
    check_fractional_edge_tiling,
    check_fractional_tiling,
    check_tiling,
)
from .search import PairGenerator, hunt
from .spectral import FunctionalSpec, eigenvalues, heat_trace
from .symmetry import is_transitive

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_HYPOTHESIS = 2
EXIT_ERROR = 3

DEFAULT_LOG_DIR = "gdom-logs"


def _detect_format(path: str, override: Optional[str]) -> str:
    if override:
        return override
    if path.endswith(".g6") or path.endswith(".graph6"):
        return "graph6"
    if path.endswith(".json"):
        return "json"
    return "edge_list"


def _load_graph(path: str, fmt: Optional[str]) -> Multigraph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_graph(text.strip(), _detect_format(path, fmt))


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _parse_t_grid(text: str) -> list[Fraction]:
    return [Fraction(tok) for tok in text.split(",") if tok.strip()]


def _parse_xy_grid(text: str) -> list[tuple[Fraction, Fraction]]:
    pts = []
    for clause in text.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        x, y = clause.split(",")
        pts.append((Fraction(x), Fraction(y)))
    return pts


def _parse_check_id(token: str) -> tuple[InequalityId, Optional[str]]:
    """'vertex_counting:independent_sets' -> (id, family)."""
    if ":" in token:
        head, family = token.split(":", 1)
        return InequalityId(head), family
    return InequalityId(token), None


class RunLog:
    """Append-only JSONL run records, one per command invocation."""

    def __init__(self, log_dir: str):
        self.log_dir = log_dir
        os.makedirs(log_dir, exist_ok=True)
        self.path = os.path.join(log_dir, "runs.jsonl")

    def append(self, record: dict) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def records(self) -> list[dict]:
        if not os.path.exists(self.path):
            return []
        with open(self.path, "r", encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]


def _record(args, digests: dict, summary: str, reports: list[dict], seed=None) -> dict:
    return {
        "schema": 1,
        "timestamp": time.time(),
        "command": list(args._argv),
        "seed": seed,
        "version": __version__,
        "input_digests": digests,
        "summary": summary,
        "reports": reports,
    }


# -- analyze ------------------------------------------------------------------


def _analyze_fields(g: Multigraph, t_grid: list[Fraction]) -> dict:
    fields: dict = {
        "vertices": g.n,
        "edge_units": g.edge_unit_count(),
        "edge_records": len(g.edges),
        "simple": g.is_simple(),
        "cut_edge": has_cut_edge(g),
        "spanning_trees": str(count_spanning_trees(g)),
    }

    def field(name, compute):
        try:
            fields[name] = compute()
        except (CountingBoundExceeded, ValueError) as exc:
            fields[name] = f"error: {exc}"

    field("transitive", lambda: is_transitive(g))
    field("tutte", lambda: tutte_polynomial(g).to_json_triples())
    field("independent_sets", lambda: str(count_independent_sets(g)))
    field("matchings", lambda: str(count_matchings(g)))
    fields["spectrum"] = eigenvalues(g).values
    fields["heat_trace"] = [[str(t), heat_trace(g, float(t))] for t in t_grid]
    return fields


def cmd_analyze(args) -> int:
    try:
        g = _load_graph(args.graph, args.format)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    grid = _parse_t_grid(args.t_grid) if args.t_grid else [Fraction(2) ** k for k in (-2, 0, 2)]
    fields = _analyze_fields(g, grid)
    if args.json:
        print(json.dumps(fields, sort_keys=True))
    else:
        for k, v in fields.items():
            print(f"{k}: {v}")
    RunLog(args.log_dir).append(
        _record(args, {"graph": _digest(args.graph)}, "analyze", [fields])
    )
    return EXIT_OK


# -- relate -------------------------------------------------------------------


def cmd_relate(args) -> int:
    try:
        g = _load_graph(args.g, args.format)
        h = _load_graph(args.h, args.format)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out: dict = {}
    verdicts = {}
    for name, decider in (
        ("tiling", check_tiling),
        ("fractional_tiling", check_fractional_tiling),
        ("fractional_edge_tiling", check_fractional_edge_tiling),
        ("domination", check_domination),
    ):
        cert = decider(g, h) if h.n <= g.n else None
        verdicts[name] = cert is not None
        out[name] = {"holds": cert is not None}
        if cert is not None and args.certificates:
            out[name]["certificate"] = certificate_to_json(cert)
    if args.local_stats is not None:
        from .symmetry import local_statistics, tv_distance

        tv = {}
        for r in range(args.local_stats + 1):
            d = tv_distance(local_statistics(g, r), local_statistics(h, r))
            tv[str(r)] = f"{d.numerator}/{d.denominator}"
        out["local_statistics_tv"] = {
            "convention": "half-L1 total variation of rooted-ball distributions, in [0,1]",
            "by_radius": tv,
        }
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for name, info in out.items():
            if name == "local_statistics_tv":
                print(f"ball-distribution distance ({info['convention']}):")
                for r, d in info["by_radius"].items():
                    print(f"  radius {r}: {d}")
                continue
            print(f"{name}: {'yes' if info['holds'] else 'no'}")
            if "certificate" in info:
                print(f"  certificate: {json.dumps(info['certificate'], sort_keys=True)}")
    RunLog(args.log_dir).append(
        _record(
            args,
            {"g": _digest(args.g), "h": _digest(args.h)},
            "relate " + " ".join(f"{k}={v}" for k, v in verdicts.items()),
            [out],
        )
    )
    return EXIT_OK


# -- check --------------------------------------------------------------------


def _build_params(args, family: Optional[str]) -> dict:
    params: dict = {}
    if family:
        params["family"] = family
    if args.family:
        params["family"] = args.family
    if args.hypothesis:
        params["hypothesis"] = args.hypothesis
    if args.t_grid:
        params["t_grid"] = _parse_t_grid(args.t_grid)
    if args.grid:
        params["xy_grid"] = _parse_xy_grid(args.grid)
    if args.hinge is not None:
        params["functional"] = FunctionalSpec("hinge", Fraction(args.hinge))
    if args.q is not None:
        params["q"] = args.q
    if args.a:
        params["a"] = [int(v) for v in args.a.split(",")]
    if args.b:
        params["b"] = [int(v) for v in args.b.split(",")]
    return params


_EXIT_BY_VERDICT = {
    HOLDS: EXIT_OK,
    HOLDS_WITH_EQUALITY: EXIT_OK,
    VIOLATED: EXIT_VIOLATED,
    HYPOTHESIS_FAILED: EXIT_HYPOTHESIS,
}


def cmd_check(args) -> int:
    try:
        ineq, family = _parse_check_id(args.id)
        g = _load_graph(args.g, args.format)
        h = _load_graph(args.h, args.format) if args.h else None
        params = _build_params(args, family)
        report = check(ineq, g, h, params)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    payload = report.to_json()
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"{report.inequality}: {report.verdict} [{report.status}]")
        if report.lhs is not None:
            print(f"  lhs = {report.lhs}")
            print(f"  rhs = {report.rhs}")
        for note in report.notes:
            print(f"  note: {note}")
    digests = {"g": _digest(args.g)}
    if args.h:
        digests["h"] = _digest(args.h)
    RunLog(args.log_dir).append(
        _record(args, digests, f"check {args.id} -> {report.verdict}", [payload])
    )
    return _EXIT_BY_VERDICT.get(report.verdict, EXIT_ERROR)


# -- hunt ---------------------------------------------------------------------


def cmd_hunt(args) -> int:
    try:
        ineq, family = _parse_check_id(args.id)
        params = _build_params(args, family)
        gen = PairGenerator(
            strategy=args.strategy,
            seed=args.seed,
            relation=args.relation,
            max_g=args.max_n,
            max_h=args.max_h,
        )
        result = hunt(ineq, gen, args.trials, params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    log = RunLog(args.log_dir)
    for v in result.violations:
        name = f"counterexample-{result.inequality}-seed{args.seed}-trial{v.trial}.json"
        with open(os.path.join(args.log_dir, name), "w", encoding="utf-8") as fh:
            json.dump(v.to_json(), fh, sort_keys=True, indent=2)
    print(result.summary())
    if args.json:
        print(json.dumps(result.to_json(), sort_keys=True))
    log.append(_record(args, {}, result.summary(), [result.to_json()], seed=args.seed))
    return EXIT_OK


# -- report -------------------------------------------------------------------


def cmd_report(args) -> int:
    records = RunLog(args.log_dir).records()
    if not records:
        print("no runs logged")
        return EXIT_OK
    for rec in records:
        stamp = time.strftime("%Y-%m-%d %H:%M:%S", time.localtime(rec["timestamp"]))
        print(f"[{stamp}] schema={rec['schema']} v{rec['version']}: {rec['summary']}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gdom", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("edge_list", "graph6", "json"), default=None)
        sp.add_argument("--json", action="store_true", help="JSON output")
        sp.add_argument("--log-dir", default=DEFAULT_LOG_DIR)

    a = sub.add_parser("analyze", help="graph invariants and spectra")
    a.add_argument("graph")
    a.add_argument("--t-grid", default=None)
    common(a)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("relate", help="decide the four comparison relations")
    r.add_argument("g")
    r.add_argument("h")
    r.add_argument("--certificates", action="store_true")
    r.add_argument(
        "--local-stats",
        type=int,
        default=None,
        metavar="R",
        help="also report rooted-ball distribution distances up to radius R",
    )
    common(r)
    r.set_defaults(func=cmd_relate)

    c = sub.add_parser("check", help="check one inequality on a pair")
    c.add_argument("id", help="inequality id, optionally id:family")
    c.add_argument("g")
    c.add_argument("h", nargs="?", default=None)
    c.add_argument("--family", default=None)
    c.add_argument("--hypothesis", default=None)
    c.add_argument("--t-grid", default=None)
    c.add_argument("--grid", default=None, help="x,y pairs separated by ';'")
    c.add_argument("--hinge", default=None, help="hinge functional threshold")
    c.add_argument("--q", type=int, default=None, help="number of colors")
    c.add_argument("--a", default=None, help="vertex subset A (comma separated)")
    c.add_argument("--b", default=None, help="vertex subset B (comma separated)")
    common(c)
    c.set_defaults(func=cmd_check)

    u = sub.add_parser("hunt", help="random counterexample search")
    u.add_argument("id")
    u.add_argument("--strategy", default="overlay_copies")
    u.add_argument("--relation", default="domination")
    u.add_argument("--trials", type=int, default=1000)
    u.add_argument("--seed", type=int, default=0)
    u.add_argument("--max-n", type=int, default=10)
    u.add_argument("--max-h", type=int, default=5)
    u.add_argument("--family", default=None)
    u.add_argument("--hypothesis", default=None)
    u.add_argument("--t-grid", default=None)
    u.add_argument("--grid", default=None)
    u.add_argument("--hinge", default=None)
    u.add_argument("--q", type=int, default=None)
    u.add_argument("--a", default=None)
    u.add_argument("--b", default=None)
    common(u)
    u.set_defaults(func=cmd_hunt)

    e = sub.add_parser("report", help="summarize the run log")
    e.add_argument("--log-dir", default=DEFAULT_LOG_DIR)
    e.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = ["gdom"] + argv
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
