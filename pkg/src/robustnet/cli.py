"""Command-line driver: ``robustnet {static,grow,verify,report,export}``.

Summaries are printed as ``key=value`` pairs.  Exit codes: 0 success,
1 verification failed, 2 usage or input error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import dynamic, export, static, verify
from .graph import Graph

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _kv(**pairs) -> str:
    def fmt(v):
        if isinstance(v, bool):
            return str(v).lower()
        if isinstance(v, float):
            return f"{v:.6f}"
        if v is None:
            return "-"
        if isinstance(v, (set, frozenset, list, tuple)):
            return ",".join(str(x) for x in sorted(v)) or "{}"
        return str(v)

    return " ".join(f"{k}={fmt(v)}" for k, v in pairs.items())


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _budget(args) -> int:
    return args.budget if args.budget is not None else verify.default_budget()


def _factor_schedule(text: Optional[str]):
    if text is None:
        return None
    parts = [Fraction(p) for p in text.split(",") if p.strip()]
    return parts[0] if len(parts) == 1 else parts


def _static_groups(method: str, g: Graph, args) -> Optional[dict]:
    n = g.node_count
    if method in ("halves-f1", "halves-f"):
        return {v: int(v >= n // 2) for v in g.nodes()}
    if method == "msets" and args.m:
        r = n // (2 * args.m)
        return {v: v // r for v in g.nodes()}
    return None


def run_static(args) -> int:
    f = Fraction(args.f) if args.f is not None else None
    spec = static.StaticSpec(n=args.n, nf=args.nf, method=args.method, f=f, m=args.m)
    if spec.nf is not None and spec.nf < 1:
        raise UsageError(f"nf must be at least 1, got {spec.nf}")
    try:
        g, nf = static.build_static(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = {"method": args.method, "nf": nf, "generator": export.GENERATOR_VERSION}
    if f is not None:
        meta["f"] = str(f)
    if args.m is not None:
        meta["m"] = args.m
    _write(args.out, export.to_json(g, meta) + "\n")
    _write(args.dot, export.to_dot(g, groups=_static_groups(args.method, g, args)))
    print(
        _kv(
            n=g.node_count,
            nf=nf,
            method=args.method,
            links=g.links,
            optimal_links=static.optimal_links(g.node_count, nf),
            kappa=verify.vertex_connectivity(g),
        )
    )
    return EXIT_OK


def _policy(args) -> dynamic.RobustnessPolicy:
    kw = {}
    if args.policy == "fixed-nf":
        if args.nf is None:
            raise UsageError("fixed-nf needs --nf")
        kw["nf"] = args.nf
    if args.policy in ("fraction-2f", "fraction-2mf") and args.f is not None:
        kw["f"] = _factor_schedule(args.f)
    if args.policy == "fraction-2mf":
        if args.m is None:
            raise UsageError("fraction-2mf needs --m")
        kw["m"] = args.m
    if args.policy == "half-plus-n":
        kw["n"] = args.plus_n
    return dynamic.RobustnessPolicy(args.policy, **kw)


def run_grow(args) -> int:
    try:
        policy = _policy(args)
        state = dynamic.new_builder(policy, seed_n=args.start, insertion=args.insert, seed=args.seed)
        size = policy.step_size
        if args.to < state.n or (args.to - state.n) % size:
            raise ValueError(
                f"{policy.kind} grows by {size} nodes per step; cannot reach {args.to} from {state.n}"
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    failures = 0
    budget = _budget(args)

    def check(ev: dynamic.TraceEvent) -> None:
        nonlocal failures
        report = verify.is_robust(state.graph, ev.nf, budget=budget, jobs=args.jobs)
        over = ev.bound is not None and ev.links > ev.bound
        if not report.robust or over:
            failures += 1
            print(
                _kv(step=ev.step, n=ev.n, nf=ev.nf, robust=report.robust, witness=report.witness,
                    links=ev.links, bound=ev.bound, bound_ok=not over),
                file=sys.stderr,
            )

    if args.verify_each:
        check(state.trace.events[0])
    while state.n < args.to:
        ev = dynamic.step(state)
        if args.verify_each:
            check(ev)
    last = state.trace.events[-1]
    _write(args.trace, export.trace_to_jsonl(state.trace))
    meta = {"policy": policy.kind, "nf": last.nf, "generator": export.GENERATOR_VERSION}
    _write(args.out, export.to_json(state.graph, meta) + "\n")
    groups = {v: j for j, ring in enumerate(state.rings) for v in ring}
    _write(args.dot, export.to_dot(state.graph, groups=groups if len(state.rings) > 1 else None))
    print(
        _kv(
            policy=policy.kind,
            n=state.n,
            nf=last.nf,
            links=state.graph.links,
            bound=last.bound,
            savings=dynamic.savings_ratio(state.graph),
            bound_violations=len(state.trace.bound_violations()),
            steps=len(state.trace) - 1,
        )
    )
    return EXIT_FAIL if failures else EXIT_OK


def _read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        return export.from_json(text)[0]
    except export.GraphParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def run_verify(args) -> int:
    g = _read_graph(args.graph)
    report = verify.is_robust(g, args.nf, method=args.method, budget=_budget(args), jobs=args.jobs)
    ok = report.robust
    fields = dict(
        robust=report.robust,
        method=report.method,
        nf=report.nf,
        kappa=report.kappa,
        checked_subsets=report.checked_subsets,
        witness=report.witness,
    )
    if args.check_lg:
        lg = verify.check_link_constraint(g)
        ok = ok and lg
        fields.update(lg=lg, links=g.links, lg_bound=verify.link_constraint_bound(g.node_count))
    print(_kv(**fields))
    return EXIT_OK if ok else EXIT_FAIL


def _read_trace(path: str) -> dynamic.GrowthTrace:
    try:
        text = Path(path).read_text(encoding="utf-8")
        return export.trace_from_jsonl(text)
    except (OSError, dynamic.TraceValidationError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def report_rows(trace: dynamic.GrowthTrace) -> list[dict]:
    rows = []
    for ev in trace:
        possible = ev.n * (ev.n - 1) / 2
        rows.append(
            {
                "step": ev.step,
                "n": ev.n,
                "nf": ev.nf,
                "links": ev.links,
                "bound": ev.bound,
                "savings": 1 - ev.links / possible if possible else None,
            }
        )
    return rows


def run_report(args) -> int:
    trace = _read_trace(args.trace_file)
    rows = report_rows(trace)
    cols = ("step", "n", "nf", "links", "bound", "savings")
    print("\t".join(cols))
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            cells.append(f"{v:.6f}" if c == "savings" and v is not None else ("-" if v is None else str(v)))
        print("\t".join(cells))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(rows)
    return EXIT_OK


def run_export(args) -> int:
    g = _read_graph(args.graph)
    if args.format == "json":
        text = export.to_json(g, {}) + "\n"
    else:
        groups = None
        if args.groups == "halves":
            groups = {v: int(v >= g.node_count // 2) for v in g.nodes()}
        text = export.to_dot(g, groups=groups)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", help="write the graph JSON here")
    shared.add_argument("--dot", help="write a DOT rendering here")
    shared.add_argument("--trace", help="write the JSONL growth trace here")
    shared.add_argument("--seed", type=int, help="seed for randomized insertion")
    shared.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    shared.add_argument("--budget", type=int, help="max subsets to enumerate (default $ROBUSTNET_BUDGET or 1e7)")

    p = argparse.ArgumentParser(prog="robustnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("static", parents=[shared], help="build a static optimal network")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--nf", type=int)
    s.add_argument("--method", choices=static.METHODS, default="circulant")
    s.add_argument("--f", help="factor f for halves-f (e.g. 2, 2.5, 5/3)")
    s.add_argument("--m", type=int)
    s.set_defaults(func=run_static)

    g = sub.add_parser("grow", parents=[shared], help="grow a network online")
    g.add_argument("--policy", choices=dynamic.POLICY_KINDS[:5], required=True)
    g.add_argument("--nf", type=int)
    g.add_argument("--f", help="factor f_k, one value or a comma-separated per-step schedule")
    g.add_argument("--m", type=int)
    g.add_argument("--plus-n", type=int, default=0, help="extra failures n for half-plus-n")
    g.add_argument("--from", dest="start", type=int, help="seed size")
    g.add_argument("--to", type=int, required=True)
    g.add_argument("--insert", choices=("last", "random"), default="last")
    g.add_argument("--verify-each", action="store_true")
    g.set_defaults(func=run_grow)

    v = sub.add_parser("verify", parents=[shared], help="check robustness of a graph file")
    v.add_argument("graph")
    v.add_argument("--nf", type=int, required=True)
    v.add_argument("--method", choices=("brute-force", "kappa", "auto"), default="brute-force")
    v.add_argument("--check-lg", action="store_true", help="also require L <= N^2/4 + N - 2")
    v.set_defaults(func=run_verify)

    r = sub.add_parser("report", parents=[shared], help="per-step table for a growth trace")
    r.add_argument("trace_file")
    r.add_argument("--csv")
    r.set_defaults(func=run_report)

    e = sub.add_parser("export", parents=[shared], help="re-encode a graph file")
    e.add_argument("graph")
    e.add_argument("--format", choices=("dot", "json"), default="dot")
    e.add_argument("--groups", choices=("none", "halves"), default="none")
    e.set_defaults(func=run_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except verify.ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
