"""Canonical JSON, DOT and JSONL encodings for graphs and growth traces."""

from __future__ import annotations

import json
import re
from typing import Mapping, Optional

from .dynamic import GrowthTrace, TraceEvent, TraceValidationError
from .graph import Graph

__all__ = [
    "GraphParseError",
    "to_json",
    "from_json",
    "to_dot",
    "trace_to_jsonl",
    "trace_from_jsonl",
    "GENERATOR_VERSION",
]

GENERATOR_VERSION = "robustnet-0.1.0"

_PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False, ensure_ascii=False)


def to_json(g: Graph, meta: Optional[Mapping] = None) -> str:
    """``{"n":N,"edges":[[u,v],...],"meta":{...}}`` with sorted edges and meta keys."""
    meta = dict(sorted((meta or {}).items()))
    return _dumps({"n": g.node_count, "edges": [list(e) for e in g.edges()], "meta": meta})


def _locate(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


_PAIR = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _edge_offset(text: str, index: int) -> int:
    start = text.find('"edges"')
    start = text.find("[", max(start, 0)) + 1
    for i, match in enumerate(_PAIR.finditer(text, start)):
        if i == index:
            return match.start()
    return max(start - 1, 0)


def from_json(text: str) -> tuple[Graph, dict]:
    """Parse a graph document; returns the graph and its ``meta`` map."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, exc.lineno, exc.colno) from None

    def fail(msg: str, offset: int = 0):
        raise GraphParseError(msg, *_locate(text, offset))

    if not isinstance(doc, dict):
        fail("document must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        fail("'n' must be a non-negative integer", max(text.find('"n"'), 0))
    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        fail("'edges' must be a list", max(text.find('"edges"'), 0))
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        fail("'meta' must be an object", max(text.find('"meta"'), 0))
    g = Graph(n)
    for i, pair in enumerate(edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            fail(f"edge {i} must be a pair of integers", _edge_offset(text, i))
        u, v = pair
        if u == v:
            fail(f"edge {i} is a self-loop on {u}", _edge_offset(text, i))
        if not (0 <= u < n and 0 <= v < n):
            fail(f"edge {i} ({u}, {v}) has an endpoint outside 0..{n - 1}", _edge_offset(text, i))
        if not g.add_edge(u, v):
            fail(f"edge {i} ({u}, {v}) is a duplicate", _edge_offset(text, i))
    return g, meta


def to_dot(
    g: Graph,
    labels: Optional[Mapping[int, str]] = None,
    groups: Optional[Mapping[int, int]] = None,
) -> str:
    """Undirected DOT text; ``groups`` colors nodes by class (e.g. halves or rings)."""
    lines = ["graph {"]
    for v in g.nodes():
        attrs = []
        if labels and v in labels:
            attrs.append(f'label="{labels[v]}"')
        if groups and v in groups:
            color = _PALETTE[groups[v] % len(_PALETTE)]
            attrs.append(f'color="{color}"')
        lines.append(f"  {v} [{', '.join(attrs)}];" if attrs else f"  {v};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_jsonl(trace: GrowthTrace) -> str:
    return "".join(_dumps(ev.as_dict()) + "\n" for ev in trace.events)


_KEYS = ("step", "n", "nf", "added_nodes", "added_edges", "links", "bound")


def trace_from_jsonl(text: str, validate: bool = True) -> GrowthTrace:
    """Parse a JSONL trace; with ``validate`` the events are replayed and checked.

    Errors name the 1-based line of the offending record.
    """
    events = []
    line_of = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceValidationError(f"line {lineno}: {exc.msg}", len(events)) from None
        if not isinstance(rec, dict) or any(k not in rec for k in _KEYS):
            raise TraceValidationError(f"line {lineno}: record must have keys {', '.join(_KEYS)}", len(events))
        try:
            ev = TraceEvent(
                step=int(rec["step"]),
                n=int(rec["n"]),
                nf=int(rec["nf"]),
                added_nodes=[int(v) for v in rec["added_nodes"]],
                added_edges=[(int(u), int(v)) for u, v in rec["added_edges"]],
                links=int(rec["links"]),
                bound=rec["bound"],
            )
        except (TypeError, ValueError):
            raise TraceValidationError(f"line {lineno}: malformed field", len(events)) from None
        events.append(ev)
        line_of.append(lineno)
    trace = GrowthTrace(events)
    if validate:
        try:
            trace.replay()
        except TraceValidationError as exc:
            raise TraceValidationError(f"line {line_of[exc.index]}: {exc}", exc.index) from None
    return trace
