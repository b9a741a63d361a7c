"""Online growth where links, once formed, are never removed.

A :class:`BuilderState` owns the graph, one or more imaginary rings and the
policy that fixes how many failures must be survived at each size.  Every
step appends nodes and edges only, and records a :class:`TraceEvent` so a
run can be replayed and audited.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from .graph import Graph, RingOrder
from .static import as_fraction, build_circulant, circulant_edges

__all__ = [
    "POLICY_KINDS",
    "RobustnessPolicy",
    "TraceEvent",
    "GrowthTrace",
    "TraceValidationError",
    "BuilderState",
    "new_builder",
    "step",
    "step_fixed_nf",
    "step_variable_nf",
    "reconcile_variable_nf",
    "step_two_rings",
    "step_2m_rings",
    "step_half",
    "step_half_plus_n",
    "grow_to",
    "savings_ratio",
    "circulant_subgraph_holds",
]

POLICY_KINDS = ("fixed-nf", "fraction-2f", "fraction-2mf", "half", "half-plus-n", "variable-nf")

Schedule = Union[int, float, str, Fraction, Sequence, Callable[[int], object]]


def _pick(schedule: Schedule, k: int):
    if callable(schedule):
        return schedule(k)
    if isinstance(schedule, (list, tuple)):
        return schedule[min(k, len(schedule) - 1)]
    return schedule


def _num(x: Fraction) -> Union[int, float]:
    return int(x) if x.denominator == 1 else float(x)


@dataclass
class RobustnessPolicy:
    """Which failure model a growth run must satisfy.

    ``f`` and ``nf_schedule`` may be a constant, a sequence (entry ``k``
    applies at step ``k``, the seed being step 0, last entry repeats) or a
    callable of ``k``.
    """

    kind: str
    nf: Optional[int] = None
    f: Schedule = None
    m: Optional[int] = None
    n: int = 0
    nf_schedule: Schedule = None

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy {self.kind!r}; choose from {', '.join(POLICY_KINDS)}")
        if self.kind == "fixed-nf" and (self.nf is None or self.nf < 1):
            raise ValueError("fixed-nf needs nf >= 1")
        if self.kind in ("fraction-2f", "fraction-2mf") and self.f is None:
            self.f = 2 if self.kind == "fraction-2f" else 1
        if self.kind == "fraction-2mf" and (self.m is None or self.m <= 1):
            raise ValueError("fraction-2mf needs an integer m > 1")
        if self.kind == "half-plus-n" and self.n < 0:
            raise ValueError("half-plus-n needs n >= 0")
        if self.kind == "variable-nf" and self.nf_schedule is None:
            raise ValueError("variable-nf needs nf_schedule")

    @property
    def step_size(self) -> int:
        if self.kind in ("fixed-nf", "variable-nf"):
            return 1
        if self.kind == "fraction-2mf":
            return 2 * self.m
        return 2

    @property
    def ring_count(self) -> int:
        return self.step_size

    def factor(self, k: int) -> Fraction:
        f = as_fraction(_pick(self.f, k))
        if self.kind == "fraction-2f" and f <= 1:
            raise ValueError(f"fraction-2f needs f_k > 1, got {f} at step {k}")
        if self.kind == "fraction-2mf" and f < 1:
            raise ValueError(f"fraction-2mf needs f_k >= 1, got {f} at step {k}")
        return f

    def demand(self, n: int, k: int) -> int:
        """Failures to survive at size ``n`` and step ``k``."""
        kind = self.kind
        if kind == "fixed-nf":
            return self.nf
        if kind == "variable-nf":
            return int(_pick(self.nf_schedule, k))
        if kind == "fraction-2f":
            return math.floor(Fraction(n) / (2 * self.factor(k)))
        if kind == "fraction-2mf":
            return math.floor(Fraction(n) / (2 * self.m * self.factor(k)))
        if kind == "half":
            return n // 2
        extra = n // 2 + self.n
        return extra if n >= 2 * (self.n + 2) else min(extra, n - 2)

    def bound(self, n: int) -> Union[int, float]:
        """Advertised link bound at size ``n``."""
        kind = self.kind
        N = Fraction(n)
        if kind == "fixed-nf":
            b = N * (self.nf + 1)
            if self.nf % 2 == 0:
                b += N * N / 8
        elif kind == "variable-nf":
            b = N * (N - 1) / 2
        elif kind == "fraction-2f":
            b = N * N / 4
        elif kind == "fraction-2mf":
            b = N * N / (4 * self.m)
        elif kind == "half":
            b = N * N / 4 + N - 2
        elif n >= 2 * (self.n + 2):
            b = N * N / 4 + 2 * N * (self.n + Fraction(3, 4)) - 2 * (self.n + 1) * (self.n + 2)
        else:
            b = N * (N - 1) / 2
        return _num(b)

    def default_seed(self) -> int:
        if self.kind == "fixed-nf":
            return self.nf + 2
        if self.kind == "variable-nf":
            return 3
        return self.step_size


@dataclass
class TraceEvent:
    step: int
    n: int
    nf: int
    added_nodes: list[int]
    added_edges: list[tuple[int, int]]
    links: int
    bound: Union[int, float, None]

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "n": self.n,
            "nf": self.nf,
            "added_nodes": list(self.added_nodes),
            "added_edges": [list(e) for e in self.added_edges],
            "links": self.links,
            "bound": self.bound,
        }


class TraceValidationError(ValueError):
    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


@dataclass
class GrowthTrace:
    events: list[TraceEvent] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[TraceEvent]:
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def replay_iter(self, graph: Optional[Graph] = None) -> Iterator[tuple[TraceEvent, Graph]]:
        """Apply events in order, yielding the (shared, mutating) graph after each.

        Raises :class:`TraceValidationError` on node id gaps, re-added edges
        or counts that disagree with the replayed graph.
        """
        g = Graph() if graph is None else graph
        for i, ev in enumerate(self.events):
            for v in ev.added_nodes:
                if v != g.node_count:
                    raise TraceValidationError(
                        f"event {i}: node id {v} breaks the dense sequence (expected {g.node_count})", i
                    )
                g.add_node()
            for u, v in ev.added_edges:
                try:
                    fresh = g.add_edge(u, v)
                except ValueError as exc:
                    raise TraceValidationError(f"event {i}: {exc}", i) from None
                if not fresh:
                    raise TraceValidationError(f"event {i}: edge ({u}, {v}) added twice", i)
            if ev.n != g.node_count:
                raise TraceValidationError(f"event {i}: n={ev.n} but replay has {g.node_count} nodes", i)
            if ev.links != g.links:
                raise TraceValidationError(f"event {i}: links={ev.links} but replay has {g.links}", i)
            yield ev, g

    def replay(self, graph: Optional[Graph] = None) -> Graph:
        g = Graph() if graph is None else graph
        for _ in self.replay_iter(g):
            pass
        return g

    def bound_violations(self) -> list[TraceEvent]:
        return [ev for ev in self.events if ev.bound is not None and ev.links > ev.bound]


@dataclass
class BuilderState:
    graph: Graph
    rings: list[RingOrder]
    policy: RobustnessPolicy
    step: int = 0
    insertion: str = "last"
    rng: random.Random = field(default_factory=random.Random)
    reconciled: list[int] = field(default_factory=list)
    last_inserted: list[Optional[int]] = field(default_factory=list)
    trace: GrowthTrace = field(default_factory=GrowthTrace)

    @property
    def n(self) -> int:
        return self.graph.node_count

    @property
    def nf(self) -> int:
        return self.policy.demand(self.n, self.step)


class _Recorder:
    """Adds edges to a graph and remembers the ones that were new."""

    def __init__(self, g: Graph) -> None:
        self.g = g
        self.added: list[tuple[int, int]] = []

    def link(self, u: int, v: int) -> None:
        if self.g.add_edge(u, v):
            self.added.append((u, v) if u < v else (v, u))


def _emit(state: BuilderState, rec: _Recorder, nodes: list[int]) -> TraceEvent:
    n = state.graph.node_count
    ev = TraceEvent(
        step=state.step,
        n=n,
        nf=state.policy.demand(n, state.step),
        added_nodes=nodes,
        added_edges=rec.added,
        links=state.graph.links,
        bound=state.policy.bound(n),
    )
    state.trace.events.append(ev)
    return ev


def _insert(state: BuilderState, idx: int, new: int) -> None:
    ring = state.rings[idx]
    if not len(ring):
        ring.append(new)
    else:
        if state.insertion == "random":
            after = state.rng.choice(ring.order)
        else:
            after = state.last_inserted[idx]
            if after is None:
                after = ring.at(-1)
        ring.insert(new, after)
    state.last_inserted[idx] = new


def _hops(ring: RingOrder, h: int) -> int:
    return max(0, min(h, len(ring) - 1))


def _wire_new(rec: _Recorder, ring: RingOrder, u: int, nf: int) -> None:
    """Wire one arriving node as the circulant build would for robustness ``nf``."""
    size = len(ring)
    if nf % 2:
        for w in sorted(ring.neighbors_within(u, _hops(ring, (nf + 1) // 2))):
            rec.link(u, w)
        return
    for w in sorted(ring.neighbors_within(u, _hops(ring, nf // 2))):
        rec.link(u, w)
    if size < 2:
        return
    if size % 2 == 0:
        rec.link(u, ring.offset(u, size // 2))
        _diametric_pass(rec, ring)
    else:
        rec.link(u, ring.offset(u, (size - 1) // 2))


def _diametric_pass(rec: _Recorder, ring: RingOrder) -> None:
    half = len(ring) // 2
    for i in range(half):
        rec.link(ring.at(i), ring.at(i + half))


def _reconcile(rec: _Recorder, ring: RingOrder, nf: int) -> None:
    """Give every ring member the circulant links for robustness ``nf``."""
    if nf < 1:
        raise ValueError(f"reconciliation needs nf >= 1, got {nf}")
    size = len(ring)
    if size < 2:
        return
    d = nf + 1
    h = _hops(ring, d // 2)
    for u in ring.order:
        for w in sorted(ring.neighbors_within(u, h)):
            rec.link(u, w)
    if d % 2 == 0:
        return
    if size % 2 == 0:
        _diametric_pass(rec, ring)
        return
    s = (size - 1) // 2
    for u in ring.order:
        if not (rec.g.has_edge(u, ring.offset(u, s)) or rec.g.has_edge(u, ring.offset(u, -s))):
            rec.link(u, ring.offset(u, s))


def _ring_param(demand: int) -> int:
    # each ring must stay at least a cycle so it is connected
    return max(demand - 1, 1)


def new_builder(
    policy: RobustnessPolicy,
    seed_n: Optional[int] = None,
    insertion: str = "last",
    seed: Optional[int] = None,
) -> BuilderState:
    """Create the seed network for ``policy``.

    ``insertion`` is ``"last"`` (insert after the most recently inserted
    ring member) or ``"random"`` (uniform ring member, seeded by ``seed``).
    """
    if insertion not in ("last", "random"):
        raise ValueError(f"insertion must be 'last' or 'random', got {insertion!r}")
    seed_n = policy.default_seed() if seed_n is None else seed_n
    kind = policy.kind
    rings = policy.ring_count
    state = BuilderState(
        graph=Graph(),
        rings=[RingOrder() for _ in range(rings)],
        policy=policy,
        insertion=insertion,
        rng=random.Random(seed),
        reconciled=[0] * rings,
        last_inserted=[None] * rings,
    )
    if kind in ("fixed-nf", "variable-nf"):
        nf = policy.nf if kind == "fixed-nf" else max(policy.demand(seed_n, 0), 1)
        if seed_n < nf + 2:
            raise ValueError(f"seed needs at least nf + 2 = {nf + 2} nodes, got {seed_n}")
        g = build_circulant(seed_n, nf)
        state.graph = g
        state.rings = [RingOrder(range(seed_n))]
        state.reconciled = [nf]
        state.last_inserted = [seed_n - 1]
        added = [e for e in circulant_edges(seed_n, nf)]
        return _seed_event(state, seed_n, added)
    if kind in ("half", "half-plus-n"):
        if seed_n != 2:
            raise ValueError(f"{kind} seeds with exactly 2 nodes, got {seed_n}")
    elif seed_n < rings or seed_n % rings:
        raise ValueError(f"{kind} seed size must be a positive multiple of {rings}, got {seed_n}")
    g = Graph(seed_n)
    state.graph = g
    rec = _Recorder(g)
    r = seed_n // rings
    for j in range(rings):
        state.rings[j] = RingOrder(range(j * r, (j + 1) * r))
        state.last_inserted[j] = (j + 1) * r - 1
    if kind in ("half", "half-plus-n"):
        rec.link(0, 1)
        return _seed_event(state, seed_n, rec.added)
    for i in range(r):
        members = [state.rings[j].at(i) for j in range(rings)]
        _link_cycle(rec, members)
    param = _ring_param(policy.demand(seed_n, 0))
    for j, ring in enumerate(state.rings):
        _reconcile(rec, ring, param)
        state.reconciled[j] = param
    return _seed_event(state, seed_n, rec.added)


def _link_cycle(rec: _Recorder, members: list[int]) -> None:
    """Two members get one link; more get a closed cycle."""
    if len(members) == 2:
        rec.link(*members)
        return
    for k, u in enumerate(members):
        rec.link(u, members[(k + 1) % len(members)])


def _seed_event(state: BuilderState, seed_n: int, added: list[tuple[int, int]]) -> BuilderState:
    rec = _Recorder(state.graph)
    rec.added = list(added)
    _emit(state, rec, list(range(seed_n)))
    return state


def _require(state: BuilderState, *kinds: str) -> None:
    if state.policy.kind not in kinds:
        raise ValueError(f"step needs policy {' or '.join(kinds)}, state has {state.policy.kind}")


def step_fixed_nf(state: BuilderState) -> TraceEvent:
    """Add one node for a constant failure count.

    The new node is wired like the circulant build at the new size; for even
    ``nf`` a pass at even sizes also adds any missing diametric pair.
    """
    _require(state, "fixed-nf")
    state.step += 1
    new = state.graph.add_node()
    _insert(state, 0, new)
    rec = _Recorder(state.graph)
    _wire_new(rec, state.rings[0], new, state.policy.nf)
    return _emit(state, rec, [new])


def reconcile_variable_nf(state: BuilderState, nf_k: int, ring_index: int = 0) -> TraceEvent:
    """Catch-up pass raising one ring's wiring to robustness ``nf_k``; adds no node.

    Idempotent: repeating the call adds nothing.
    """
    if nf_k < state.reconciled[ring_index]:
        raise ValueError(
            f"demand may only grow: ring {ring_index} already wired for {state.reconciled[ring_index]}, got {nf_k}"
        )
    state.step += 1
    rec = _Recorder(state.graph)
    _reconcile(rec, state.rings[ring_index], nf_k)
    state.reconciled[ring_index] = nf_k
    return _emit(state, rec, [])


def step_variable_nf(state: BuilderState) -> TraceEvent:
    """Add one node when the failure count follows an arbitrary non-decreasing schedule."""
    _require(state, "variable-nf")
    state.step += 1
    new = state.graph.add_node()
    _insert(state, 0, new)
    nf_k = max(state.policy.demand(state.n, state.step), state.reconciled[0], 1)
    rec = _Recorder(state.graph)
    _wire_new(rec, state.rings[0], new, nf_k)
    _reconcile(rec, state.rings[0], nf_k)
    state.reconciled[0] = nf_k
    return _emit(state, rec, [new])


def _multi_ring_step(state: BuilderState) -> tuple[_Recorder, list[int]]:
    state.step += 1
    new = [state.graph.add_node() for _ in state.rings]
    for j, v in enumerate(new):
        _insert(state, j, v)
    rec = _Recorder(state.graph)
    _link_cycle(rec, new)
    demand = state.policy.demand(state.n, state.step)
    param = max(_ring_param(demand), *state.reconciled)
    for j, ring in enumerate(state.rings):
        _reconcile(rec, ring, param)
        state.reconciled[j] = param
    return rec, new


def step_two_rings(state: BuilderState) -> TraceEvent:
    """Add one node to each of two rings, link the pair, and catch both rings up."""
    _require(state, "fraction-2f")
    rec, new = _multi_ring_step(state)
    return _emit(state, rec, new)


def step_2m_rings(state: BuilderState) -> TraceEvent:
    """Add one node to each of ``2m`` rings, close them into a cycle, catch rings up."""
    _require(state, "fraction-2mf")
    rec, new = _multi_ring_step(state)
    return _emit(state, rec, new)


def _half_step(state: BuilderState, firsts: int) -> TraceEvent:
    state.step += 1
    ring_a, ring_b = state.rings
    a = state.graph.add_node()
    b = state.graph.add_node()
    rec = _Recorder(state.graph)
    for u in ring_a:
        rec.link(a, u)
    for u in ring_b:
        rec.link(b, u)
    ring_a.append(a)
    ring_b.append(b)
    rec.link(a, b)
    for u in sorted(ring_b)[:firsts]:
        rec.link(a, u)
    for u in sorted(ring_a)[:firsts]:
        rec.link(b, u)
    return _emit(state, rec, [a, b])


def step_half(state: BuilderState) -> TraceEvent:
    """Add a node to each complete half; tie each to the other half's first node."""
    _require(state, "half")
    return _half_step(state, 1)


def step_half_plus_n(state: BuilderState) -> TraceEvent:
    """As :func:`step_half`, but tie each new node to the other half's first ``n + 1``."""
    _require(state, "half-plus-n")
    return _half_step(state, state.policy.n + 1)


_STEPS = {
    "fixed-nf": step_fixed_nf,
    "variable-nf": step_variable_nf,
    "fraction-2f": step_two_rings,
    "fraction-2mf": step_2m_rings,
    "half": step_half,
    "half-plus-n": step_half_plus_n,
}


def step(state: BuilderState) -> TraceEvent:
    return _STEPS[state.policy.kind](state)


def grow_to(state: BuilderState, target_n: int) -> GrowthTrace:
    """Step until the network has ``target_n`` nodes; returns the new events.

    Batch arrivals larger than the policy's step size are handled as a run of
    single steps.
    """
    size = state.policy.step_size
    if target_n < state.n:
        raise ValueError(f"target {target_n} is below the current size {state.n}")
    if (target_n - state.n) % size:
        raise ValueError(
            f"{state.policy.kind} grows by {size} nodes per step; cannot reach {target_n} from {state.n}"
        )
    out = GrowthTrace()
    while state.n < target_n:
        out.events.append(step(state))
    return out


def savings_ratio(g: Graph) -> float:
    """Fraction of the ``N(N-1)/2`` possible links left unused."""
    n = g.node_count
    if n < 2:
        raise ValueError("savings ratio needs at least 2 nodes")
    return 1 - g.links / (n * (n - 1) / 2)


def circulant_subgraph_holds(state: BuilderState, nf: Optional[int] = None) -> bool:
    """Whether the static circulant build at the current size sits inside the graph.

    Ring positions label the circulant; the origin and orientation of that
    labeling are free, so all rotations and reflections are tried.
    """
    ring = state.rings[0]
    size = len(ring)
    nf = state.policy.nf if nf is None else nf
    pattern = circulant_edges(size, nf)
    order = ring.order
    g = state.graph
    for shift in range(size):
        for sign in (1, -1):
            if all(
                g.has_edge(order[(shift + sign * u) % size], order[(shift + sign * v) % size])
                for u, v in pattern
            ):
                return True
    return False
