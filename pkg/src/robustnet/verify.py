"""Exact robustness checks.

A graph is robust to ``nf`` node failures when deleting *any* ``nf`` nodes
leaves it connected.  Two independent routes decide this:

* exhaustive enumeration of removal sets (lexicographic, budget-guarded);
* node connectivity via unit-capacity max-flow on the node-split network,
  using the ``robust <=> kappa >= nf + 1`` equivalence (valid for
  ``nf <= N - 2``).

Residual graphs with at most one node count as connected.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .graph import Graph

__all__ = [
    "DEFAULT_BUDGET",
    "ResourceLimitError",
    "VerificationReport",
    "default_budget",
    "is_connected",
    "robust_brute_force",
    "vertex_connectivity",
    "minimum_vertex_cut",
    "local_node_connectivity",
    "is_robust",
    "half_expansion_check",
    "link_constraint_bound",
    "check_link_constraint",
]

DEFAULT_BUDGET = 10**7


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive check would exceed its enumeration budget."""


def default_budget() -> int:
    env = os.environ.get("ROBUSTNET_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass
class VerificationReport:
    robust: bool
    method: str
    nf: int
    kappa: Optional[int] = None
    witness: Optional[frozenset[int]] = None
    checked_subsets: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "robust": self.robust,
            "method": self.method,
            "nf": self.nf,
            "kappa": self.kappa,
            "witness": sorted(self.witness) if self.witness is not None else None,
            "checked_subsets": self.checked_subsets,
        }


def _mask_connected(adj: list[int], remaining: int) -> bool:
    if remaining & (remaining - 1) == 0:
        return True
    seen = frontier = remaining & -remaining
    while frontier:
        reach = 0
        f = frontier
        while f:
            b = f & -f
            reach |= adj[b.bit_length() - 1]
            f ^= b
        frontier = reach & remaining & ~seen
        seen |= frontier
    return seen == remaining


def is_connected(g: Graph, removed: Iterable[int] = ()) -> bool:
    """True iff the graph induced on the nodes outside ``removed`` is connected."""
    full = (1 << g.node_count) - 1
    mask = 0
    for v in removed:
        mask |= 1 << v
    return _mask_connected(g.adjacency_masks(), full & ~mask)


def _combination_rank(combo: tuple[int, ...], n: int) -> int:
    """Zero-based index of ``combo`` in lexicographic order of C(n, k)."""
    k = len(combo)
    rank = 0
    prev = -1
    for i, c in enumerate(combo):
        for skipped in range(prev + 1, c):
            rank += math.comb(n - skipped - 1, k - i - 1)
        prev = c
    return rank


def _scan_prefix(args: tuple) -> Optional[tuple[int, ...]]:
    adj, n, nf, first = args
    full = (1 << n) - 1
    base = 1 << first
    for rest in combinations(range(first + 1, n), nf - 1):
        mask = base
        for v in rest:
            mask |= 1 << v
        if not _mask_connected(adj, full & ~mask):
            return (first,) + rest
    return None


def robust_brute_force(
    g: Graph, nf: int, budget: Optional[int] = None, jobs: int = 1
) -> VerificationReport:
    """Enumerate every ``nf``-subset removal in lexicographic order.

    The witness is the lexicographically first disconnecting subset, and
    ``checked_subsets`` counts subsets up to and including it, so the report
    does not depend on ``jobs``.
    """
    n = g.node_count
    if nf < 0:
        raise ValueError(f"nf must be non-negative, got {nf}")
    if nf > n:
        raise ValueError(f"cannot remove {nf} nodes from a {n}-node graph")
    total = math.comb(n, nf)
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise ResourceLimitError(
            f"C({n}, {nf}) = {total} subsets exceeds budget {budget}; "
            "use the vertex-connectivity method"
        )
    adj = g.adjacency_masks()
    full = (1 << n) - 1
    witness = None
    if nf == 0:
        if not _mask_connected(adj, full):
            witness = ()
    elif jobs > 1 and n - nf >= 1:
        tasks = [(adj, n, nf, first) for first in range(n - nf + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for found in pool.map(_scan_prefix, tasks):
                if found is not None:
                    witness = found
                    break
    else:
        for first in range(n - nf + 1):
            witness = _scan_prefix((adj, n, nf, first))
            if witness is not None:
                break
    if witness is None:
        return VerificationReport(True, "brute-force", nf, checked_subsets=total)
    return VerificationReport(
        False,
        "brute-force",
        nf,
        witness=frozenset(witness),
        checked_subsets=_combination_rank(witness, n) + 1,
    )


class _SplitNetwork:
    """Unit-capacity flow network with every node split into in/out halves.

    Node ``v`` becomes ``2v`` (in) and ``2v + 1`` (out) joined by a unit arc;
    each edge ``{u, v}`` becomes arcs ``u_out -> v_in`` and ``v_out -> u_in``.
    Arc ``e`` and its residual twin are ``e`` and ``e ^ 1``.
    """

    def __init__(self, g: Graph) -> None:
        size = 2 * g.node_count
        self.size = size
        self.head: list[int] = []
        self.cap0: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(size)]
        for v in g.nodes():
            self._arc(2 * v, 2 * v + 1)
        for u, v in g.edges():
            self._arc(2 * u + 1, 2 * v)
            self._arc(2 * v + 1, 2 * u)

    def _arc(self, a: int, b: int) -> None:
        self.adj[a].append(len(self.head))
        self.head.append(b)
        self.cap0.append(1)
        self.adj[b].append(len(self.head))
        self.head.append(a)
        self.cap0.append(0)

    def _levels(self, cap: list[int], src: int, dst: int) -> Optional[list[int]]:
        level = [-1] * self.size
        level[src] = 0
        queue = deque([src])
        head, adj = self.head, self.adj
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                w = head[e]
                if cap[e] and level[w] < 0:
                    level[w] = level[u] + 1
                    queue.append(w)
        return level if level[dst] >= 0 else None

    def max_flow(self, s: int, t: int, cutoff: int) -> tuple[int, list[int]]:
        """Dinic from ``s_out`` to ``t_in``; stops early once ``cutoff`` is met."""
        cap = list(self.cap0)
        src, dst = 2 * s + 1, 2 * t
        head, adj = self.head, self.adj
        flow = 0
        while flow < cutoff:
            level = self._levels(cap, src, dst)
            if level is None:
                break
            it = [0] * self.size
            while flow < cutoff:
                stack = [src]
                path: list[int] = []
                while stack:
                    u = stack[-1]
                    if u == dst:
                        break
                    arcs = adj[u]
                    i = it[u]
                    nxt = -1
                    while i < len(arcs):
                        e = arcs[i]
                        if cap[e] and level[head[e]] == level[u] + 1:
                            nxt = e
                            break
                        i += 1
                    it[u] = i
                    if nxt < 0:
                        level[u] = -1
                        stack.pop()
                        if path:
                            path.pop()
                        continue
                    stack.append(head[nxt])
                    path.append(nxt)
                if not stack:
                    break
                for e in path:
                    cap[e] -= 1
                    cap[e ^ 1] += 1
                flow += 1
        return flow, cap

    def cut_nodes(self, cap: list[int], s: int) -> frozenset[int]:
        src = 2 * s + 1
        seen = [False] * self.size
        seen[src] = True
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                w = self.head[e]
                if cap[e] and not seen[w]:
                    seen[w] = True
                    queue.append(w)
        return frozenset(v for v in range(self.size // 2) if seen[2 * v] and not seen[2 * v + 1])


def local_node_connectivity(g: Graph, s: int, t: int) -> int:
    """Maximum number of internally node-disjoint s-t paths (s, t non-adjacent)."""
    if s == t or g.has_edge(s, t):
        raise ValueError("local node connectivity needs two distinct non-adjacent nodes")
    flow, _ = _SplitNetwork(g).max_flow(s, t, g.node_count)
    return flow


def _min_cut(g: Graph) -> tuple[int, Optional[frozenset[int]]]:
    n = g.node_count
    if n <= 1:
        return 0, None
    if not is_connected(g):
        return 0, frozenset()
    degs = g.degrees()
    if all(d == n - 1 for d in degs):
        return n - 1, None
    v = min(range(n), key=lambda u: (degs[u], u))
    nbrs = sorted(g.neighbors(v))
    best = degs[v]
    cut = frozenset(nbrs)
    net = _SplitNetwork(g)
    pairs = [(v, w) for w in range(n) if w != v and not g.has_edge(v, w)]
    pairs += [(x, y) for i, x in enumerate(nbrs) for y in nbrs[i + 1 :] if not g.has_edge(x, y)]
    for s, t in pairs:
        flow, cap = net.max_flow(s, t, best)
        if flow < best:
            best = flow
            cut = net.cut_nodes(cap, s)
    return best, cut


def vertex_connectivity(g: Graph) -> int:
    """Exact node connectivity; ``K_n`` gives ``n - 1`` and disconnected graphs 0.

    Fixes a minimum-degree node ``v`` and takes the minimum local connectivity
    over all non-neighbors of ``v`` and all non-adjacent pairs of its
    neighbors, which covers every minimum separator whether or not it
    contains ``v``.
    """
    return _min_cut(g)[0]


def minimum_vertex_cut(g: Graph) -> Optional[frozenset[int]]:
    """A minimum disconnecting node set, or None for complete graphs."""
    return _min_cut(g)[1]


def is_robust(
    g: Graph,
    nf: int,
    method: str = "auto",
    budget: Optional[int] = None,
    jobs: int = 1,
) -> VerificationReport:
    """Decide robustness to ``nf`` failures.

    ``method`` is ``"auto"`` (min-degree shortcut, then brute force within
    budget, else connectivity), ``"brute-force"`` or ``"kappa"``.  A forced
    method skips the shortcut.  Forcing brute force over budget raises
    :class:`ResourceLimitError`.
    """
    if nf < 0:
        raise ValueError(f"nf must be non-negative, got {nf}")
    if method not in ("auto", "brute-force", "kappa"):
        raise ValueError(f"unknown method {method!r}")
    n = g.node_count
    if nf >= n - 1:
        # residual has at most one node
        return VerificationReport(True, "brute-force", nf, checked_subsets=math.comb(n, nf))
    degs = g.degrees()
    low = [u for u in g.nodes() if degs[u] < nf + 1] if method == "auto" else []
    if low:
        u = low[0]
        return VerificationReport(False, "min-degree-shortcut", nf, witness=g.neighbors(u))
    budget = default_budget() if budget is None else budget
    if method == "brute-force" or (method == "auto" and math.comb(n, nf) <= budget):
        return robust_brute_force(g, nf, budget=budget, jobs=jobs)
    kappa, cut = _min_cut(g)
    if kappa >= nf + 1:
        return VerificationReport(True, "vertex-connectivity", nf, kappa=kappa)
    return VerificationReport(False, "vertex-connectivity", nf, kappa=kappa, witness=cut)


def half_expansion_check(
    g: Graph,
    half_a: Iterable[int],
    half_b: Iterable[int],
    limit: int,
    budget: Optional[int] = None,
) -> bool:
    """Every nonempty ``S`` in one half with ``|S| < limit`` has more than ``|S|``
    cross-neighbors in the other half (checked in both directions)."""
    a, b = sorted(half_a), sorted(half_b)
    if len(a) != len(b) or set(a) & set(b) or len(a) + len(b) != g.node_count:
        raise ValueError("halves must partition the nodes into equal parts")
    top = min(limit - 1, len(a))
    total = 2 * sum(math.comb(len(a), s) for s in range(1, top + 1))
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise ResourceLimitError(f"{total} subset checks exceeds budget {budget}")
    for side, other in ((a, set(b)), (b, set(a))):
        cross = {u: g.neighbors(u) & other for u in side}
        for size in range(1, top + 1):
            for subset in combinations(side, size):
                reach = set().union(*(cross[u] for u in subset))
                if len(reach) <= size:
                    return False
    return True


def link_constraint_bound(n: int) -> float:
    return n * n / 4 + n - 2


def check_link_constraint(g: Graph) -> bool:
    """True iff ``L <= N^2/4 + N - 2``."""
    n = g.node_count
    return 4 * g.links <= n * n + 4 * n - 8
