"""Append-only simple undirected graphs and the ring orders used to wire them.

Nodes are dense integers assigned in arrival order.  Edges can be added but
never removed; failure analysis works on masked views (see ``verify``).
"""

from __future__ import annotations

from typing import Iterable, Iterator

__all__ = [
    "Graph",
    "RingOrder",
    "new_graph",
    "add_node",
    "add_edge",
    "degree",
    "neighbors",
    "ring_insert",
    "ring_neighbors_within",
]


class Graph:
    """Simple undirected graph with stable node ids and a grow-only edge set.

    Edges are stored canonically as ``(u, v)`` with ``u < v`` alongside a
    per-node adjacency set, so neighbor scans are O(deg) and exports can
    iterate edges in a deterministic order.
    """

    __slots__ = ("_adj", "_edges")

    def __init__(self, n: int = 0) -> None:
        if n < 0:
            raise ValueError(f"node count must be non-negative, got {n}")
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._edges: set[tuple[int, int]] = set()

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def links(self) -> int:
        """Number of links L."""
        return len(self._edges)

    def __len__(self) -> int:
        return len(self._adj)

    def nodes(self) -> range:
        return range(len(self._adj))

    def add_node(self) -> int:
        self._adj.append(set())
        return len(self._adj) - 1

    def _check(self, u: int) -> None:
        if not 0 <= u < len(self._adj):
            raise ValueError(f"node {u} out of range for graph with {len(self._adj)} nodes")

    def add_edge(self, u: int, v: int) -> bool:
        """Add ``{u, v}``; returns False if it was already present."""
        self._check(u)
        self._check(v)
        if u == v:
            raise ValueError(f"self-loop on node {u} is not allowed")
        key = (u, v) if u < v else (v, u)
        if key in self._edges:
            return False
        self._edges.add(key)
        self._adj[u].add(v)
        self._adj[v].add(u)
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def degree(self, u: int) -> int:
        self._check(u)
        return len(self._adj[u])

    def neighbors(self, u: int) -> frozenset[int]:
        self._check(u)
        return frozenset(self._adj[u])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return sorted(self._edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._edges)

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def adjacency_masks(self) -> list[int]:
        """Adjacency as one bitmask per node (bit ``v`` set when adjacent)."""
        masks = []
        for nbrs in self._adj:
            m = 0
            for v in nbrs:
                m |= 1 << v
            masks.append(m)
        return masks

    def copy(self) -> "Graph":
        g = Graph(len(self._adj))
        g._adj = [set(a) for a in self._adj]
        g._edges = set(self._edges)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self._edges == other._edges

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, links={self.links})"


class RingOrder:
    """Cyclic ordering of node ids (the imaginary cycle used for wiring).

    The ring need not be a subgraph of the actual network.  "Clockwise" means
    increasing position.
    """

    __slots__ = ("_order", "_pos")

    def __init__(self, order: Iterable[int] = ()) -> None:
        self._order: list[int] = list(order)
        if len(set(self._order)) != len(self._order):
            raise ValueError("ring members must be distinct")
        self._reindex()

    def _reindex(self) -> None:
        self._pos = {v: i for i, v in enumerate(self._order)}

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[int]:
        return iter(self._order)

    def __contains__(self, u: object) -> bool:
        return u in self._pos

    def __repr__(self) -> str:
        return f"RingOrder({self._order})"

    def position(self, u: int) -> int:
        try:
            return self._pos[u]
        except KeyError:
            raise ValueError(f"node {u} is not on the ring") from None

    def at(self, i: int) -> int:
        return self._order[i % len(self._order)]

    def append(self, new: int) -> None:
        if new in self._pos:
            raise ValueError(f"node {new} is already on the ring")
        self._pos[new] = len(self._order)
        self._order.append(new)

    def insert(self, new: int, after: int) -> "RingOrder":
        """Place ``new`` immediately clockwise of ``after`` (in place)."""
        if new in self._pos:
            raise ValueError(f"node {new} is already on the ring")
        i = self.position(after)
        self._order.insert(i + 1, new)
        self._reindex()
        return self

    def distance(self, u: int, v: int) -> int:
        d = abs(self.position(u) - self.position(v))
        return min(d, len(self._order) - d)

    def offset(self, u: int, k: int) -> int:
        """Node ``k`` hops clockwise of ``u`` (negative ``k`` goes the other way)."""
        return self._order[(self.position(u) + k) % len(self._order)]

    def neighbors_within(self, u: int, h: int) -> set[int]:
        size = len(self._order)
        if not 0 <= h < max(size, 1):
            raise ValueError(f"hop count {h} must be in [0, {size})")
        i = self.position(u)
        out = set()
        for k in range(1, h + 1):
            out.add(self._order[(i + k) % size])
            out.add(self._order[(i - k) % size])
        out.discard(u)
        return out


def new_graph(n: int) -> Graph:
    return Graph(n)


def add_node(g: Graph) -> int:
    return g.add_node()


def add_edge(g: Graph, u: int, v: int) -> bool:
    return g.add_edge(u, v)


def degree(g: Graph, u: int) -> int:
    return g.degree(u)


def neighbors(g: Graph, u: int) -> frozenset[int]:
    return g.neighbors(u)


def ring_insert(r: RingOrder, new: int, after: int) -> RingOrder:
    return r.insert(new, after)


def ring_neighbors_within(r: RingOrder, u: int, h: int) -> set[int]:
    return r.neighbors_within(u, h)
