"""Static constructions with the minimum number of links for a given robustness.

All builders return a fresh :class:`Graph`.  With ``nf`` the number of node
failures to survive, every node needs at least ``nf + 1`` links, and the
even-``n`` builders here hit that floor exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .graph import Graph, RingOrder

__all__ = [
    "StaticSpec",
    "build_cycle",
    "circulant_edges",
    "build_circulant",
    "build_halves_f1",
    "build_halves_f",
    "build_msets",
    "optimal_links",
    "fixture_matrix",
    "build_static",
    "as_fraction",
]

Number = Union[int, float, str, Fraction]


def as_fraction(f: Number) -> Fraction:
    if isinstance(f, float):
        return Fraction(f).limit_denominator(10**6)
    return Fraction(f)


def build_cycle(n: int) -> tuple[Graph, RingOrder]:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 nodes, got {n}")
    g = Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))
    return g, RingOrder(range(n))


def circulant_edges(n: int, nf: int) -> list[tuple[int, int]]:
    """Edges of the circulant build over ring positions ``0..n-1``.

    With ``d = nf + 1``: link every position to all positions within
    ``d // 2`` hops.  When ``d`` is odd each node also needs one long link:
    for even ``n`` the diametric pairs, for odd ``n`` a sweep from position 0
    that links each still-uncovered node to the node ``(n - 1) / 2`` hops
    counter-clockwise, which leaves node 0 as the single node of degree
    ``d + 1``.
    """
    if nf < 1:
        raise ValueError(f"nf must be at least 1, got {nf}")
    if nf + 1 >= n:
        raise ValueError(f"need nf + 1 < n, got nf={nf}, n={n}")
    d = nf + 1
    edges: set[tuple[int, int]] = set()

    def link(u: int, v: int) -> None:
        edges.add((u, v) if u < v else (v, u))

    for i in range(n):
        for k in range(1, d // 2 + 1):
            link(i, (i + k) % n)
    if d % 2:
        if n % 2 == 0:
            for i in range(n // 2):
                link(i, i + n // 2)
        else:
            s = (n - 1) // 2
            covered = [False] * n
            for j in range(n):
                if not covered[j]:
                    t = (j - s) % n
                    link(j, t)
                    covered[j] = covered[t] = True
    return sorted(edges)


def build_circulant(n: int, nf: int) -> Graph:
    return Graph.from_edges(n, circulant_edges(n, nf))


def build_halves_f1(n: int) -> Graph:
    """Two complete halves; ``A_i`` links to ``B_i`` and ``B_{i+1}``.

    Robust to ``n/2`` failures with ``n^2/4 + n/2`` links.
    """
    if n % 2 or n < 6:
        raise ValueError(f"n must be even and at least 6, got {n}")
    h = n // 2
    g = Graph(n)
    for base in (0, h):
        for i in range(h):
            for j in range(i + 1, h):
                g.add_edge(base + i, base + j)
    for i in range(h):
        g.add_edge(i, h + i)
        g.add_edge(i, h + (i + 1) % h)
    return g


def build_halves_f(n: int, f: Number) -> Graph:
    """Two halves matched one-to-one, each wired as a circulant robust to ``nf - 1``.

    ``nf = n / (2f)`` must be an integer.  When the half size and ``nf`` are
    both odd, node 0 of each half is the one with an extra in-half link; the
    matching would pair those two, so that cross link is left out and every
    node ends with degree exactly ``nf + 1``.
    """
    fr = as_fraction(f)
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if fr <= 1:
        raise ValueError(f"f must exceed 1, got {f}")
    ratio = Fraction(n) / (2 * fr)
    if ratio.denominator != 1:
        raise ValueError(f"n/(2f) = {ratio} is not an integer")
    nf = int(ratio)
    h = n // 2
    if nf < 2:
        raise ValueError(f"nf = n/(2f) must be at least 2, got {nf}")
    if nf >= h:
        raise ValueError(f"nf = {nf} must be below the half size {h}")
    inner = circulant_edges(h, nf - 1)
    g = Graph(n)
    for base in (0, h):
        for u, v in inner:
            g.add_edge(base + u, base + v)
    skip_special = h % 2 == 1 and nf % 2 == 1
    for i in range(h):
        if skip_special and i == 0:
            continue
        g.add_edge(i, h + i)
    return g


def build_msets(n: int, m: int) -> Graph:
    """``2m`` complete sets of size ``r = n/(2m)`` plus ``r`` transversal cycles.

    Cycle ``i`` visits the ``i``-th member of every set in set order.
    """
    if m <= 1:
        raise ValueError(f"m must exceed 1, got {m}")
    if n % (2 * m):
        raise ValueError(f"n = {n} is not divisible by 2m = {2 * m}")
    r = n // (2 * m)
    if r < 2:
        raise ValueError(f"sets need at least 2 nodes, got n/(2m) = {r}")
    g = Graph(n)
    sets = [range(j * r, (j + 1) * r) for j in range(2 * m)]
    for members in sets:
        for a in members:
            for b in members:
                if a < b:
                    g.add_edge(a, b)
    for i in range(r):
        cycle = [members[i] for members in sets]
        for k, u in enumerate(cycle):
            g.add_edge(u, cycle[(k + 1) % len(cycle)])
    return g


def optimal_links(n: int, nf: int) -> int:
    """Fewest links any graph robust to ``nf`` failures can have.

    ``n (nf + 1) / 2``, rounded up for odd ``n`` (the min-degree floor).
    """
    if n < 1 or nf < 0:
        raise ValueError(f"invalid arguments n={n}, nf={nf}")
    return math.ceil(n * (nf + 1) / 2)


_FIXTURES = {
    8: """
        01110101
        10111010
        11011100
        11100011
        01100111
        10101011
        01011101
        10011110
    """,
    10: """
        0111100101
        1011101010
        1101110100
        1110111000
        1111000011
        0011001111
        0101010111
        1010011011
        0100111101
        1000111110
    """,
    12: """
        011111000101
        101111001010
        110111010100
        111011101000
        111101110000
        111110000011
        000110011111
        001010101111
        010100110111
        101000111011
        010001111101
        100001111110
    """,
}


def fixture_matrix(n: int) -> Graph:
    """The hand-built optimal ``n/2``-robust networks for ``n`` in {8, 10, 12}.

    Node ``i`` here is row ``i + 1`` of the published adjacency matrix.
    """
    if n not in _FIXTURES:
        raise ValueError(f"no fixture for n={n}; available: {sorted(_FIXTURES)}")
    rows = _FIXTURES[n].split()
    g = Graph(n)
    for i, row in enumerate(rows):
        for j, bit in enumerate(row):
            if bit == "1" and i < j:
                g.add_edge(i, j)
    return g


@dataclass
class StaticSpec:
    n: int
    nf: Optional[int] = None
    method: str = "circulant"
    f: Optional[Fraction] = None
    m: Optional[int] = None


METHODS = ("circulant", "halves-f1", "halves-f", "msets")


def build_static(spec: StaticSpec) -> tuple[Graph, int]:
    """Resolve a :class:`StaticSpec` to a graph and its robustness level."""
    n, nf = spec.n, spec.nf
    if spec.method == "circulant":
        if nf is None:
            raise ValueError("circulant needs nf")
        return build_circulant(n, nf), nf
    if spec.method == "halves-f1":
        if nf is not None and 2 * nf != n:
            raise ValueError(f"halves-f1 gives nf = n/2 = {n / 2}, not {nf}")
        return build_halves_f1(n), n // 2
    if spec.method == "halves-f":
        f = spec.f
        if f is None:
            if nf is None:
                raise ValueError("halves-f needs f or nf")
            if nf < 1:
                raise ValueError(f"nf must be positive, got {nf}")
            f = Fraction(n, 2 * nf)
        g = build_halves_f(n, f)
        got = int(Fraction(n) / (2 * as_fraction(f)))
        if nf is not None and nf != got:
            raise ValueError(f"f = {f} gives nf = {got}, not {nf}")
        return g, got
    if spec.method == "msets":
        if spec.m is None:
            raise ValueError("msets needs m")
        g = build_msets(n, spec.m)
        got = n // (2 * spec.m)
        if nf is not None and nf != got:
            raise ValueError(f"msets gives nf = n/(2m) = {got}, not {nf}")
        return g, got
    raise ValueError(f"unknown method {spec.method!r}; choose from {', '.join(METHODS)}")
