from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import to_nx
from robustnet.graph import Graph
from robustnet.static import (
    StaticSpec,
    build_circulant,
    build_cycle,
    build_halves_f,
    build_halves_f1,
    build_msets,
    build_static,
    circulant_edges,
    fixture_matrix,
    optimal_links,
)
from robustnet.verify import half_expansion_check, is_robust, robust_brute_force, vertex_connectivity


def test_cycle():
    g, ring = build_cycle(8)
    assert g.links == 8 and set(g.degrees()) == {2}
    assert ring.order == tuple(range(8))
    assert build_cycle(3)[0] == Graph.complete(3)
    for n in range(3, 12):
        assert vertex_connectivity(build_cycle(n)[0]) == 2
    with pytest.raises(ValueError):
        build_cycle(2)


def test_circulant_examples():
    g = build_circulant(8, 3)
    assert set(g.degrees()) == {4} and g.links == 16
    assert robust_brute_force(g, 3).robust

    g = build_circulant(8, 4)
    assert set(g.degrees()) == {5} and g.links == 20
    assert all(g.has_edge(i, i + 4) for i in range(4))

    g = build_circulant(7, 4)
    assert sorted(g.degrees()) == [5] * 6 + [6]
    rep = robust_brute_force(g, 4)
    assert rep.robust and rep.checked_subsets == 35

    assert build_circulant(6, 1) == build_cycle(6)[0]


@pytest.mark.parametrize("n,nf", [(5, 0), (5, 4), (4, 3)])
def test_circulant_rejects(n, nf):
    with pytest.raises(ValueError):
        build_circulant(n, nf)


def test_circulant_odd_n_has_one_heavy_node():
    for n in range(5, 16, 2):
        for nf in range(2, n - 1, 2):  # odd nf + 1
            g = build_circulant(n, nf)
            heavy = [u for u, d in enumerate(g.degrees()) if d == nf + 2]
            assert heavy == [0]
            assert g.links == optimal_links(n, nf)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 14).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 2))))
def test_circulant_kappa_against_networkx(case):
    n, nf = case
    g = build_circulant(n, nf)
    assert nx.node_connectivity(to_nx(g)) >= nf + 1
    assert is_robust(g, nf).robust
    if n % 2 == 0:
        assert set(g.degrees()) == {nf + 1}
        assert g.links == optimal_links(n, nf)


def test_halves_f1_examples():
    g = build_halves_f1(8)
    assert g.links == 20 and set(g.degrees()) == {5}
    assert robust_brute_force(g, 4).checked_subsets == 70
    assert robust_brute_force(g, 4).robust

    g = build_halves_f1(6)
    assert g.links == 12 and robust_brute_force(g, 3).robust

    g = build_halves_f1(10)
    assert g.links == 30
    assert g.links == optimal_links(10, 5)
    # dropping any single link leaves a node of degree n/2
    for u, v in g.edges():
        h = Graph.from_edges(10, [e for e in g.edges() if e != (u, v)])
        assert not is_robust(h, 5).robust


@pytest.mark.parametrize("n", [6, 8, 10, 12, 14])
def test_halves_f1_expansion_and_robustness(n):
    g = build_halves_f1(n)
    assert half_expansion_check(g, range(n // 2), range(n // 2, n), n // 2)
    assert is_robust(g, n // 2).robust


@pytest.mark.parametrize("n", [4, 7])
def test_halves_f1_rejects(n):
    with pytest.raises(ValueError):
        build_halves_f1(n)


@pytest.mark.parametrize(
    "n,f,nf,links",
    [(12, 2, 3, 24), (10, 2.5, 2, 15), (12, Fraction(3, 2), 4, 30), (10, Fraction(5, 3), 3, 20), (12, 3, 2, 18)],
)
def test_halves_f(n, f, nf, links):
    g = build_halves_f(n, f)
    assert g.links == links
    assert set(g.degrees()) == {nf + 1}
    assert robust_brute_force(g, nf).robust


@pytest.mark.parametrize("n,f", [(12, 1), (12, 5), (11, 2), (12, 6), (12, "12/5")])
def test_halves_f_rejects(n, f):
    with pytest.raises(ValueError):
        build_halves_f(n, f)


def test_msets_examples():
    g = build_msets(12, 2)
    assert g.links == 24 and set(g.degrees()) == {4}
    assert robust_brute_force(g, 3).robust
    assert sum(1 for a in range(0, 12, 3) for u in range(a, a + 3) for v in range(u + 1, a + 3) if g.has_edge(u, v)) == 12

    g = build_msets(16, 2)
    assert g.links == 40 and vertex_connectivity(g) == 5

    g = build_msets(8, 2)
    assert set(g.degrees()) == {3}
    rep = robust_brute_force(g, 2)
    assert rep.robust and rep.checked_subsets == 28


@pytest.mark.parametrize("n,m", [(12, 1), (10, 2), (8, 4)])
def test_msets_rejects(n, m):
    with pytest.raises(ValueError):
        build_msets(n, m)


def test_optimal_links():
    assert optimal_links(8, 4) == 20
    assert optimal_links(12, 2) == 18
    assert optimal_links(8, 3) == 16
    assert optimal_links(7, 4) == 18


@pytest.mark.parametrize("n,links", [(8, 20), (10, 30), (12, 42)])
def test_fixtures(n, links):
    g = fixture_matrix(n)
    assert g.links == links
    assert set(g.degrees()) == {n // 2 + 1}
    rep = robust_brute_force(g, n // 2)
    assert rep.robust


def test_fixture_rejects_unknown():
    with pytest.raises(ValueError):
        fixture_matrix(9)


def test_build_static_dispatch():
    assert build_static(StaticSpec(n=8, nf=3))[1] == 3
    assert build_static(StaticSpec(n=8, method="halves-f1"))[1] == 4
    assert build_static(StaticSpec(n=12, nf=3, method="halves-f"))[0].links == 24
    assert build_static(StaticSpec(n=12, method="msets", m=2))[1] == 3
    with pytest.raises(ValueError):
        build_static(StaticSpec(n=12, nf=4, method="halves-f", f=Fraction(2)))
    with pytest.raises(ValueError):
        build_static(StaticSpec(n=12, method="torus"))


def test_builders_are_deterministic():
    assert circulant_edges(11, 4) == circulant_edges(11, 4)
    assert build_halves_f(12, 2) == build_halves_f(12, 2)
    assert build_msets(16, 2) == build_msets(16, 2)
