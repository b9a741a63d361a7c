import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import to_nx
from robustnet.dynamic import (
    GrowthTrace,
    RobustnessPolicy,
    TraceValidationError,
    circulant_subgraph_holds,
    grow_to,
    new_builder,
    reconcile_variable_nf,
    savings_ratio,
    step,
    step_fixed_nf,
    step_half,
)
from robustnet.graph import Graph
from robustnet.static import build_circulant
from robustnet.verify import is_robust, robust_brute_force, vertex_connectivity


def grown(policy, target, **kw):
    state = new_builder(policy, **kw)
    grow_to(state, target)
    return state


# --- policies ---------------------------------------------------------------

def test_policy_validation():
    with pytest.raises(ValueError):
        RobustnessPolicy("fixed-nf")
    with pytest.raises(ValueError):
        RobustnessPolicy("fraction-2mf", m=1)
    with pytest.raises(ValueError):
        RobustnessPolicy("half-plus-n", n=-1)
    with pytest.raises(ValueError):
        RobustnessPolicy("ring-of-rings")
    with pytest.raises(ValueError):
        RobustnessPolicy("fraction-2f", f=1).factor(0)
    assert RobustnessPolicy("fraction-2mf", m=2, f=1).factor(3) == 1


def test_policy_demands_and_bounds():
    p = RobustnessPolicy("fraction-2f", f=[3, 2])
    assert p.demand(12, 0) == 2 and p.demand(12, 1) == 3 and p.demand(12, 9) == 3
    assert RobustnessPolicy("fraction-2mf", m=2).demand(16, 1) == 4
    assert RobustnessPolicy("half").bound(10) == 33
    hp = RobustnessPolicy("half-plus-n", n=1)
    assert hp.demand(4, 1) == 2 and hp.demand(6, 2) == 4
    assert hp.bound(12) == 66
    assert RobustnessPolicy("fixed-nf", nf=2).bound(12) == 54


# --- seeds ------------------------------------------------------------------

def test_seed_fixed_nf():
    state = new_builder(RobustnessPolicy("fixed-nf", nf=3), seed_n=6)
    assert state.graph == build_circulant(6, 3)
    assert set(state.graph.degrees()) == {4}
    rep = robust_brute_force(state.graph, 3)
    assert rep.robust and rep.checked_subsets == 20
    assert state.trace[0].step == 0 and state.trace[0].links == 12


def test_seed_half():
    state = new_builder(RobustnessPolicy("half"))
    assert state.graph.edges() == [(0, 1)]
    assert state.trace[0].nf == 1
    assert is_robust(state.graph, 1).robust


def test_seed_half_plus_n():
    state = new_builder(RobustnessPolicy("half-plus-n", n=1), seed_n=2)
    assert state.graph == Graph.complete(2)
    with pytest.raises(ValueError):
        new_builder(RobustnessPolicy("half"), seed_n=4)


def test_seed_rejections():
    with pytest.raises(ValueError):
        new_builder(RobustnessPolicy("fixed-nf", nf=3), seed_n=4)
    with pytest.raises(ValueError):
        new_builder(RobustnessPolicy("fraction-2mf", m=2), seed_n=6)
    with pytest.raises(ValueError):
        new_builder(RobustnessPolicy("half"), insertion="middle")


# --- fixed nf ---------------------------------------------------------------

def test_fixed_nf_3_to_12():
    state = new_builder(RobustnessPolicy("fixed-nf", nf=3), seed_n=6)
    while state.n < 12:
        ev = step_fixed_nf(state)
        assert ev.added_nodes == [state.n - 1]
        assert robust_brute_force(state.graph, 3).robust
        assert circulant_subgraph_holds(state)
    assert state.graph.links <= 48


def test_fixed_nf_2_to_12():
    state = grown(RobustnessPolicy("fixed-nf", nf=2), 12, seed_n=6)
    assert state.graph.links <= 54
    assert all(ev.links <= ev.bound for ev in state.trace)


def test_grow_to_fixed_nf_events():
    state = new_builder(RobustnessPolicy("fixed-nf", nf=3), seed_n=6)
    trace = grow_to(state, 14)
    assert len(trace) == 8
    for ev, g in GrowthTrace(list(state.trace)).replay_iter():
        assert robust_brute_force(g, 3).robust


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_random_insertion_keeps_guarantees(nf, seed):
    state = new_builder(RobustnessPolicy("fixed-nf", nf=nf), insertion="random", seed=seed)
    for _ in range(9):
        ev = step(state)
        assert ev.links <= ev.bound
        assert vertex_connectivity(state.graph) >= nf + 1
        assert circulant_subgraph_holds(state)


# --- variable nf ------------------------------------------------------------

def test_reconcile_counts():
    state = new_builder(RobustnessPolicy("variable-nf", nf_schedule=1), seed_n=8)
    assert len(reconcile_variable_nf(state, 3).added_edges) == 8
    state = new_builder(RobustnessPolicy("variable-nf", nf_schedule=1), seed_n=8)
    ev = reconcile_variable_nf(state, 4)
    assert len(ev.added_edges) == 12 and ev.added_nodes == []
    assert len(reconcile_variable_nf(state, 4).added_edges) == 0
    with pytest.raises(ValueError):
        reconcile_variable_nf(state, 3)


def test_reconcile_idempotent_on_wired_ring():
    state = new_builder(RobustnessPolicy("variable-nf", nf_schedule=3), seed_n=9)
    assert reconcile_variable_nf(state, 3).added_edges == []


def test_variable_nf_schedule():
    schedule = [1, 1, 2, 2, 3, 3, 3, 5, 5, 6]
    state = grown(RobustnessPolicy("variable-nf", nf_schedule=schedule), 14, seed_n=5)
    for ev, g in state.trace.replay_iter():
        assert vertex_connectivity(g) >= ev.nf + 1


# --- ring policies ----------------------------------------------------------

def test_two_rings_8_to_16():
    state = new_builder(RobustnessPolicy("fraction-2f", f=2), seed_n=8)
    while state.n < 16:
        ev = step(state)
        assert len(ev.added_nodes) == 2
        assert vertex_connectivity(state.graph) >= state.n // 4 + 1
    assert state.graph.links <= 64


def test_2m_rings_single_event():
    state = new_builder(RobustnessPolicy("fraction-2mf", m=2), seed_n=8)
    trace = grow_to(state, 12)
    assert len(trace) == 1 and trace[0].added_nodes == [8, 9, 10, 11]
    with pytest.raises(ValueError):
        grow_to(state, 15)
    with pytest.raises(ValueError):
        grow_to(state, 4)


def test_2m_rings_robust():
    state = grown(RobustnessPolicy("fraction-2mf", m=2), 24, seed_n=8)
    for ev, g in state.trace.replay_iter():
        assert vertex_connectivity(g) >= ev.nf + 1


# --- half policies ----------------------------------------------------------

def test_half_counts():
    state = new_builder(RobustnessPolicy("half"))
    step_half(state)
    assert state.graph == Graph.complete(4)
    assert robust_brute_force(state.graph, 2).robust
    trace = grow_to(state, 20)
    assert len(trace) == 8
    for ev in state.trace:
        assert ev.links == ev.n * ev.n // 4 + ev.n - 2
    g10 = GrowthTrace(state.trace.events[:5]).replay()
    assert g10.links == 33


def test_half_at_12():
    g = grown(RobustnessPolicy("half"), 12).graph
    assert vertex_connectivity(g) == 7
    assert robust_brute_force(g, 6).robust


def test_half_plus_n_at_12():
    state = grown(RobustnessPolicy("half-plus-n", n=1), 12)
    assert state.graph.links <= 66
    assert state.nf == 7
    assert vertex_connectivity(state.graph) >= 8


def test_half_plus_zero_matches_half():
    a = grown(RobustnessPolicy("half-plus-n", n=0), 16).graph
    b = grown(RobustnessPolicy("half"), 16).graph
    assert a == b


def test_half_plus_n_start_up_is_complete():
    state = new_builder(RobustnessPolicy("half-plus-n", n=2))
    step(state)
    assert state.graph == Graph.complete(4)
    step(state)
    assert state.graph == Graph.complete(6)


# --- traces and savings -----------------------------------------------------

@pytest.mark.parametrize(
    "policy,target",
    [
        (RobustnessPolicy("fixed-nf", nf=2), 15),
        (RobustnessPolicy("fraction-2f", f=2), 20),
        (RobustnessPolicy("fraction-2mf", m=2), 20),
        (RobustnessPolicy("half"), 20),
        (RobustnessPolicy("half-plus-n", n=2), 20),
    ],
)
def test_trace_is_monotone_and_replays(policy, target):
    state = grown(policy, target)
    prev = set()
    for ev, g in state.trace.replay_iter():
        now = g.edge_set()
        assert prev <= now
        prev = set(now)
    assert state.trace.replay() == state.graph
    assert sum(len(ev.added_edges) for ev in state.trace) == state.graph.links


def test_trace_replay_rejects_tampering():
    state = grown(RobustnessPolicy("half"), 6)
    events = list(state.trace)
    events[1].added_edges = events[1].added_edges + [events[0].added_edges[0]]
    with pytest.raises(TraceValidationError) as err:
        GrowthTrace(events).replay()
    assert err.value.index == 1


def test_savings_ratio():
    assert savings_ratio(Graph.complete(7)) == 0
    assert abs(savings_ratio(grown(RobustnessPolicy("half"), 100).graph) - (1 - 2598 / 4950)) < 1e-12
    assert savings_ratio(grown(RobustnessPolicy("fixed-nf", nf=3), 100).graph) >= 0.9
    with pytest.raises(ValueError):
        savings_ratio(Graph(1))


def test_growth_kappa_against_networkx():
    state = grown(RobustnessPolicy("fraction-2f", f=[3, 3, 2]), 18)
    for ev, g in state.trace.replay_iter():
        assert nx.node_connectivity(to_nx(g)) >= ev.nf + 1
