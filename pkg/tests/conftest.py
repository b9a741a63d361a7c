import random

import networkx as nx
import pytest

from robustnet.graph import Graph

_ACCEPTANCE: list[tuple[str, str, str]] = []


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.nodes())
    h.add_edges_from(g.edges())
    return h


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    g = Graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion tracked in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], "PASS" if rep.passed else "FAIL", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, name in sorted(_ACCEPTANCE, key=lambda r: (int(r[0].rstrip("ab")), r[0])):
        terminalreporter.write_line(f"criterion {label:>3}: {status}  ({name})")
