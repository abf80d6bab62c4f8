import itertools

import numpy as np
import pytest

from micropolish.graph import Graph


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_arrays(n, iu[keep], ju[keep])


def closed_sets(g):
    return [set(g.neighbors(v).tolist()) | {v} for v in range(g.n)]


def brute_intersections(g):
    """All pairs u < v with non-empty closed-neighbourhood intersection."""
    nb = closed_sets(g)
    out = {}
    for u, v in itertools.combinations(range(g.n), 2):
        c = len(nb[u] & nb[v])
        if c:
            out[u, v] = c
    return out


@pytest.fixture
def k3():
    return Graph.complete(3)


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4_minus_e():
    return Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


# one line per acceptance criterion, echoed again at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
