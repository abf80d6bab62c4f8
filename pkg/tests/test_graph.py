import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from micropolish.graph import (Graph, GraphFormatError, closed_neighborhood, density, graph_equal,
                               load_edge_list, save_edge_list)

from conftest import random_graph


def test_closed_neighborhood(k3, path3):
    assert closed_neighborhood(k3, 0).tolist() == [0, 1, 2]
    assert closed_neighborhood(path3, 0).tolist() == [0, 1]
    assert closed_neighborhood(path3, 1).tolist() == [0, 1, 2]
    assert closed_neighborhood(Graph.empty(4), 3).tolist() == [3]


def test_closed_neighborhood_out_of_range(k3):
    with pytest.raises(IndexError):
        closed_neighborhood(k3, 3)


def test_density_examples(k4_minus_e):
    assert density(Graph.complete(4), [0, 1, 2, 3]) == 1.0
    assert density(k4_minus_e, [0, 1, 2, 3]) == pytest.approx(5 / 6)
    with pytest.raises(ValueError):
        density(k4_minus_e, [1])


@pytest.mark.parametrize("seed", range(5))
def test_density_matches_pair_count(seed):
    g = random_graph(10, 0.4, seed)
    rng = np.random.default_rng(100 + seed)
    u = sorted(rng.choice(10, size=5, replace=False).tolist())
    edges = {tuple(e) for e in g.edges().tolist()}
    expect = sum((a, b) in edges for a, b in itertools.combinations(u, 2)) / 10
    assert density(g, u) == expect


def test_equality(k3, path3, k4_minus_e):
    assert graph_equal(k3, k3)
    assert not graph_equal(k3, path3)
    shuffled = [(3, 1), (2, 3), (2, 0), (1, 2), (3, 0), (0, 2)]
    assert graph_equal(k4_minus_e, Graph.from_edges(4, shuffled))
    assert Graph.empty(3) != Graph.empty(4)


def test_invariants_after_construction():
    g = random_graph(40, 0.2, 7)
    deg = np.diff(g.indptr)
    assert deg.sum() == 2 * g.m
    for v in range(g.n):
        nb = g.neighbors(v)
        assert np.all(np.diff(nb) > 0)
        assert v not in nb
        for u in nb:
            assert v in g.neighbors(int(u))


def test_arrays_are_read_only(k3):
    with pytest.raises(ValueError):
        k3.indices[0] = 2


def test_rejects_bad_csr():
    with pytest.raises(ValueError):
        Graph(2, np.array([0, 1, 1]), np.array([1]))  # asymmetric
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])


def test_load_examples():
    assert load_edge_list("0 1\n1 2") == Graph.from_edges(3, [(0, 1), (1, 2)])
    g = load_edge_list("0 1\n1 0\n0 1")
    assert g.n == 2 and g.m == 1
    assert load_edge_list("# comment\nn 5\n0 1  # trailing\n").n == 5


@pytest.mark.parametrize("text,line", [("0 0", 1), ("0 1\n1 x", 2), ("0 1 2", 1), ("0 -1", 1), ("n 2\n0 5", None)])
def test_load_errors(text, line):
    with pytest.raises(GraphFormatError) as exc:
        load_edge_list(text)
    assert exc.value.line == line


def test_save_is_canonical():
    a = Graph.from_edges(4, [(3, 2), (0, 1)])
    assert save_edge_list(a) == "n 4\n0 1\n2 3\n"


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=80))))
def test_round_trip(data):
    n, pairs = data
    g = Graph.from_edges(n, [(u, v) for u, v in pairs if u != v])
    assert load_edge_list(save_edge_list(g)) == g


def test_relabel_is_permutation():
    g = random_graph(12, 0.3, 1)
    perm = np.random.default_rng(0).permutation(12)
    h = g.relabel(perm)
    assert h.m == g.m
    assert all(h.has_edge(int(perm[u]), int(perm[v])) for u, v in g.edges().tolist())
