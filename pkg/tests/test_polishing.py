import itertools
import json

import numpy as np
import pytest

from micropolish.graph import Graph
from micropolish.instances import gen_planted, gen_theorem3_graph
from micropolish.polishing import (CONVERGED, CYCLE_DETECTED, CAP_REACHED, is_polished, polish, polish_step,
                                   verify_property1_instance)
from micropolish.graph import density
from micropolish.similarity import Jaccard, KCommon

from conftest import random_graph


def test_completes_near_clique(k4_minus_e):
    assert polish_step(k4_minus_e, KCommon(2)) == Graph.complete(4)
    assert polish_step(k4_minus_e, KCommon(3)) == k4_minus_e


def test_complete_graph_is_fixpoint():
    g = Graph.complete(6)
    out, rep = polish(g, KCommon(6))
    assert out == g and rep.status == CONVERGED and rep.iterations == 1
    assert polish_step(g, KCommon(7)).m == 0


def test_theorem3_swaps():
    g, roles = gen_theorem3_graph(5)
    h = polish_step(g, KCommon(5))
    a = roles["a"]
    assert not any(h.has_edge(a, b) for b in roles["B"])
    assert all(h.has_edge(a, c) for c in roles["C"])
    assert polish_step(h, KCommon(5)) == g


def test_report_json():
    g, _ = gen_theorem3_graph(5)
    _, rep = polish(g, KCommon(5), tau=10)
    d = json.loads(rep.to_json())
    assert d["status"] == CYCLE_DETECTED and d["period"] == 2
    assert d["iterations"] == 2 and len(d["edge_counts"]) == 3
    _, rep = polish(g, KCommon(5), tau=1)
    assert rep.status == CAP_REACHED and "period" not in rep.to_dict()


def test_tau_validation(k3):
    with pytest.raises(ValueError):
        polish(k3, KCommon(2), tau=0)


@pytest.mark.parametrize("seed", range(4))
def test_converged_iff_polished(seed):
    g = random_graph(40, 0.3, seed)
    for m in (KCommon(3), Jaccard(0.3)):
        out, rep = polish(g, m)
        assert (rep.status == CONVERGED) == is_polished(out, m)


@pytest.mark.parametrize("seed", range(3))
def test_permutation_invariance(seed):
    g = gen_planted(300, 8, 10, 1, 0.7, seed).graph
    perm = np.random.default_rng(seed).permutation(g.n)
    m = Jaccard(0.2)
    assert polish_step(g.relabel(perm), m) == polish_step(g, m).relabel(perm)


def _dense_instance(size, k, drop, seed):
    """Clique on ``size`` vertices minus a random set of edges, plus a noisy rest."""
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(size), 2))
    edges = [e for e in pairs if rng.random() >= drop]
    extra = random_graph(size + 30, 0.05, seed).edges().tolist()
    edges += [(u, v) for u, v in extra if u >= size and v >= size]
    return Graph.from_edges(size + 30, edges)


def test_property1_example():
    # 12 vertices, k=6: everyone needs >= 9 inside neighbours
    g = _dense_instance(12, 6, 0.0, 0)
    g = Graph.from_edges(g.n, [e for e in g.edges().tolist() if e != [0, 1]])
    assert verify_property1_instance(g, range(12), 6)


def test_property1_rejects_weak_hypothesis():
    g = Graph.from_edges(12, [(i, i + 1) for i in range(11)])
    with pytest.raises(ValueError):
        verify_property1_instance(g, range(12), 6)


def _pseudo_clique(seed, gamma=4, k=6, s=3, delta=8 / 9):
    """gamma*k vertices at density >= delta, min inside degree >= (gamma+1)k/s, inside random noise.

    A few vertices are thinned down towards the degree floor so the
    low-degree part of the argument is exercised, not just scattered gaps.
    """
    rng = np.random.default_rng(seed)
    size = gamma * k
    floor = -(-(gamma + 1) * k // s)
    budget = int((1 - delta) * size * (size - 1) / 2)
    adj = [set(range(size)) - {v} for v in range(size)]
    removed = 0

    def drop(u, v):
        nonlocal removed
        if v in adj[u] and len(adj[u]) > floor and len(adj[v]) > floor and removed < budget:
            adj[u].discard(v)
            adj[v].discard(u)
            removed += 1

    for w in rng.choice(size, size=int(rng.integers(0, 3)), replace=False).tolist():
        for v in rng.permutation(size).tolist()[: int(rng.integers(4, 14))]:
            drop(w, v)
    pairs = list(itertools.combinations(range(size), 2))
    for i in rng.permutation(len(pairs)).tolist():
        drop(*pairs[i])
    n = size + 40
    edges = [(u, v) for u in range(size) for v in adj[u] if u < v]
    noise = random_graph(n, 0.04, seed + 1000).edges().tolist()
    edges += [(u, v) for u, v in noise if v >= size]
    return Graph.from_edges(n, edges), list(range(size)), k, floor


@pytest.mark.parametrize("seed", range(12))
def test_pseudo_clique_densifies(seed):
    g, members, k, floor = _pseudo_clique(seed)
    inside = [len(set(g.neighbors(v).tolist()) & set(members)) for v in members]
    assert density(g, members) >= 8 / 9 and min(inside) >= floor
    assert density(g, members) < 1
    assert density(polish_step(g, KCommon(k)), members) > density(g, members)


def test_complete_graph_jaccard_fixpoint():
    g = Graph.complete(7)
    for theta in (0.05, 0.5, 1.0):
        assert polish_step(g, Jaccard(theta)) == g
        assert is_polished(g, Jaccard(theta))
    assert not is_polished(Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), KCommon(2))


def test_property1_clique_and_dense_examples():
    g = Graph.complete(10)
    assert verify_property1_instance(g, range(10), 5)
    # 0.9-dense set of 18 = 3k vertices, every inside degree >= 2k = 12
    rng = np.random.default_rng(3)
    pairs = list(itertools.combinations(range(18), 2))
    deg = [17] * 18
    keep = []
    for u, v in pairs:
        if rng.random() < 0.1 and deg[u] > 12 and deg[v] > 12:
            deg[u] -= 1
            deg[v] -= 1
        else:
            keep.append((u, v))
    g = Graph.from_edges(18, keep)
    assert density(g, range(18)) >= 0.88 and min(deg) >= 12
    assert verify_property1_instance(g, range(18), 6)


def test_property1_tight_bound():
    # gamma = 2, k = 4: 8 vertices, remove a perfect matching -> inside degree exactly 6
    edges = [(u, v) for u, v in itertools.combinations(range(8), 2) if u // 2 != v // 2]
    g = Graph.from_edges(8, edges)
    assert g.degree().min() == 6
    assert verify_property1_instance(g, range(8), 4)
