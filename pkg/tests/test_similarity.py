import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from micropolish.graph import Graph
from micropolish.similarity import (PMI, Jaccard, KCommon, TransactionDatabase, build_similarity_graph_from_db,
                                    evaluate_measure, intersection_work, load_transactions, neighbor_intersections,
                                    pair_frequency_equivalence_check, parse_measure, record_intersections)

from conftest import brute_intersections, closed_sets, random_graph


def test_small_counts(k3, path3):
    assert neighbor_intersections(k3).as_dict() == {(0, 1): 3, (0, 2): 3, (1, 2): 3}
    pc = neighbor_intersections(path3)
    assert pc.as_dict() == {(0, 1): 2, (0, 2): 1, (1, 2): 2}
    assert pc.work == 5
    assert neighbor_intersections(path3, min_count=2).as_dict() == {(0, 1): 2, (1, 2): 2}


def test_empty_graph_has_no_pairs():
    assert len(neighbor_intersections(Graph.empty(5))) == 0


@pytest.mark.parametrize("backend", ["numba", "numpy"])
@pytest.mark.parametrize("seed", range(3))
def test_against_set_oracle(backend, seed):
    g = random_graph(200, 0.1, seed)
    assert neighbor_intersections(g, backend=backend).as_dict() == brute_intersections(g)


def test_output_order_and_threads():
    g = random_graph(300, 0.05, 11)
    ref = neighbor_intersections(g, backend="numpy")
    for backend in ("numba", "numpy"):
        for threads in (1, 3, 8):
            pc = neighbor_intersections(g, backend=backend, threads=threads)
            assert pc.dumps() == ref.dumps()
    keys = list(zip(ref.u.tolist(), ref.v.tolist()))
    assert keys == sorted(keys) and all(u < v for u, v in keys)


def test_work_formula():
    g = random_graph(120, 0.08, 3)
    sizes = [len(s) for s in closed_sets(g)]
    expect = sum(s * (s - 1) // 2 for s in sizes)
    assert intersection_work(g) == expect
    assert neighbor_intersections(g).work == expect


def test_unknown_backend(k3):
    with pytest.raises(ValueError):
        neighbor_intersections(k3, backend="cuda")


def test_measure_examples():
    # a-b in the (1,2,2) oscillation gadget: |N[a]|=3, |N[b]|=7, overlap 2
    assert evaluate_measure(Jaccard(0.25), 2, 3, 7, 10) == (0.25, True)
    assert evaluate_measure(Jaccard(1.0), 4, 4, 4, 10) == (1.0, True)
    val, ok = evaluate_measure(PMI(0.0), 5, 10, 50, 100)
    assert abs(val) < 1e-12 and ok
    assert evaluate_measure(KCommon(3), 3, 5, 5, 10)[1]
    assert not evaluate_measure(KCommon(3), 2, 5, 5, 10)[1]
    assert evaluate_measure(Jaccard(0.1), 0, 5, 5, 10) == (0.0, False)
    with pytest.raises(ValueError):
        evaluate_measure(Jaccard(0.1), 6, 5, 9, 10)


def test_measure_validation():
    for bad in (lambda: KCommon(0), lambda: Jaccard(0.0), lambda: Jaccard(1.5), lambda: parse_measure("cosine", theta=0.2)):
        with pytest.raises(ValueError):
            bad()
    assert parse_measure("jaccard", theta=0.3) == Jaccard(0.3)
    assert parse_measure("kcommon", k=4) == KCommon(4)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20), st.integers(0, 20), st.floats(0.05, 1.0))
def test_jaccard_monotone_in_overlap(a, b, c, theta):
    c = min(c, a, b)
    if c == 0:
        return
    v1, ok1 = evaluate_measure(Jaccard(theta), c, a, b, 50)
    assert 0 < v1 <= 1
    assert math.isclose(v1, c / (a + b - c))
    if c < min(a, b):
        v2, ok2 = evaluate_measure(Jaccard(theta), c + 1, a, b, 50)
        assert v2 > v1 and (ok2 or not ok1)


def test_record_intersections_examples():
    db = TransactionDatabase([[0, 1, 2], [1, 2, 3], [4]])
    assert record_intersections(db).as_dict() == {(0, 1): 2}
    g = build_similarity_graph_from_db(db, Jaccard(0.5))
    assert g.edges().tolist() == [[0, 1]]
    assert build_similarity_graph_from_db(db, Jaccard(0.6)).m == 0


def test_load_transactions_interns_tokens():
    db, vocab = load_transactions("apple pear\npear fig\n\nfig")
    assert vocab == ["apple", "pear", "fig"]
    assert db.records == [[0, 1], [1, 2], [2]]


def test_filter_items():
    db = TransactionDatabase([[0, 1], [0, 2], [0, 3], [1, 2]])
    assert db.filter_items(min_df=2).records == [[0, 1], [0, 2], [0], [1, 2]]
    # item 0 is in 3 of 4 records; ratio 0.75 drops it, non-positive disables
    assert db.filter_items(max_df_ratio=0.75).records == [[1], [2], [3], [1, 2]]
    assert db.filter_items(max_df_ratio=0).records == db.records


@pytest.mark.parametrize("seed", range(5))
def test_pair_frequency_check(seed):
    assert pair_frequency_equivalence_check(random_graph(60, 0.1, seed))
