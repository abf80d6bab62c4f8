"""Benchmark and adversarial graph generators."""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .graph import INDEX_DTYPE, Graph


@dataclass(frozen=True)
class PlantedParams:
    n: int
    h: int
    clique_size: int
    b: int
    p: float
    seed: int
    rewire: str = "edge"
    targets: str = "planted"


@dataclass
class PlantedInstance:
    graph: Graph
    truth: list[list[int]]
    params: PlantedParams

    def manifest(self) -> dict:
        return {"generator": "planted", **asdict(self.params), "n_edges": self.graph.m}


def _plant(rng: np.random.Generator, n: int, h: int, size: int, b: int) -> list[list[int]]:
    load = np.zeros(n, dtype=np.int64)
    truth = []
    for _ in range(h):
        # drawing without replacement from the unsaturated vertices is the same
        # distribution as redrawing whenever a saturated vertex comes up
        eligible = np.flatnonzero(load < b)
        if eligible.size < size:
            raise ValueError(f"ran out of vertices with fewer than b={b} memberships")
        members = np.sort(rng.choice(eligible, size=size, replace=False))
        load[members] += 1
        truth.append(members.tolist())
    return truth


REWIRE_MODES = ("edge", "orientation")
TARGET_POOLS = ("planted", "all")


def gen_planted(n: int, h: int, clique_size: int = 30, b: int = 1, p: float = 1.0,
                seed: int = 0, rewire: str = "edge", targets: str = "planted") -> PlantedInstance:
    """``h`` random cliques, each vertex in at most ``b`` of them, then rewired.

    Rewiring visits every vertex ``v`` in id order.  With probability
    ``1 - p`` the far endpoint ``u`` of an edge ``(v, u)`` is replaced by a
    uniform ``u' != v`` not already adjacent to ``v`` (ten redraws, then the
    edge is left alone), so ``v``'s degree is unchanged by its own visit.

    ``rewire="edge"`` gives every planted edge one chance, taken when its
    first endpoint is visited; a planted edge survives with probability
    ``p``.  ``rewire="orientation"`` re-examines every edge present at each
    endpoint's visit, so planted edges survive with probability near
    ``p**2``.

    ``targets="planted"`` draws ``u'`` from vertices belonging to at least
    one planted clique; ``targets="all"`` draws from every vertex, which
    leaves the never-planted vertices with a few stray edges each.
    """
    if rewire not in REWIRE_MODES:
        raise ValueError(f"rewire must be one of {REWIRE_MODES}")
    if targets not in TARGET_POOLS:
        raise ValueError(f"targets must be one of {TARGET_POOLS}")
    if n < 1 or h < 0 or clique_size < 1 or b < 1:
        raise ValueError("n, clique_size and b must be positive, h non-negative")
    if clique_size > n:
        raise ValueError("clique_size exceeds n")
    if h * clique_size > n * b:
        raise ValueError(f"h*clique_size={h * clique_size} exceeds n*b={n * b}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    truth = _plant(rng, n, h, clique_size, b)
    adj: list[set[int]] = [set() for _ in range(n)]
    for members in truth:
        for u, v in itertools.combinations(members, 2):
            adj[u].add(v)
            adj[v].add(u)
    if p < 1.0:
        pool = np.flatnonzero([len(a) > 0 for a in adj]) if targets == "planted" else np.arange(n)
        _rewire(rng, adj, p, pool, once=rewire == "edge")
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    graph = Graph.from_edges(n, np.asarray(edges, dtype=INDEX_DTYPE).reshape(-1, 2))
    return PlantedInstance(graph, truth, PlantedParams(n, h, clique_size, b, float(p), int(seed), rewire, targets))


def _rewire(rng: np.random.Generator, adj: list[set[int]], p: float, pool: np.ndarray, once: bool,
            retries: int = 10) -> None:
    n = len(adj)
    pool = pool.tolist()
    if len(pool) < 2:
        return
    q = 1.0 - p
    planted = [frozenset(a) for a in adj] if once else None
    for v in range(n):
        if once:
            # planted edges whose other endpoint has not been visited yet
            nbrs = [u for u in sorted(planted[v]) if u > v and u in adj[v]]
        else:
            nbrs = sorted(adj[v])
        if not nbrs:
            continue
        flips = rng.random(len(nbrs)) < q
        for u, flip in zip(nbrs, flips.tolist()):
            if not flip:
                continue
            for _ in range(retries):
                w = pool[int(rng.integers(len(pool)))]
                if w != v and w not in adj[v]:
                    adj[v].discard(u)
                    adj[u].discard(v)
                    adj[v].add(w)
                    adj[w].add(v)
                    break


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def new(self, count: int = 1) -> list[int]:
        ids = list(range(self.n, self.n + count))
        self.n += count
        return ids

    def clique(self, members) -> None:
        self.edges.extend(itertools.combinations(members, 2))

    def biclique(self, left, right) -> None:
        self.edges.extend(itertools.product(left, right))

    def build(self) -> Graph:
        return Graph.from_edges(self.n, np.asarray(self.edges, dtype=INDEX_DTYPE).reshape(-1, 2))


def gen_theorem3_graph(k: int) -> tuple[Graph, dict]:
    """Graph on which ``k``-common-neighbour polishing swaps a-B and a-C forever.

    Returns the graph and the roles ``{"a", "B", "C"}``.
    """
    if k < 5:
        raise ValueError("construction needs k >= 5")
    bld = _Builder()
    (a,) = bld.new()
    B = bld.new(k - 2)
    C = bld.new(k - 2)
    bld.biclique([a], B)
    bld.biclique(B, C)
    for u in B:
        for v in C:
            bld.clique([u, v] + bld.new(k))
    for v in B + C:
        for _ in range(2):
            (w,) = bld.new()
            bld.clique([a, w] + bld.new(k))
            bld.clique([w, v] + bld.new(k))
    return bld.build(), {"a": a, "B": B, "C": C}


def gen_theorem5_graph(n: int) -> Graph:
    """Polished graph with ``2**(n/2)`` maximal cliques on ``n^2/4 + 3n/2`` vertices.

    Base: ``K_n`` minus the matching ``(2i, 2i+1)``.  Each transversal
    ``U_0`` (odd ids) and ``U_i`` (even ids with pair ``i`` swapped) is
    completed into a clique with ``n/2`` extra vertices.
    """
    if n < 4 or n % 2:
        raise ValueError("n must be even and at least 4")
    half = n // 2
    bld = _Builder()
    base = bld.new(n)
    bld.edges.extend((u, v) for u, v in itertools.combinations(base, 2) if u // 2 != v // 2)
    evens = [2 * i for i in range(half)]
    odds = [2 * i + 1 for i in range(half)]
    groups = [odds] + [[x for x in evens if x != 2 * i] + [2 * i + 1] for i in range(half)]
    for group in groups:
        bld.clique(group + bld.new(half))
    return bld.build()


def gen_theorem6_graph(m1: int, m2: int, n: int) -> tuple[Graph, dict]:
    """``G_{m1,m2,n}``: a; B, C of size n; cliques ``D_ij + {b_i, c_j}``.

    Vertex ids: ``a = 0``, ``b_i = 1..n``, ``c_j = n+1..2n``, then the D blocks.
    """
    if min(m1, m2, n) < 1:
        raise ValueError("m1, m2 and n must be positive")
    bld = _Builder()
    (a,) = bld.new()
    B = bld.new(n)
    C = bld.new(n)
    bld.biclique([a], B)
    bld.biclique(B, C)
    D = {}
    for i in range(n):
        for j in range(n):
            D[i, j] = bld.new(m1 if i == j else m2)
            bld.clique(D[i, j] + [B[i], C[j]])
    return bld.build(), {"a": a, "B": B, "C": C, "D": D}


def theorem6_window(m1: int, m2: int, n: int) -> tuple[float, float]:
    """Closed-form ``(f, g)`` bounds of the oscillation window for ``G_{m1,m2,n}``."""
    s = m1 + (n - 1) * m2
    f_terms = [2 / (2 * n + s + 1), (n + 1) / (2 * s + n + 3), n / (2 * s + n + 2),
               1 / (min(m1, m2) + m2 + 3)]
    g_terms = [n / (s + n + 2), 1.0]
    for m in ({m1, m2} if n > 1 else {m1}):
        g_terms += [(m + 2) / (2 * s - m + 2 * n + 1), (m + 2) / (s + n + 2), (m + 2) / (s + n + 1)]
    return max(f_terms), min(g_terms)


@dataclass(frozen=True)
class ZipfParams:
    n: int
    alpha: float
    delta: float = 1.0
    beta: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0 or self.delta < 0 or self.n < 1:
            raise ValueError("need n >= 1, alpha > 0, delta >= 0")


def zipf_targets(params: ZipfParams) -> np.ndarray:
    i = np.arange(1, params.n + 1, dtype=np.float64)
    t = np.maximum(params.alpha / i ** params.delta, params.beta)
    return np.clip(np.rint(t), 0, params.n - 1).astype(INDEX_DTYPE)


def gen_zipf_graph(params: ZipfParams) -> Graph:
    """Stub-pairing graph with target degree ``max(alpha / (i+1)^delta, beta)``.

    Self-loops and repeated pairs are discarded, so realised degrees can
    fall slightly short of the targets.
    """
    rng = np.random.default_rng(params.seed)
    stubs = np.repeat(np.arange(params.n, dtype=INDEX_DTYPE), zipf_targets(params))
    if stubs.size % 2:
        stubs = stubs[:-1]
    rng.shuffle(stubs)
    u, v = stubs[0::2], stubs[1::2]
    keep = u != v
    return Graph.from_arrays(params.n, u[keep], v[keep])
