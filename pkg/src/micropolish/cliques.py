"""Maximal clique enumeration with pivoting and minimum-size pruning."""
from __future__ import annotations

import sys
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

Clustering = list  # list[list[int]], canonical lexicographic order


class CliqueCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"more than {cap} maximal cliques; polish the graph first or raise the cap")


def canonical(clusters: Iterable[Iterable[int]]) -> list[list[int]]:
    """Sorted members, duplicates dropped, lexicographic order."""
    return [list(c) for c in sorted({tuple(sorted(set(c))) for c in clusters})]


def _core_vertices(g: Graph, min_degree: int) -> np.ndarray:
    """Vertices of the ``min_degree``-core (iterative low-degree peeling)."""
    deg = g.degree().copy()
    alive = np.ones(g.n, dtype=bool)
    if min_degree <= 0:
        return alive
    queue = deque(np.flatnonzero(deg < min_degree).tolist())
    alive[list(queue)] = False
    indptr, indices = g.indptr, g.indices
    while queue:
        v = queue.popleft()
        for u in indices[indptr[v]:indptr[v + 1]].tolist():
            if alive[u]:
                deg[u] -= 1
                if deg[u] < min_degree:
                    alive[u] = False
                    queue.append(u)
    return alive


def _components(g: Graph, alive: np.ndarray) -> list[list[int]]:
    seen = ~alive
    comps = []
    indptr, indices = g.indptr, g.indices
    for s in np.flatnonzero(alive).tolist():
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for u in indices[indptr[v]:indptr[v + 1]].tolist():
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Enumerator:
    def __init__(self, adj: list[int], min_size: int, cap: int | None, out: list):
        self.adj = adj
        self.min_size = min_size
        self.cap = cap
        self.out = out

    def run(self, r: list[int], p: int, x: int) -> None:
        adj, min_size = self.adj, self.min_size
        need = min_size - len(r) - 1
        if need > 0:
            # drop candidates that cannot reach min_size together with r
            changed = True
            while changed and p:
                changed = False
                for v in _bits(p):
                    if (p & adj[v]).bit_count() < need:
                        p &= ~(1 << v)
                        changed = True
        if not p:
            if not x and len(r) >= min_size:
                self.out.append(list(r))
                if self.cap is not None and len(self.out) > self.cap:
                    raise CliqueCapExceeded(self.cap)
            return
        if len(r) + p.bit_count() < min_size:
            return
        best, pivot = -1, -1
        for u in _bits(p | x):
            c = (p & adj[u]).bit_count()
            if c > best:
                best, pivot = c, u
        for v in _bits(p & ~adj[pivot]):
            r.append(v)
            self.run(r, p & adj[v], x & adj[v])
            r.pop()
            p &= ~(1 << v)
            x |= 1 << v


def enumerate_maximal_cliques(g: Graph, min_size: int = 1, max_cliques: int | None = None) -> list[list[int]]:
    """All maximal cliques with at least ``min_size`` vertices, canonically ordered.

    Raises ``CliqueCapExceeded`` once more than ``max_cliques`` are found.
    """
    if min_size < 1:
        raise ValueError("min_size must be at least 1")
    alive = _core_vertices(g, min_size - 1)
    found: list[list[int]] = []
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        for comp in _components(g, alive):
            if len(comp) < min_size:
                continue
            local = {v: i for i, v in enumerate(comp)}
            adj = []
            for v in comp:
                mask = 0
                for u in g.neighbors(v).tolist():
                    i = local.get(u)
                    if i is not None:
                        mask |= 1 << i
                adj.append(mask)
            part: list[list[int]] = []
            _Enumerator(adj, min_size, None if max_cliques is None else max_cliques - len(found), part).run(
                [], (1 << len(comp)) - 1, 0)
            found.extend(sorted(comp[i] for i in c) for c in part)
    finally:
        sys.setrecursionlimit(limit)
    found.sort()
    return found


def brute_force_maximal_cliques(g: Graph) -> list[list[int]]:
    """Exhaustive subset check; only for ``n <= 25``."""
    n = g.n
    if n > 25:
        raise ValueError(f"brute force limited to n <= 25, got n={n}")
    if n == 0:
        return []
    adj = np.zeros(n, dtype=np.int64)
    for u, v in g.edges().tolist():
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    total = 1 << n
    is_clique = np.ones(total, dtype=bool)
    chunk = 1 << 20
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        ok = np.ones(masks.size, dtype=bool)
        for v in range(n):
            has_v = (masks >> v) & 1 == 1
            outside = masks & ~(adj[v] | (1 << v))
            ok &= ~has_v | (outside == 0)
        is_clique[lo:lo + masks.size] = ok
    out = []
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        maximal = is_clique[lo:lo + masks.size].copy()
        for v in range(n):
            free = (masks >> v) & 1 == 0
            ext = masks | (1 << v)
            maximal &= ~(free & is_clique[ext])
        for mask in masks[maximal].tolist():
            out.append([v for v in range(n) if mask >> v & 1])
    out.sort()
    return out


def max_clique(g: Graph) -> list[int]:
    """A largest clique, lexicographically smallest among ties."""
    cliques = enumerate_maximal_cliques(g, 1)
    if not cliques:
        return []
    return min(cliques, key=lambda c: (-len(c), c))


def is_clique(g: Graph, members: Sequence[int]) -> bool:
    s = sorted(set(members))
    return all(g.has_edge(s[i], s[j]) for i in range(len(s)) for j in range(i + 1, len(s)))


def format_clusters(clusters: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, c)) + "\n" for c in clusters)


def parse_clusters(text: str) -> list[list[int]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(sorted({int(t) for t in line.split()}))
        except ValueError:
            raise ValueError(f"line {lineno}: cluster ids must be integers") from None
    return out
