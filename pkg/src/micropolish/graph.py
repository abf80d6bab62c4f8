"""Immutable sparse undirected graphs in sorted CSR form."""
from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

import numpy as np

INDEX_DTYPE = np.int64


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=INDEX_DTYPE)
    a.flags.writeable = False
    return a


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is stored as CSR (``indptr``, ``indices``) with every
    neighbour list strictly ascending and each edge present in both
    endpoint lists.  Instances are never mutated after construction;
    polishing builds new graphs.
    """

    __slots__ = ("n", "indptr", "indices", "_digest")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, *, check: bool = True):
        self.n = int(n)
        self.indptr = _frozen(indptr)
        self.indices = _frozen(indices)
        self._digest: bytes | None = None
        if check:
            self._validate()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] | np.ndarray) -> "Graph":
        """Build from an edge collection; duplicates and both orientations merge."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=INDEX_DTYPE)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be pairs")
        return cls.from_arrays(n, arr[:, 0], arr[:, 1])

    @classmethod
    def from_arrays(cls, n: int, u: np.ndarray, v: np.ndarray) -> "Graph":
        n = int(n)
        u = np.asarray(u, dtype=INDEX_DTYPE)
        v = np.asarray(v, dtype=INDEX_DTYPE)
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size:
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
                raise ValueError(f"vertex id out of range for n={n}")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        keys = np.unique(src * max(n, 1) + dst)
        src = keys // max(n, 1)
        dst = keys - src * max(n, 1)
        indptr = np.zeros(n + 1, dtype=INDEX_DTYPE)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst, check=False)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "Graph":
        edges = [(u, v) for u, nbrs in enumerate(adjacency) for v in nbrs]
        return cls.from_edges(len(adjacency), edges)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=INDEX_DTYPE), np.zeros(0, dtype=INDEX_DTYPE), check=False)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        iu, ju = np.triu_indices(n, k=1)
        return cls.from_arrays(n, iu, ju)

    def _validate(self) -> None:
        n, indptr, indices = self.n, self.indptr, self.indices
        if n < 0 or indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
            raise ValueError("inconsistent CSR shape")
        if np.any(np.diff(indptr) < 0):
            raise ValueError("indptr must be non-decreasing")
        if indices.size:
            if indices.min() < 0 or indices.max() >= n:
                raise ValueError("neighbour id out of range")
            rows = np.repeat(np.arange(n, dtype=INDEX_DTYPE), np.diff(indptr))
            if np.any(rows == indices):
                raise ValueError("self-loop in adjacency")
            same_row = rows[1:] == rows[:-1]
            if np.any(same_row & (indices[1:] <= indices[:-1])):
                raise ValueError("adjacency lists must be strictly ascending")
            fwd = rows * n + indices
            back = np.sort(indices * n + rows)
            if not np.array_equal(fwd, back):
                raise ValueError("adjacency is not symmetric")

    # -- queries ------------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def degree(self, v: int | None = None):
        if v is None:
            return np.diff(self.indptr)
        self._check_vertex(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def adjacency(self) -> list[list[int]]:
        return [self.indices[self.indptr[v]:self.indptr[v + 1]].tolist() for v in range(self.n)]

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array with ``u < v``, in u-major order."""
        rows = np.repeat(np.arange(self.n, dtype=INDEX_DTYPE), np.diff(self.indptr))
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def closed_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR of closed neighbourhoods ``N[v]``, each row sorted."""
        n = self.n
        rows = np.repeat(np.arange(n, dtype=INDEX_DTYPE), np.diff(self.indptr))
        keys = np.concatenate([rows * n + self.indices, np.arange(n, dtype=INDEX_DTYPE) * (n + 1)])
        keys.sort()
        indptr = self.indptr + np.arange(n + 1, dtype=INDEX_DTYPE)
        return indptr, keys - (keys // max(n, 1)) * n

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=INDEX_DTYPE)
        if perm.shape != (self.n,) or not np.array_equal(np.sort(perm), np.arange(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        e = self.edges()
        return Graph.from_arrays(self.n, perm[e[:, 0]], perm[e[:, 1]])

    def digest(self) -> bytes:
        """Strong hash of the canonical adjacency."""
        if self._digest is None:
            h = hashlib.blake2b(digest_size=32)
            h.update(np.int64(self.n).tobytes())
            h.update(self.indptr.tobytes())
            h.update(self.indices.tobytes())
            self._digest = h.digest()
        return self._digest

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return graph_equal(self, other)

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def graph_equal(a: Graph, b: Graph) -> bool:
    return (
        a.n == b.n
        and np.array_equal(a.indptr, b.indptr)
        and np.array_equal(a.indices, b.indices)
    )


def closed_neighborhood(g: Graph, v: int) -> np.ndarray:
    nb = g.neighbors(v)
    i = int(np.searchsorted(nb, v))
    return np.concatenate([nb[:i], np.array([v], dtype=INDEX_DTYPE), nb[i:]])


def induced_edge_count(g: Graph, vertices: Sequence[int]) -> int:
    s = np.unique(np.asarray(vertices, dtype=INDEX_DTYPE))
    total = 0
    for v in s:
        total += int(np.isin(g.neighbors(int(v)), s, assume_unique=True).sum())
    return total // 2


def density(g: Graph, vertices: Sequence[int]) -> float:
    """Fraction of vertex pairs in ``vertices`` joined by an edge."""
    s = np.unique(np.asarray(vertices, dtype=INDEX_DTYPE))
    if s.size < 2:
        raise ValueError("density needs at least two vertices")
    if s[0] < 0 or s[-1] >= g.n:
        raise IndexError("vertex id out of range")
    k = s.size
    return induced_edge_count(g, s) / (k * (k - 1) / 2)


# -- edge-list text format ----------------------------------------------------

def load_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines.

    ``#`` starts a comment.  An optional ``n <N>`` line fixes the vertex
    count, otherwise it is ``max id + 1``.
    """
    us: list[int] = []
    vs: list[int] = []
    n_header: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise GraphFormatError(f"bad vertex-count header {raw!r}", lineno)
            if n_header is not None:
                raise GraphFormatError("duplicate vertex-count header", lineno)
            n_header = int(parts[1])
            continue
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise GraphFormatError(f"expected two unsigned integers, got {raw!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphFormatError(f"self-loop on vertex {u}", lineno)
        us.append(u)
        vs.append(v)
    top = max(max(us, default=-1), max(vs, default=-1)) + 1
    if n_header is None:
        n = top
    else:
        if n_header < top:
            raise GraphFormatError(f"header n={n_header} but vertex id {top - 1} present")
        n = n_header
    return Graph.from_arrays(n, np.asarray(us, dtype=INDEX_DTYPE), np.asarray(vs, dtype=INDEX_DTYPE))


def save_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_edge_list(g))
