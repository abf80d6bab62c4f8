"""Sparse all-pairs set intersection and the similarity measures built on it.

The counting pass walks, for every row ``u``, the columns ``w`` of ``u``
and then the rows ``v > u`` of ``w``, bumping a per-row counter.  Touched
rows are remembered so the counter is reset in time proportional to the
work done, never ``O(n)`` per row.  Total work is
``sum_w C(|col(w)|, 2)``; for a graph's closed neighbourhoods this is
``sum_w |N[w]|(|N[w]|-1)/2``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from ._accel import njit, resolve_backend
from .graph import INDEX_DTYPE, Graph


# -- measures -----------------------------------------------------------------

@dataclass(frozen=True)
class KCommon:
    """Pass when the closed neighbourhoods share at least ``k`` vertices."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def min_count(self) -> int:
        return int(self.k)


@dataclass(frozen=True)
class Jaccard:
    theta: float

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError(f"Jaccard theta must lie in (0, 1], got {self.theta!r}")

    @property
    def min_count(self) -> int:
        return 1


@dataclass(frozen=True)
class PMI:
    """Pointwise mutual information ``ln(|A&B|*U / (|A|*|B|))``."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("PMI theta must be finite")

    @property
    def min_count(self) -> int:
        return 1


SimilarityMeasure = Union[KCommon, Jaccard, PMI]


def parse_measure(kind: str, k: int | None = None, theta: float | None = None) -> SimilarityMeasure:
    kind = kind.lower()
    if kind == "kcommon":
        if k is None:
            raise ValueError("kcommon measure needs k")
        return KCommon(int(k))
    if theta is None:
        raise ValueError(f"{kind} measure needs theta")
    if kind == "jaccard":
        return Jaccard(float(theta))
    if kind == "pmi":
        return PMI(float(theta))
    raise ValueError(f"unknown measure {kind!r}")


def measure_to_dict(m: SimilarityMeasure) -> dict:
    if isinstance(m, KCommon):
        return {"kind": "kcommon", "k": m.k}
    return {"kind": type(m).__name__.lower(), "theta": m.theta}


def measure_values(m: SimilarityMeasure, count, size_u, size_v, universe: int):
    """Vectorised measure evaluation; returns ``(values, passes)`` arrays."""
    count = np.asarray(count, dtype=np.float64)
    su = np.asarray(size_u, dtype=np.float64)
    sv = np.asarray(size_v, dtype=np.float64)
    if isinstance(m, KCommon):
        values = count
        passes = count >= m.k
    elif isinstance(m, Jaccard):
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(count > 0, count / (su + sv - count), 0.0)
        passes = values >= m.theta
    elif isinstance(m, PMI):
        with np.errstate(divide="ignore"):
            values = np.log(count * universe / (su * sv))
        passes = values >= m.theta
    else:
        raise TypeError(f"not a similarity measure: {m!r}")
    return values, passes & (count > 0)


def evaluate_measure(m: SimilarityMeasure, count: int, size_u: int, size_v: int,
                     universe: int) -> tuple[float, bool]:
    if size_u < 1 or size_v < 1:
        raise ValueError("set sizes must be positive")
    if count < 0 or count > min(size_u, size_v):
        raise ValueError(f"intersection {count} exceeds set sizes ({size_u}, {size_v})")
    if count == 0:
        value = 0.0 if not isinstance(m, PMI) else float("-inf")
        return value, False
    values, passes = measure_values(m, [count], [size_u], [size_v], universe)
    return float(values[0]), bool(passes[0])


# -- pair counts ----------------------------------------------------------------

@dataclass
class PairCounts:
    """Pairs ``u < v`` with their intersection size, in ``(u, v)`` order."""

    u: np.ndarray
    v: np.ndarray
    count: np.ndarray
    work: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return int(self.u.size)

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return zip(self.u.tolist(), self.v.tolist(), self.count.tolist())

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(a, b): c for a, b, c in self}

    def dumps(self) -> str:
        return "".join(f"{a} {b} {c}\n" for a, b, c in self)


@njit(nogil=True, cache=True)
def _sort_small(a, n):
    """In-place ascending sort of ``a[:n]``; insertion sort for short runs."""
    if n > 32:
        a[:n].sort()
        return
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


@njit(nogil=True, cache=True)
def _count_rows_numba(row_ptr, row_idx, col_ptr, col_idx, lo, hi, min_count, counter, touched,
                      out_u, out_v, out_c, size):
    """Fill ``out_*`` from ``size`` on with the pairs of rows ``lo..hi``.

    Stops before the first row whose pairs would overflow the buffers and
    returns ``(next_row, size, work)``; the caller grows and resumes.
    """
    cap = out_u.size
    work = 0
    for u in range(lo, hi):
        nt = 0
        row_work = 0
        for a in range(row_ptr[u], row_ptr[u + 1]):
            w = row_idx[a]
            b = col_ptr[w + 1] - 1
            start = col_ptr[w]
            while b >= start:
                v = col_idx[b]
                if v <= u:
                    break
                if counter[v] == 0:
                    touched[nt] = v
                    nt += 1
                counter[v] += 1
                row_work += 1
                b -= 1
        if size + nt > cap:
            for t in range(nt):
                counter[touched[t]] = 0
            return u, size, work
        work += row_work
        _sort_small(touched, nt)
        for t in range(nt):
            v = touched[t]
            c = counter[v]
            counter[v] = 0
            if c >= min_count:
                out_u[size] = u
                out_v[size] = v
                out_c[size] = c
                size += 1
    return hi, size, work


def _count_pairs_numba(row_ptr, row_idx, col_ptr, col_idx, lo, hi, n_rows, min_count):
    counter = np.zeros(n_rows, np.int64)
    touched = np.empty(n_rows, np.int64)
    cap = max(1024, 2 * int(row_ptr[hi] - row_ptr[lo]))
    out = [np.empty(cap, np.int64) for _ in range(3)]
    size = work = 0
    while lo < hi:
        lo, size, done = _count_rows_numba(row_ptr, row_idx, col_ptr, col_idx, lo, hi, min_count, counter,
                                           touched, out[0], out[1], out[2], size)
        work += done
        if lo < hi:
            cap = max(2 * cap, size + n_rows)
            grown = [np.empty(cap, np.int64) for _ in range(3)]
            for new, old in zip(grown, out):
                new[:size] = old[:size]
            out = grown
    return out[0][:size].copy(), out[1][:size].copy(), out[2][:size].copy(), work


def _count_pairs_numpy(row_ptr, row_idx, col_ptr, col_idx, n_rows, min_count, chunk_pairs=1 << 22):
    """Vectorised twin of the counting kernel.

    Enumerates every co-occurring pair inside each column, then reduces
    the pair keys with a sort.  Same output, same ``work`` figure.
    """
    col_sizes = np.diff(col_ptr)
    pos = np.arange(col_idx.size, dtype=INDEX_DTYPE)
    col_of_pos = np.repeat(np.arange(col_sizes.size, dtype=INDEX_DTYPE), col_sizes)
    partners = col_ptr[col_of_pos + 1] - pos - 1
    work = int(partners.sum())
    keys_parts = []
    counts_parts = []
    # split positions so each chunk materialises at most ~chunk_pairs pairs
    cum = np.cumsum(partners)
    bounds = np.searchsorted(cum, np.arange(chunk_pairs, work + chunk_pairs, chunk_pairs), side="right")
    start = 0
    for stop in bounds.tolist() + [pos.size]:
        stop = int(min(stop, pos.size))
        if stop <= start:
            continue
        p = pos[start:stop]
        cnt = partners[start:stop]
        total = int(cnt.sum())
        if total:
            first = np.repeat(p, cnt)
            offs = np.cumsum(cnt) - cnt
            second = first + 1 + (np.arange(total, dtype=INDEX_DTYPE) - np.repeat(offs, cnt))
            a = col_idx[first]
            b = col_idx[second]
            keys = np.minimum(a, b) * n_rows + np.maximum(a, b)
            k, c = np.unique(keys, return_counts=True)
            keys_parts.append(k)
            counts_parts.append(c)
        start = stop
    if not keys_parts:
        empty = np.zeros(0, dtype=INDEX_DTYPE)
        return empty, empty.copy(), empty.copy(), work
    keys = np.concatenate(keys_parts)
    counts = np.concatenate(counts_parts).astype(INDEX_DTYPE)
    if len(keys_parts) > 1:
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        counts = counts[order]
        head = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        counts = np.add.reduceat(counts, head)
        keys = keys[head]
    keep = counts >= min_count
    keys = keys[keep]
    counts = counts[keep]
    u = keys // n_rows
    return u, keys - u * n_rows, counts, work


def _transpose(n_rows: int, n_cols: int, row_ptr: np.ndarray, row_idx: np.ndarray):
    rows = np.repeat(np.arange(n_rows, dtype=INDEX_DTYPE), np.diff(row_ptr))
    order = np.lexsort((rows, row_idx))
    col_ptr = np.zeros(n_cols + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(row_idx, minlength=n_cols), out=col_ptr[1:])
    return col_ptr, rows[order]


def count_pairs(row_ptr, row_idx, col_ptr, col_idx, n_rows: int, min_count: int = 1,
                backend: str | None = None, threads: int = 1) -> PairCounts:
    """Intersection sizes of all row pairs sharing at least ``min_count`` columns.

    ``col_ptr``/``col_idx`` must be the transpose of ``row_ptr``/``row_idx``
    with each column list ascending.
    """
    backend = resolve_backend(backend)
    min_count = max(int(min_count), 1)
    row_ptr = np.ascontiguousarray(row_ptr, dtype=INDEX_DTYPE)
    row_idx = np.ascontiguousarray(row_idx, dtype=INDEX_DTYPE)
    col_ptr = np.ascontiguousarray(col_ptr, dtype=INDEX_DTYPE)
    col_idx = np.ascontiguousarray(col_idx, dtype=INDEX_DTYPE)
    if backend == "numpy" or n_rows == 0:
        u, v, c, work = _count_pairs_numpy(row_ptr, row_idx, col_ptr, col_idx, n_rows, min_count)
        return PairCounts(u, v, c, work)
    threads = max(int(threads), 1)
    if threads == 1:
        u, v, c, work = _count_pairs_numba(row_ptr, row_idx, col_ptr, col_idx, 0, n_rows, n_rows, min_count)
        return PairCounts(u, v, c, int(work))
    # Rows are owned by exactly one chunk, so per-chunk results concatenate
    # in u-major order without a merge.
    n_chunks = min(n_rows, threads * 4)
    edges = np.linspace(0, n_rows, n_chunks + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda ab: _count_pairs_numba(row_ptr, row_idx, col_ptr, col_idx, ab[0], ab[1], n_rows, min_count),
            zip(edges[:-1].tolist(), edges[1:].tolist()),
        ))
    return PairCounts(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
        int(sum(p[3] for p in parts)),
    )


def neighbor_intersections(g: Graph, min_count: int = 1, backend: str | None = None,
                           threads: int = 1) -> PairCounts:
    """``|N[u] & N[v]|`` for every pair ``u < v`` where it is at least ``min_count``."""
    ptr, idx = g.closed_csr()
    return count_pairs(ptr, idx, ptr, idx, g.n, min_count, backend=backend, threads=threads)


def closed_sizes(g: Graph) -> np.ndarray:
    return g.degree() + 1


def intersection_work(g: Graph) -> int:
    """Inner-loop steps the counting pass performs on ``g``."""
    d = closed_sizes(g)
    return int((d * (d - 1) // 2).sum())


# -- transaction databases -----------------------------------------------------------

class TransactionDatabase:
    """Records as sorted unique item-id arrays, stored CSR-style."""

    def __init__(self, records: Sequence[Sequence[int]], item_universe_size: int | None = None,
                 labels: Sequence[str] | None = None):
        clean = [np.unique(np.asarray(r, dtype=INDEX_DTYPE)) for r in records]
        for r in clean:
            if r.size and r[0] < 0:
                raise ValueError("item ids must be non-negative")
        top = max((int(r[-1]) + 1 for r in clean if r.size), default=0)
        if item_universe_size is None:
            item_universe_size = top
        elif item_universe_size < top:
            raise ValueError("item id exceeds item_universe_size")
        self.item_universe_size = int(item_universe_size)
        self.indptr = np.zeros(len(clean) + 1, dtype=INDEX_DTYPE)
        np.cumsum([r.size for r in clean], out=self.indptr[1:])
        self.indices = np.concatenate(clean) if clean else np.zeros(0, dtype=INDEX_DTYPE)
        self.indices = self.indices.astype(INDEX_DTYPE)
        self.labels = list(labels) if labels is not None else None

    def __len__(self) -> int:
        return self.indptr.size - 1

    def record(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def records(self) -> list[list[int]]:
        return [self.record(i).tolist() for i in range(len(self))]

    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def item_frequencies(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.item_universe_size)

    def filter_items(self, min_df: int = 1, max_df_ratio: float | None = None) -> "TransactionDatabase":
        """Drop items seen in fewer than ``min_df`` records or in at least
        ``max_df_ratio`` of all records.  Item ids are kept unchanged."""
        df = self.item_frequencies()
        keep = df >= min_df
        if max_df_ratio is not None and max_df_ratio > 0:
            keep &= df < max_df_ratio * len(self)
        recs = [r[keep[r]] for r in (self.record(i) for i in range(len(self)))]
        return TransactionDatabase(recs, self.item_universe_size, self.labels)


def load_transactions(text: str) -> tuple[TransactionDatabase, list[str]]:
    """One record per line; tokens interned in first-appearance order."""
    vocab: dict[str, int] = {}
    records = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks and not raw.strip():
            continue
        records.append([vocab.setdefault(t, len(vocab)) for t in toks])
    return TransactionDatabase(records, len(vocab)), list(vocab)


def record_intersections(db: TransactionDatabase, min_count: int = 1, backend: str | None = None,
                         threads: int = 1) -> PairCounts:
    col_ptr, col_idx = _transpose(len(db), db.item_universe_size, db.indptr, db.indices)
    return count_pairs(db.indptr, db.indices, col_ptr, col_idx, len(db), min_count,
                       backend=backend, threads=threads)


def build_similarity_graph_from_db(db: TransactionDatabase, m: SimilarityMeasure,
                                   backend: str | None = None, threads: int = 1) -> Graph:
    """One vertex per record, edges where the measure passes on raw record sets."""
    pc = record_intersections(db, m.min_count, backend=backend, threads=threads)
    sizes = db.sizes()
    _, passes = measure_values(m, pc.count, sizes[pc.u], sizes[pc.v], db.item_universe_size)
    return Graph.from_arrays(len(db), pc.u[passes], pc.v[passes])


def pair_frequency_equivalence_check(g: Graph) -> bool:
    """Check that 2-itemset frequencies over ``{N[u]}`` equal closed-neighbourhood
    intersections.

    The frequency side is counted by scanning transactions for every pair
    of items, independently of the intersection kernel.
    """
    n = g.n
    freq: dict[tuple[int, int], int] = {}
    for w in range(n):
        t = closed_neighborhood_list(g, w)
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                key = (t[i], t[j])
                freq[key] = freq.get(key, 0) + 1
    pc = neighbor_intersections(g)
    if pc.as_dict() != freq:
        return False
    # pairs absent from the frequency table must have empty intersection
    nbrs = [set(closed_neighborhood_list(g, v)) for v in range(n)]
    return all(len(nbrs[u] & nbrs[v]) == c for (u, v), c in freq.items())


def closed_neighborhood_list(g: Graph, v: int) -> list[int]:
    return sorted(g.neighbors(v).tolist() + [v])
