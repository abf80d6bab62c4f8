"""Accuracy of found clusters against planted truth, and clustering statistics."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np


@dataclass
class AccuracyReport:
    precision: float
    recall: float
    f_value: float
    truth_best_overlap: list[int] = field(default_factory=list)
    found_best_overlap: list[int] = field(default_factory=list)

    def to_dict(self, tables: bool = False) -> dict:
        d = asdict(self)
        if not tables:
            d.pop("truth_best_overlap")
            d.pop("found_best_overlap")
        return d


def best_overlaps(side: Sequence[Sequence[int]], other: Sequence[Sequence[int]]) -> list[int]:
    """For each cluster in ``side``, the largest intersection with any cluster of ``other``.

    Uses an inverted index vertex -> clusters of ``other``.
    """
    index: dict[int, list[int]] = defaultdict(list)
    for j, c in enumerate(other):
        for v in set(c):
            index[v].append(j)
    out = []
    for c in side:
        hits = Counter()
        for v in set(c):
            hits.update(index.get(v, ()))
        out.append(max(hits.values(), default=0))
    return out


def best_overlaps_bruteforce(side, other) -> list[int]:
    return [max((len(set(c) & set(o)) for o in other), default=0) for c in side]


def accuracy(truth: Sequence[Sequence[int]], found: Sequence[Sequence[int]]) -> AccuracyReport:
    """Averaged best-match precision/recall and their harmonic mean.

    ``precision`` averages ``kappa(C)/|C|`` over truth clusters and
    ``recall`` averages ``kappa(C')/|C'|`` over found clusters, where
    ``kappa`` is the best overlap with the other side (not a one-to-one
    matching).
    """
    truth = [c for c in truth if len(c)]
    found = [c for c in found if len(c)]
    if not truth or not found:
        return AccuracyReport(0.0, 0.0, 0.0, [0] * len(truth), [0] * len(found))
    kt = best_overlaps(truth, found)
    kf = best_overlaps(found, truth)
    p = float(np.mean([k / len(set(c)) for k, c in zip(kt, truth)]))
    r = float(np.mean([k / len(set(c)) for k, c in zip(kf, found)]))
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return AccuracyReport(p, r, f, kt, kf)


@dataclass
class StatsReport:
    count: int
    n: int
    size_histogram: dict[int, int]
    max_size: int
    median_size: float
    coverage: float
    overlap_histogram: dict[int, int]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["size_histogram"] = {str(k): v for k, v in sorted(self.size_histogram.items())}
        d["overlap_histogram"] = {str(k): v for k, v in sorted(self.overlap_histogram.items())}
        return d


def cluster_stats(clusters: Sequence[Sequence[int]], n: int) -> StatsReport:
    """Size distribution, vertex coverage, and per-vertex membership counts.

    ``overlap_histogram[j]`` is the number of vertices lying in exactly
    ``j`` clusters (``j = 0`` included).
    """
    sizes = [len(set(c)) for c in clusters]
    membership = np.zeros(n, dtype=np.int64)
    for c in clusters:
        membership[list(set(c))] += 1
    overlap = Counter(membership.tolist())
    return StatsReport(
        count=len(sizes),
        n=n,
        size_histogram=dict(Counter(sizes)),
        max_size=max(sizes, default=0),
        median_size=float(np.median(sizes)) if sizes else 0.0,
        coverage=float((membership > 0).sum() / n) if n else 0.0,
        overlap_histogram=dict(overlap),
    )
