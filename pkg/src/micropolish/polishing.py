"""Iterated edge-set rewriting by closed-neighbourhood similarity."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Graph, graph_equal
from .similarity import KCommon, SimilarityMeasure, closed_sizes, measure_values, neighbor_intersections

CONVERGED = "converged"
CAP_REACHED = "cap_reached"
CYCLE_DETECTED = "cycle_detected"

DEFAULT_TAU = 30


@dataclass
class PolishReport:
    tau: int
    status: str = CAP_REACHED
    iterations: int = 0
    edge_counts: list[int] = field(default_factory=list)
    period: int | None = None

    def to_dict(self) -> dict:
        d = {"iterations": self.iterations, "edge_counts": list(self.edge_counts),
             "status": self.status, "tau": self.tau}
        if self.period is not None:
            d["period"] = self.period
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def polish_step(g: Graph, m: SimilarityMeasure, backend: str | None = None, threads: int = 1) -> Graph:
    """Graph on the same vertices whose edges are the pairs passing ``m``."""
    pc = neighbor_intersections(g, m.min_count, backend=backend, threads=threads)
    sizes = closed_sizes(g)
    _, passes = measure_values(m, pc.count, sizes[pc.u], sizes[pc.v], g.n)
    return Graph.from_arrays(g.n, pc.u[passes], pc.v[passes])


def polish(g: Graph, m: SimilarityMeasure, tau: int = DEFAULT_TAU, backend: str | None = None,
           threads: int = 1) -> tuple[Graph, PolishReport]:
    """Apply ``polish_step`` until a fixpoint, a revisited graph, or ``tau`` steps.

    The last computed graph is returned in every case; the report says
    which of the three stopping rules fired.
    """
    if tau < 1:
        raise ValueError("tau must be at least 1")
    report = PolishReport(tau=tau, edge_counts=[g.m])
    seen: dict[bytes, list[tuple[int, Graph]]] = {g.digest(): [(0, g)]}
    prev = g
    for i in range(1, tau + 1):
        cur = polish_step(prev, m, backend=backend, threads=threads)
        report.iterations = i
        report.edge_counts.append(cur.m)
        if graph_equal(cur, prev):
            report.status = CONVERGED
            return cur, report
        for j, old in seen.get(cur.digest(), ()):
            if graph_equal(cur, old):
                report.status = CYCLE_DETECTED
                report.period = i - j
                return cur, report
        seen.setdefault(cur.digest(), []).append((i, cur))
        prev = cur
    report.status = CAP_REACHED
    return prev, report


def is_polished(g: Graph, m: SimilarityMeasure, backend: str | None = None) -> bool:
    return graph_equal(g, polish_step(g, m, backend=backend))


def verify_property1_instance(g: Graph, k_set: Sequence[int], k: int) -> bool:
    """Whether ``k_set`` becomes a clique after one ``KCommon(k)`` step.

    Requires ``|k_set| = gamma * k`` with ``gamma >= 1`` and every member
    having at least ``(gamma + 1) * k / 2`` neighbours inside ``k_set``.
    """
    members = np.unique(np.asarray(k_set, dtype=np.int64))
    if k < 1 or members.size < k:
        raise ValueError("k_set must contain at least k vertices")
    bound = (members.size + k) / 2
    for v in members:
        inside = int(np.isin(g.neighbors(int(v)), members, assume_unique=True).sum())
        if inside < math.ceil(bound - 1e-12):
            raise ValueError(f"vertex {int(v)} has {inside} neighbours in k_set, need >= {bound}")
    h = polish_step(g, KCommon(k))
    for v in members:
        if not np.isin(members[members != v], h.neighbors(int(v)), assume_unique=True).all():
            return False
    return True
