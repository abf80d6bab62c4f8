"""Time the intersection-counting kernel under both backends.

Sparse Zipf graphs are dominated by setup; planted b=2 graphs have long
closed neighbourhoods and millions of output pairs.

    python3 benchmarks/bench_backends.py --sizes 10000 30000 100000
"""
import argparse
import time

import numpy as np

from micropolish.graph import Graph
from micropolish.instances import ZipfParams, gen_planted, gen_zipf_graph
from micropolish.similarity import neighbor_intersections


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 30_000, 100_000])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--planted", type=int, nargs="*", default=[5_000, 20_000], help="planted instance sizes")
    args = ap.parse_args()

    neighbor_intersections(Graph.complete(3), backend="numba")  # jit warm-up
    print(f"{'graph':>8} {'n':>8} {'edges':>9} {'work':>11} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    graphs = [("zipf", gen_zipf_graph(ZipfParams(n, alpha=float(np.sqrt(n)), seed=0))) for n in args.sizes]
    graphs += [("planted", gen_planted(n, n * 3 // 100, 30, b=2, p=0.5, seed=0).graph) for n in args.planted]
    for name, g in graphs:
        n = g.n
        t_nb, a = best_of(lambda: neighbor_intersections(g, backend="numba", threads=args.threads), args.repeat)
        t_np, b = best_of(lambda: neighbor_intersections(g, backend="numpy"), args.repeat)
        assert a.dumps() == b.dumps(), "backends disagree"
        print(f"{name:>8} {n:>8} {g.m:>9} {a.work:>11} {t_nb:>9.4f} {t_np:>9.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
