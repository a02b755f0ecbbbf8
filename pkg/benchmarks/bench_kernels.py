"""Compiled vs pure-Python Dijkstra on a 900-satellite snapshot.

    python3 benchmarks/bench_kernels.py [--sources N] [--repeat R]

Runs every source on the same CSR graph with both backends, checks that
distances and predecessors agree exactly, and prints per-call timings.
"""
import argparse
import time

from leosim import _kernels_py
from leosim.config import load_scenario
from leosim.orbits import Fleet
from leosim.topology import build_snapshot

try:
    from leosim import _kernels
except ImportError:
    _kernels = None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default="rewire_900_isl")
    ap.add_argument("--sources", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cfg = load_scenario(args.scenario)
    snap = build_snapshot(0.0, Fleet(list(cfg.satellites)), [g.location for g in cfg.ground_stations],
                          cfg.link_rules, cfg.ground_names)
    indptr, indices, weights = snap._csr
    n = len(indptr) - 1
    sources = list(range(min(args.sources, n)))
    print(f"{args.scenario}: {n} nodes, {len(snap.edges)} edges, {len(sources)} sources x {args.repeat}")

    py_args = (indptr.tolist(), indices.tolist(), weights.tolist())
    backends = [("python", _kernels_py.dijkstra, py_args)]
    if _kernels is not None:
        backends.append(("compiled", _kernels.dijkstra, (indptr, indices, weights)))
    else:
        print("compiled extension not built; timing the Python backend only")

    results, timings = {}, {}
    for name, fn, csr in backends:
        best = float("inf")
        for _ in range(args.repeat):
            t = time.perf_counter()
            out = [fn(*csr, s) for s in sources]
            best = min(best, time.perf_counter() - t)
        results[name] = [(list(d), list(p)) for d, p in out]
        timings[name] = best / len(sources)
        print(f"  {name:9s} {timings[name] * 1e6:10.1f} us per source")

    if len(results) == 2:
        assert results["python"] == results["compiled"], "backends disagree"
        print(f"  identical results; speedup x{timings['python'] / timings['compiled']:.1f}")


if __name__ == "__main__":
    main()
