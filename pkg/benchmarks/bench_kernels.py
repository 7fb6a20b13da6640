"""Compare the compiled and pure-Python kernels on the search workload.

    python benchmarks/bench_kernels.py [--repeat 3] [--max-n 10]

Both backends must agree exactly; the script aborts if they do not.
"""
import argparse
import time

from tiltsperner import kernels
from tiltsperner.core import TiltParams
from tiltsperner.search import greedy_indices, ConflictGraph


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=10)
    args = ap.parse_args()

    names = kernels.available()
    if "cython" not in names:
        print("compiled extension not built; only the python backend is available")
    mods = {name: kernels.get(name) for name in names}

    print(f"{'kernel':<10}{'case':<22}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for n in range(6, args.max_n + 1):
        masks = list(range(1 << n))
        times = {}
        results = []
        for name, mod in mods.items():
            t, adj = best_time(lambda: mod.build_adjacency(masks, 1, 2, True), args.repeat)
            times[name] = t
            results.append(adj)
        assert all(r == results[0] for r in results), "adjacency differs between backends"
        _row("adjacency", f"n={n} (1,2)", times)

    cases = [(5, (1, 1)), (6, (1, 1)), (7, (1, 2)), (8, (1, 2))]
    for n, pq in cases:
        params = TiltParams(*pq)
        adj = kernels.get("python").build_adjacency(list(range(1 << n)), *pq, True)
        g = ConflictGraph(n, params, tuple(range(1 << n)), tuple(adj))
        lower = bin(greedy_indices(g, "degree")).count("1")
        full = (1 << len(adj)) - 1
        times = {}
        results = []
        for name, mod in mods.items():
            t, res = best_time(lambda: mod.mis_search(adj, full, 0, lower, None), args.repeat)
            times[name] = t
            results.append(res)
        assert all(r == results[0] for r in results), "search differs between backends"
        _row("mis", f"n={n} {pq} nodes={results[0][2]}", times)


def _row(kernel, case, times):
    cells = "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
    speed = times["python"] / times["cython"] if "cython" in times else float("nan")
    print(f"{kernel:<10}{case:<22}{cells}{speed:>9.1f}x")


if __name__ == "__main__":
    main()
