"""Compare the numba and pure-numpy kernels.

Times implication mining on a random context and the exhaustive candidate
grid search on a random 9-parameter row.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mixedfca import _kernels
from mixedfca._jit import HAVE_NUMBA


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description="Benchmark numba vs numpy kernels")
    parser.add_argument("--objects", type=int, default=20)
    parser.add_argument("--attributes", type=int, default=8)
    parser.add_argument("--columns", type=int, default=6, help="size of the negative set N (4^N candidates)")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    incidence = rng.random((args.objects, args.attributes)) < 0.5
    rows = (incidence.astype(np.int64) << np.arange(args.attributes, dtype=np.int64)).sum(axis=1)
    row = rng.uniform(0.0, 10.0, 9)
    cols = np.sort(rng.choice(9, size=args.columns, replace=False)).astype(np.int64)
    cands = rng.uniform(0.0, 10.0, (args.columns, 4))

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    results = {}
    for backend in backends:
        # warm-up also triggers JIT compilation
        _kernels.mine(rows, args.attributes, True, backend=backend)
        _kernels.grid_search(row, cols, cands, 1, 930.0, backend=backend)
        results[backend] = (
            _best_of(lambda: _kernels.mine(rows, args.attributes, True, backend=backend), args.repeats),
            _best_of(lambda: _kernels.grid_search(row, cols, cands, 1, 930.0, backend=backend), args.repeats),
        )

    print("bench_kernels")
    print(f"objects={args.objects} attributes={args.attributes} grid=4^{args.columns}")
    for backend, (mine_s, grid_s) in results.items():
        print(f"{backend:6s} mine_sec={mine_s:.6f} grid_sec={grid_s:.6f}")
    if len(results) == 2:
        print(f"speedup mine={results['numpy'][0] / results['numba'][0]:.1f}x "
              f"grid={results['numpy'][1] / results['numba'][1]:.1f}x")


if __name__ == "__main__":
    main()
