"""Compare the JIT-compiled kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The script re-executes itself in a subprocess with NPCMAJ_DISABLE_NUMBA=1 so
both paths are measured in a fresh interpreter (the flag is read at import
time).  It prints a per-kernel table of wall times and the speedup ratio.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def make_workloads(seed=0):
    rng = np.random.default_rng(seed)
    sym = []
    for _ in range(400):
        m = rng.normal(size=(6, 6))
        sym.append(0.5 * (m + m.T))
    hp = rng.normal(size=(200_000, 4))
    hp[:, 1] = np.exp(hp[:, 1])
    hp[:, 3] = np.exp(hp[:, 3])
    measures = []
    for _ in range(2000):
        k1, k2 = rng.integers(2, 8, size=2)
        a = np.sort(rng.normal(size=k1))
        b = np.sort(rng.normal(size=k2))
        ca = np.cumsum(rng.dirichlet(np.ones(k1)))
        cb = np.cumsum(rng.dirichlet(np.ones(k2)))
        ca[-1] = cb[-1] = 1.0
        measures.append((a, ca, b, cb))
    return sym, hp, measures


def run_benchmarks(repeats=3):
    from npcmaj import kernels

    sym, hp, measures = make_workloads()

    def bench(fn):
        # one warmup call so JIT compilation is not timed
        fn()
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best

    results = {"numba_enabled": kernels.NUMBA_ENABLED}
    results["jacobi_eigh"] = bench(
        lambda: [kernels.jacobi_eigh(m) for m in sym])
    results["halfplane_distance"] = bench(
        lambda: [kernels.halfplane_distance(r[0], r[1], r[2], r[3]) for r in hp])
    results["quantile_w2_squared"] = bench(
        lambda: [kernels.quantile_w2_squared(*m) for m in measures])
    return results


def main():
    if os.environ.get("NPCMAJ_BENCH_CHILD"):
        print(json.dumps(run_benchmarks()))
        return

    here = run_benchmarks()
    env = dict(os.environ)
    env["NPCMAJ_BENCH_CHILD"] = "1"
    # the child runs whichever path this process did not take
    env["NPCMAJ_DISABLE_NUMBA"] = "1" if here["numba_enabled"] else "0"
    other = json.loads(subprocess.run(
        [sys.executable, os.path.abspath(__file__)], env=env,
        capture_output=True, text=True, check=True).stdout)

    jit, plain = (here, other) if here["numba_enabled"] else (other, here)
    print(f"{'kernel':<22}{'jit [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name in ("jacobi_eigh", "halfplane_distance", "quantile_w2_squared"):
        ratio = plain[name] / jit[name] if jit[name] > 0 else float("inf")
        print(f"{name:<22}{jit[name]:>12.4f}{plain[name]:>12.4f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
