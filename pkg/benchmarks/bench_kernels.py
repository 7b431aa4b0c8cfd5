"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 1500] [--repeat 5]

Each kernel is timed on the same inputs under both backends, then a full
``estimate`` is run once per backend in a subprocess (the backend is fixed
at import time via ``CNMBI_BACKEND``).
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np
from scipy.spatial.distance import cdist

from cnmbi import _pykernels

try:
    from cnmbi import _ckernels
except ImportError:
    _ckernels = None

ESTIMATE_SNIPPET = """
import json, time
from cnmbi import BACKEND, SweepConfig, estimate
from cnmbi.datasets import generate_scenario
data = generate_scenario("count", 20, seed=0)
t = time.perf_counter()
k = estimate(data, SweepConfig(seed=0, threads=1)).k_star
print(json.dumps({"backend": BACKEND, "seconds": time.perf_counter() - t, "k_star": k}))
"""


def kernel_cases(n, rng):
    X = rng.normal(size=(n, 2))
    dist = cdist(X, X)
    order = rng.permutation(n).astype(np.int64)
    C = X[rng.choice(n, 20, replace=False)]
    labels = rng.integers(0, 20, n).astype(np.int64)
    cost = rng.random((40, 40))
    u = rng.random((19, 4))
    dc = float(np.quantile(dist[np.triu_indices(n, 1)], 0.02))
    return {
        "delta_scan": lambda m: m.delta_scan(dist, order),
        "neighborhood_sums": lambda m: m.neighborhood_sums(X, dist, dc),
        "assign_nearest": lambda m: m.assign_nearest(X, C),
        "centroid_sums": lambda m: m.centroid_sums(X, labels, 20),
        "solve_assignment": lambda m: m.solve_assignment(cost),
        "kmeanspp_indices": lambda m: m.kmeanspp_indices(X, 0, u),
    }


def run_estimate(backend):
    env = dict(os.environ, CNMBI_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", ESTIMATE_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1500)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-estimate", action="store_true")
    args = ap.parse_args(argv)

    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    cases = kernel_cases(args.n, np.random.default_rng(0))
    print(f"{'kernel':<20} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases.items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20} {py:>10.2f} {cy:>10.2f} {py / cy:>7.1f}x")

    if not args.skip_estimate:
        print("\nfull estimate on count-20 (n=1000, k=2..31):")
        results = [run_estimate(b) for b in ("python", "cython")]
        for r in results:
            print(f"  {r['backend']:<7} {r['seconds']:7.2f}s  K*={r['k_star']}")
        if results[0]["k_star"] != results[1]["k_star"]:
            print("  warning: backends disagree on K*", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
