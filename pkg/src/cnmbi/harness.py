"""Independent brute-force oracles for testing.

Nothing here is used by the estimation pipeline. The oracles deliberately
avoid the production helpers: distances are recomputed with plain Python
loops, matchings are enumerated, and neighbourhood vectors are built one by
one before summing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .matching import MatchingResult

MAX_MATCHING_K = 8
MAX_POINTS = 200


@dataclass
class OracleResult:
    expected: Any
    actual: Any
    abs_err: float
    rel_err: float
    passed: bool
    instance: str

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.instance}: abs_err={self.abs_err:.3g} rel_err={self.rel_err:.3g}"


def compare(expected, actual, atol: float = 0.0, rtol: float = 0.0, instance: str = "") -> OracleResult:
    """Elementwise comparison; ``inf`` entries must agree exactly."""
    e = np.atleast_1d(np.asarray(expected, dtype=np.float64))
    a = np.atleast_1d(np.asarray(actual, dtype=np.float64))
    if e.shape != a.shape:
        return OracleResult(expected, actual, math.inf, math.inf, False, instance)
    inf_ok = bool(np.array_equal(np.isinf(e), np.isinf(a)) and np.array_equal(e[np.isinf(e)], a[np.isinf(a)]))
    fin = np.isfinite(e) & np.isfinite(a)
    diff = np.abs(e[fin] - a[fin])
    abs_err = float(diff.max()) if diff.size else 0.0
    denom = np.maximum(np.abs(e[fin]), np.finfo(float).tiny)
    rel_err = float((diff / denom).max()) if diff.size else 0.0
    passed = inf_ok and bool(np.all(diff <= atol + rtol * np.abs(e[fin])))
    return OracleResult(expected, actual, abs_err, rel_err, passed, instance)


def _dist(p, q) -> float:
    s = 0.0
    for a, b in zip(p, q):
        s += (a - b) * (a - b)
    return math.sqrt(s)


def _rows(data):
    pts = data.points if hasattr(data, "points") else np.asarray(data, dtype=np.float64)
    return [[float(v) for v in row] for row in pts]


def brute_force_dc(data, percentile: float) -> float:
    """Cutoff from a full sort of every unordered pair distance."""
    rows = _rows(data)
    pairs = sorted(_dist(rows[i], rows[j]) for i in range(len(rows)) for j in range(i + 1, len(rows)))
    m = len(pairs)
    pos = min(max(math.ceil(round(percentile * m, 9)), 1), m)
    dc = pairs[pos - 1]
    if dc == 0.0:
        dc = next(v for v in pairs if v > 0)
    return dc


def brute_force_matching(costs) -> MatchingResult:
    """Try every complete matching; ties go to the lexicographically smallest."""
    c = np.asarray(getattr(costs, "costs", costs), dtype=np.float64)
    k = c.shape[0]
    if k > MAX_MATCHING_K:
        raise ValueError(f"enumeration limited to k <= {MAX_MATCHING_K}, got {k}")
    best, best_loss = None, math.inf
    for perm in itertools.permutations(range(k)):
        loss = math.fsum(float(c[p, perm[p]]) for p in range(k)) / k
        if loss < best_loss:
            best, best_loss = perm, loss
    assignment = np.array(best, dtype=np.int64)
    return MatchingResult(assignment, c[np.arange(k), assignment], best_loss)


def brute_force_boundary(data, dc: float, p: float = 1.0) -> np.ndarray:
    """Boundary degree from explicitly built neighbourhood vectors.

    Every ``h_ij`` is formed as a full vector, its projection on each basis
    axis is taken with a dot product, and the projections are accumulated.
    """
    rows = _rows(data)
    n = len(rows)
    if n > MAX_POINTS:
        raise ValueError(f"oracle limited to n <= {MAX_POINTS}, got {n}")
    d = len(rows[0])
    basis = [[1.0 if a == b else 0.0 for b in range(d)] for a in range(d)]
    phi = np.empty(n)
    for i in range(n):
        rep = [0.0] * d
        members = 0
        for j in range(n):
            if j == i or not _dist(rows[i], rows[j]) < dc:
                continue
            members += 1
            h = [rows[i][a] - rows[j][a] for a in range(d)]
            for a, e in enumerate(basis):
                rep[a] += sum(e[b] * h[b] for b in range(d))
        if members == 0:
            phi[i] = math.inf
        elif p == 1:
            phi[i] = sum(abs(v) for v in rep)
        else:
            phi[i] = sum(abs(v) ** p for v in rep) ** (1.0 / p)
    return phi


def brute_force_delta(data, rho) -> np.ndarray:
    """Distance to the nearest denser point, by direct scan.

    Equal densities count the lower index as denser. The densest point takes
    its largest distance.
    """
    rows = _rows(data)
    rho = [float(r) for r in rho]
    n = len(rows)
    if n > MAX_POINTS:
        raise ValueError(f"oracle limited to n <= {MAX_POINTS}, got {n}")
    out = np.empty(n)
    for i in range(n):
        denser = [j for j in range(n) if rho[j] > rho[i] or (rho[j] == rho[i] and j < i)]
        if denser:
            out[i] = min(_dist(rows[i], rows[j]) for j in denser)
        else:
            out[i] = max(_dist(rows[i], rows[j]) for j in range(n) if j != i)
    return out


def brute_force_best_partition(points, k: int):
    """Minimum-SSE partition into ``k`` non-empty groups by exhaustive labelling (tiny n only)."""
    rows = _rows(points)
    n = len(rows)
    if n > 10:
        raise ValueError("exhaustive partition search limited to n <= 10")
    best, best_sse = None, math.inf
    for labels in itertools.product(range(k), repeat=n):
        if len(set(labels)) != k or labels[0] != 0:
            continue
        sse = 0.0
        centers = []
        for c in range(k):
            members = [rows[i] for i in range(n) if labels[i] == c]
            mean = [sum(col) / len(members) for col in zip(*members)]
            centers.append(mean)
            sse += sum(_dist(m, mean) ** 2 for m in members)
        if sse < best_sse:
            best, best_sse = centers, sse
    return np.array(best), best_sse
