"""Lloyd's K-means with k-means++ seeding, used to obtain the mean centers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import kernels
from .datasets import Dataset
from .density import CenterSet
from .errors import DegenerateDataError


@dataclass
class KMeansRun:
    centers: np.ndarray
    labels: np.ndarray
    sse: float
    n_iter: int
    sse_history: list = field(default_factory=list)


def kmeans_plusplus(X: np.ndarray, k: int, rng: np.random.Generator, n_local_trials: Optional[int] = None):
    """Greedy k-means++ seeding; each step keeps the best of ``2 + log k`` D^2-weighted draws."""
    if n_local_trials is None:
        n_local_trials = 2 + int(math.log(k))
    first = int(rng.integers(X.shape[0]))
    u = rng.random((k - 1, n_local_trials))
    return X[kernels.kmeanspp_indices(X, first, u)]


def _repair_empty(X, centers, labels, d2, counts):
    """Move every empty center onto the point farthest from its own center."""
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return False
    d2 = d2.copy()
    for c in empty:
        far = int(np.argmax(d2))
        centers[c] = X[far]
        d2[far] = -1.0
    return True


def lloyd(X: np.ndarray, init: np.ndarray, max_iters: int = 300, tol: float = 1e-6) -> KMeansRun:
    """Run Lloyd iterations from ``init`` until centers move less than ``tol``.

    The returned centers are the exact means of the returned labels.
    """
    k = init.shape[0]
    centers = np.array(init, dtype=np.float64, order="C")
    history = []
    n_iter = 0
    while True:
        labels, d2 = kernels.assign_nearest(X, centers)
        sums, counts = kernels.centroid_sums(X, labels, k)
        history.append(float(d2.sum()))
        if _repair_empty(X, centers, labels, d2, counts):
            # reseeded centers change the assignment; reassign before averaging
            labels, d2 = kernels.assign_nearest(X, centers)
            sums, counts = kernels.centroid_sums(X, labels, k)
            history.append(float(d2.sum()))
        new = centers.copy()
        nz = counts > 0
        new[nz] = sums[nz] / counts[nz, None]
        n_iter += 1
        shift = float(np.sqrt(np.max(np.einsum("ij,ij->i", new - centers, new - centers))))
        centers = new
        if shift < tol or n_iter >= max_iters:
            break
    # centers are means of `labels`; report SSE against them
    diff = X - centers[labels]
    sse = float(np.einsum("ij,ij->", diff, diff))
    history.append(sse)
    return KMeansRun(centers, labels, sse, n_iter, history)


def kmeans(
    X: np.ndarray,
    k: int,
    restarts: int = 10,
    max_iters: int = 300,
    tol: float = 1e-6,
    seed=0,
) -> KMeansRun:
    """Best of ``restarts`` seeded Lloyd runs by SSE (earliest restart wins ties)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    if np.unique(X, axis=0).shape[0] < k:
        raise DegenerateDataError(f"fewer than k={k} distinct points")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    best = None
    for child in ss.spawn(restarts):
        rng = np.random.default_rng(child)
        run = lloyd(X, kmeans_plusplus(X, k, rng), max_iters, tol)
        if best is None or run.sse < best.sse:
            best = run
    return best


def kmeans_centers(
    data: Dataset,
    k: int,
    restarts: int = 10,
    max_iters: int = 300,
    tol: float = 1e-6,
    seed=0,
) -> CenterSet:
    """Mean centers of the best K-means partition into ``k`` clusters."""
    n = data.n
    if k < 2 or k > n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    run = kmeans(data.points, k, restarts, max_iters, tol, seed)
    return CenterSet(run.centers, "mean")
