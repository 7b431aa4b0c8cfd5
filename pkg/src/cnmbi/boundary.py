"""Boundary degree scoring and core-subset extraction.

Each point is scored by how lopsided its ``dc``-neighbourhood is: the
neighbour difference vectors ``x_i - x_j`` are summed and the length of the
sum is the boundary degree. Interior points have roughly symmetric
neighbourhoods and score low; edge, bridge, and isolated points score high.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .datasets import Dataset
from .density import DistanceIndex
from .errors import DegenerateDataError


@dataclass(frozen=True, eq=False)
class BoundaryProfile:
    phi: np.ndarray
    neighbor_counts: np.ndarray
    core_mask: np.ndarray
    lam: float
    dc: float

    @property
    def removed_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.core_mask)

    def summary(self) -> dict:
        finite = self.phi[np.isfinite(self.phi)]
        return {
            "lambda": self.lam,
            "dc": self.dc,
            "n": int(self.phi.size),
            "removed": int((~self.core_mask).sum()),
            "isolated": int((self.neighbor_counts == 0).sum()),
            "phi_max_finite": float(finite.max()) if finite.size else None,
            "removed_indices": [int(i) for i in self.removed_indices],
        }


def representative_vectors(data: Dataset, index: DistanceIndex):
    """Sum of neighbourhood vectors over the open ``dc``-ball, and ball sizes."""
    X = np.ascontiguousarray(data.points)
    return kernels.neighborhood_sums(X, np.ascontiguousarray(index.distances), float(index.dc))


def boundary_degree(data: Dataset, index: DistanceIndex, p: float = 1.0):
    """Return ``(phi, neighbor_counts)``.

    ``phi`` is the p-norm (default L1) of each representative vector. Points
    with no neighbour inside ``dc`` get ``inf`` so they are removed first.
    """
    if index.n != data.n:
        raise ValueError(f"distance index covers {index.n} points, dataset has {data.n}")
    H, counts = representative_vectors(data, index)
    if p == 1:
        phi = np.abs(H).sum(axis=1)
    else:
        phi = np.linalg.norm(H, ord=p, axis=1)
    phi[counts == 0] = np.inf
    return phi, counts


def removal_count(n: int, lam: float) -> int:
    """``floor(n * lam)``, robust to binary representation of ``lam``."""
    return int(math.floor(round(n * lam, 9)))


def removal_order(phi: np.ndarray, neighbor_counts: np.ndarray) -> np.ndarray:
    """Indices in the order they would be removed.

    Larger ``phi`` first; on equal ``phi`` the point with more neighbours goes
    later, and on a full tie the higher index goes first.
    """
    idx = np.arange(phi.size)
    return np.lexsort((-idx, neighbor_counts, -phi))


def core_subset(data: Dataset, phi: np.ndarray, lam: float = 0.10, neighbor_counts=None, dc: float = float("nan")):
    """Drop the ``floor(n * lam)`` highest-``phi`` points.

    Returns the filtered dataset (row order kept) and a :class:`BoundaryProfile`
    indexed by original row.
    """
    if not 0 <= lam < 1:
        raise ValueError(f"lambda must be in [0, 1), got {lam}")
    phi = np.asarray(phi, dtype=np.float64)
    n = data.n
    if phi.shape != (n,):
        raise ValueError(f"phi must have length {n}")
    if neighbor_counts is None:
        neighbor_counts = np.zeros(n, dtype=np.int64)
    m = removal_count(n, lam)
    if n - m < 2:
        raise DegenerateDataError(f"removing {m} of {n} points leaves fewer than 2")
    mask = np.ones(n, dtype=bool)
    mask[removal_order(phi, neighbor_counts)[:m]] = False
    core = data.subset(mask, name=f"{data.name}-core")
    profile = BoundaryProfile(phi, np.asarray(neighbor_counts), mask, lam, dc)
    return core, profile


def verify_projection_identity(x_i, x_j, axis: int, tol: float = 1e-12) -> bool:
    """Check that projecting ``x_i - x_j`` onto basis axis ``axis`` gives the coordinate difference.

    Evaluates ``e (e^T e)^{-1} e^T h`` literally with the standard basis
    vector ``e`` and compares the resulting vector against ``(x_id - x_jd) e``.
    """
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    if x_i.shape != x_j.shape or x_i.ndim != 1:
        raise ValueError("points must be 1-D vectors of equal length")
    d = x_i.size
    if not 0 <= axis < d:
        raise ValueError(f"axis must be in [0, {d}), got {axis}")
    e = np.zeros((d, 1))
    e[axis, 0] = 1.0
    h = (x_i - x_j)[:, None]
    proj = e @ np.linalg.inv(e.T @ e) @ e.T @ h
    expected = np.zeros(d)
    expected[axis] = x_i[axis] - x_j[axis]
    return bool(np.max(np.abs(proj[:, 0] - expected)) <= tol)
