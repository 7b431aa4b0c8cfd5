"""Pairwise distances, the cutoff radius, and density-peak scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._backend import kernels
from .datasets import Dataset
from .errors import DegenerateDataError


@dataclass(frozen=True, eq=False)
class DistanceIndex:
    """Dense Euclidean distance matrix plus the cutoff radius ``dc``."""

    distances: np.ndarray
    dc: float
    percentile: float

    @property
    def n(self) -> int:
        return self.distances.shape[0]


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Per-point local density, separation distance, and their product.

    ``order`` ranks points by ``gamma`` descending (stable, so ties go to the
    lower index). ``nearest_higher[i]`` is the denser point that realises
    ``delta[i]``, or -1 for the global density peak.
    """

    rho: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    order: np.ndarray
    nearest_higher: np.ndarray
    dc: float


@dataclass(frozen=True, eq=False)
class CenterSet:
    """``k`` center coordinates, tagged by how they were obtained."""

    centers: np.ndarray
    kind: str  # "density" or "mean"
    source_indices: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("density", "mean"):
            raise ValueError(f"kind must be 'density' or 'mean', got {self.kind!r}")
        c = np.asarray(self.centers, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] < 1:
            raise ValueError(f"centers must be a non-empty k x d matrix, got shape {c.shape}")
        if np.isnan(c).any():
            raise ValueError("centers contain NaN")
        object.__setattr__(self, "centers", c)

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def cutoff_position(percentile: float, m: int) -> int:
    """1-based rank ``ceil(percentile * m)`` clamped to ``[1, m]``."""
    # round away representation noise such as 0.02 * 50 = 1.0000000000000002
    pos = math.ceil(round(percentile * m, 9))
    return min(max(pos, 1), m)


def build_distance_index(data: Dataset, percentile: float = 0.02) -> DistanceIndex:
    """Distance matrix and ``dc`` taken at ``percentile`` of the distinct pair distances.

    A zero cutoff (duplicate points) is promoted to the smallest positive distance.
    """
    if not 0 < percentile < 1:
        raise ValueError(f"percentile must lie in (0, 1), got {percentile}")
    pts = data.points if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    if pts.shape[0] < 2:
        raise DegenerateDataError("need at least two points")
    pairs = pdist(pts)
    positive = pairs[pairs > 0]
    if positive.size == 0:
        raise DegenerateDataError("all points are identical; no positive pairwise distance")
    pos = cutoff_position(percentile, pairs.size)
    dc = float(np.partition(pairs, pos - 1)[pos - 1])
    if dc == 0.0:
        dc = float(positive.min())
    dist = squareform(pairs)
    dist.flags.writeable = False
    return DistanceIndex(dist, dc, percentile)


def local_density(index: DistanceIndex) -> np.ndarray:
    """Gaussian-kernel density, excluding each point's own contribution."""
    w = np.exp(-np.square(index.distances / index.dc))
    np.fill_diagonal(w, 0.0)
    return w.sum(axis=1)


def density_rank(rho: np.ndarray) -> np.ndarray:
    """Indices from densest to sparsest; equal densities rank the lower index first."""
    return np.lexsort((np.arange(rho.size), -rho))


def density_profile(index: DistanceIndex) -> DensityProfile:
    rho = local_density(index)
    delta, nearest = kernels.delta_scan(
        np.ascontiguousarray(index.distances), density_rank(rho).astype(np.int64)
    )
    gamma = rho * delta
    order = np.argsort(-gamma, kind="stable")
    for a in (rho, delta, gamma, order, nearest):
        a.flags.writeable = False
    return DensityProfile(rho, delta, gamma, order, nearest, index.dc)


def density_centers(profile: DensityProfile, data: Dataset, k: int) -> CenterSet:
    """The ``k`` points with the largest ``gamma``, in ranking order."""
    n = profile.order.size
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    idx = np.array(profile.order[:k])
    return CenterSet(data.points[idx], "density", idx)
