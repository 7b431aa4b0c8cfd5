"""Minimum-loss pairing of mean centers with density centers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .density import CenterSet

# at or below this size, ties are canonicalised by full enumeration
ENUMERATION_LIMIT = 7


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """``costs[p, q]``: squared distance from mean center ``p`` to density center ``q``."""

    costs: np.ndarray

    @property
    def k(self) -> int:
        return self.costs.shape[0]


@dataclass(frozen=True, eq=False)
class MatchingResult:
    assignment: np.ndarray  # mean-center index -> density-center index
    pair_costs: np.ndarray
    loss: float


def build_cost_matrix(mean_set: CenterSet, density_set: CenterSet) -> CostMatrix:
    if mean_set.kind != "mean" or density_set.kind != "density":
        raise ValueError(
            f"expected (mean, density) center sets, got ({mean_set.kind}, {density_set.kind})"
        )
    return pairwise_sq_costs(mean_set.centers, density_set.centers)


def pairwise_sq_costs(a: np.ndarray, b: np.ndarray) -> CostMatrix:
    """Squared Euclidean distances between two equal-sized center lists."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"center sets differ in shape: {a.shape} vs {b.shape}")
    diff = a[:, None, :] - b[None, :, :]
    return CostMatrix(np.einsum("pqd,pqd->pq", diff, diff))


def matching_loss(costs: np.ndarray, perm) -> float:
    """Mean of the selected entries, summed exactly so the value is order independent."""
    k = len(perm)
    return math.fsum(costs[p, perm[p]] for p in range(k)) / k


def _check(costs) -> np.ndarray:
    c = np.ascontiguousarray(costs.costs if isinstance(costs, CostMatrix) else costs, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise ValueError(f"cost matrix must be square and non-empty, got shape {c.shape}")
    if np.isnan(c).any():
        raise ValueError("cost matrix contains NaN")
    if not np.isfinite(c).all():
        raise ValueError("cost matrix contains infinite entries")
    return c


def solve_assignment(costs) -> np.ndarray:
    """Raw optimal permutation from the O(k^3) solver, before tie canonicalisation."""
    return kernels.solve_assignment(_check(costs))


@lru_cache(maxsize=None)
def _permutations(k: int) -> np.ndarray:
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)  # lexicographic
    perms.flags.writeable = False
    return perms


def _canonical_by_enumeration(c: np.ndarray, target: float) -> np.ndarray:
    k = c.shape[0]
    perms = _permutations(k)
    sums = c[np.arange(k), perms].sum(axis=1)
    slack = 1e-9 * max(1.0, abs(target) * k)
    best_perm, best_loss = None, math.inf
    for row in np.flatnonzero(sums <= target * k + slack):
        loss = matching_loss(c, perms[row])
        if loss < best_loss:  # strict: first (lexicographically smallest) wins ties
            best_perm, best_loss = perms[row], loss
    return best_perm.copy()


def _canonical_by_swaps(c: np.ndarray, perm: np.ndarray, target: float) -> np.ndarray:
    perm = perm.copy()
    k = perm.size
    slack = 1e-9 * max(1.0, abs(target) * k)
    for _ in range(k * k):
        moved = False
        for p in range(k):
            for q in range(p + 1, k):
                if perm[p] <= perm[q]:
                    continue
                change = c[p, perm[q]] + c[q, perm[p]] - c[p, perm[p]] - c[q, perm[q]]
                if change > slack:
                    continue
                trial = perm.copy()
                trial[p], trial[q] = perm[q], perm[p]
                if matching_loss(c, trial) <= target:
                    perm = trial
                    moved = True
        if not moved:
            break
    return perm


def min_cost_matching(costs) -> MatchingResult:
    """Complete matching with the smallest mean squared pair distance.

    Among equal-loss matchings the lexicographically smallest assignment is
    returned (exactly for ``k <= 7``, via a 2-swap search above that).
    """
    c = _check(costs)
    perm = kernels.solve_assignment(c)
    target = matching_loss(c, perm)
    if c.shape[0] <= ENUMERATION_LIMIT:
        perm = _canonical_by_enumeration(c, target)
    else:
        perm = _canonical_by_swaps(c, perm, target)
    pair = c[np.arange(c.shape[0]), perm]
    return MatchingResult(perm, pair, matching_loss(c, perm))
