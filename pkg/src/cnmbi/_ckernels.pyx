# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Signatures mirror :mod:`cnmbi._pykernels` exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

NAME = "cython"


def delta_scan(const double[:, ::1] dist, const cnp.int64_t[::1] order):
    """Distance from each point to its nearest predecessor in ``order``.

    ``order`` lists points from highest to lowest density (ties already
    resolved). The first point takes its maximum distance instead and has
    no predecessor (``nearest == -1``).
    """
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t r, s, i, j, best_j
    cdef double best, dij
    delta = np.empty(n, dtype=np.float64)
    nearest = np.empty(n, dtype=np.int64)
    cdef double[::1] dv = delta
    cdef cnp.int64_t[::1] nv = nearest
    with nogil:
        if n > 0:
            i = order[0]
            best = 0.0
            for j in range(n):
                if dist[i, j] > best:
                    best = dist[i, j]
            dv[i] = best
            nv[i] = -1
        for r in range(1, n):
            i = order[r]
            best = INFINITY
            best_j = -1
            for s in range(r):
                j = order[s]
                dij = dist[i, j]
                if dij < best:
                    best = dij
                    best_j = j
            dv[i] = best
            nv[i] = best_j
    return delta, nearest


def neighborhood_sums(const double[:, ::1] X, const double[:, ::1] dist, double dc):
    """Sum of ``x_i - x_j`` over the open ``dc``-ball of each point, plus ball sizes."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, j, a
    H = np.zeros((n, d), dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    cdef double[:, ::1] hv = H
    cdef cnp.int64_t[::1] cv = counts
    with nogil:
        for i in range(n):
            for j in range(n):
                if j != i and dist[i, j] < dc:
                    cv[i] += 1
                    for a in range(d):
                        hv[i, a] += X[i, a] - X[j, a]
    return H, counts


def assign_nearest(const double[:, ::1] X, const double[:, ::1] C):
    """Label of the nearest center (lowest index on ties) and its squared distance."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k = C.shape[0]
    cdef Py_ssize_t i, c, a, best_c
    cdef double acc, diff, best
    labels = np.empty(n, dtype=np.int64)
    d2 = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] lv = labels
    cdef double[::1] dv = d2
    with nogil:
        for i in range(n):
            best = INFINITY
            best_c = 0
            for c in range(k):
                acc = 0.0
                for a in range(d):
                    diff = X[i, a] - C[c, a]
                    acc = acc + diff * diff
                if acc < best:
                    best = acc
                    best_c = c
            lv[i] = best_c
            dv[i] = best
    return labels, d2


def centroid_sums(const double[:, ::1] X, const cnp.int64_t[::1] labels, Py_ssize_t k):
    """Per-cluster coordinate sums and member counts."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, a, c
    sums = np.zeros((k, d), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sv = sums
    cdef cnp.int64_t[::1] cv = counts
    with nogil:
        for i in range(n):
            c = labels[i]
            cv[c] += 1
            for a in range(d):
                sv[c, a] += X[i, a]
    return sums, counts


def solve_assignment(const double[:, ::1] cost):
    """Minimum-cost perfect assignment of rows to columns (shortest augmenting paths)."""
    cdef Py_ssize_t n = cost.shape[0]
    cdef Py_ssize_t i, j, i0, j0, j1
    cdef double delta, cur
    u = np.zeros(n + 1, dtype=np.float64)
    v = np.zeros(n + 1, dtype=np.float64)
    minv = np.empty(n + 1, dtype=np.float64)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    used = np.zeros(n + 1, dtype=np.uint8)
    cdef double[::1] uv = u
    cdef double[::1] vv = v
    cdef double[::1] mv = minv
    cdef cnp.int64_t[::1] pv = p
    cdef cnp.int64_t[::1] wv = way
    cdef unsigned char[::1] usd = used
    with nogil:
        for i in range(1, n + 1):
            pv[0] = i
            j0 = 0
            for j in range(n + 1):
                mv[j] = INFINITY
                usd[j] = 0
            while True:
                usd[j0] = 1
                i0 = pv[j0]
                delta = INFINITY
                j1 = 0
                for j in range(1, n + 1):
                    if not usd[j]:
                        cur = cost[i0 - 1, j - 1] - uv[i0] - vv[j]
                        if cur < mv[j]:
                            mv[j] = cur
                            wv[j] = j0
                        if mv[j] < delta:
                            delta = mv[j]
                            j1 = j
                for j in range(n + 1):
                    if usd[j]:
                        uv[pv[j]] += delta
                        vv[j] -= delta
                    else:
                        mv[j] -= delta
                j0 = j1
                if pv[j0] == 0:
                    break
            while True:
                j1 = wv[j0]
                pv[j0] = pv[j1]
                j0 = j1
                if j0 == 0:
                    break
    perm = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        perm[p[j] - 1] = j - 1
    return perm


def kmeanspp_indices(const double[:, ::1] X, Py_ssize_t first, const double[:, ::1] u):
    """Greedy k-means++ seeding driven by pre-drawn uniforms.

    ``u`` has one row of candidate draws per center after the first. Each
    draw is mapped to a point by D^2 weighting (uniformly when every point
    already sits on a center); the candidate giving the lowest potential wins.
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k = u.shape[0] + 1
    cdef Py_ssize_t trials = u.shape[1]
    cdef Py_ssize_t c, t, i, a, lo, hi, mid, cand, best_t
    cdef double acc, diff, pot, target, best_pot, cand_pot
    idx = np.empty(k, dtype=np.int64)
    closest_arr = np.empty(n, dtype=np.float64)
    cum_arr = np.empty(n, dtype=np.float64)
    trial_arr = np.empty((trials, n), dtype=np.float64)
    cands_arr = np.empty(trials, dtype=np.int64)
    cdef cnp.int64_t[::1] iv = idx
    cdef double[::1] closest = closest_arr
    cdef double[::1] cum = cum_arr
    cdef double[:, ::1] trial_d2 = trial_arr
    cdef cnp.int64_t[::1] cands = cands_arr
    with nogil:
        iv[0] = first
        pot = 0.0
        for i in range(n):
            acc = 0.0
            for a in range(d):
                diff = X[i, a] - X[first, a]
                acc = acc + diff * diff
            closest[i] = acc
            pot = pot + acc
        for c in range(1, k):
            acc = 0.0
            for i in range(n):
                acc = acc + closest[i]
                cum[i] = acc
            for t in range(trials):
                if cum[n - 1] <= 0:
                    cand = <Py_ssize_t>(u[c - 1, t] * n)
                else:
                    target = u[c - 1, t] * cum[n - 1]
                    lo = 0
                    hi = n
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if cum[mid] <= target:
                            lo = mid + 1
                        else:
                            hi = mid
                    cand = lo
                if cand > n - 1:
                    cand = n - 1
                cands[t] = cand
            best_t = 0
            best_pot = INFINITY
            for t in range(trials):
                cand = cands[t]
                cand_pot = 0.0
                for i in range(n):
                    acc = 0.0
                    for a in range(d):
                        diff = X[i, a] - X[cand, a]
                        acc = acc + diff * diff
                    if closest[i] < acc:
                        acc = closest[i]
                    trial_d2[t, i] = acc
                    cand_pot = cand_pot + acc
                if cand_pot < best_pot:
                    best_pot = cand_pot
                    best_t = t
            iv[c] = cands[best_t]
            for i in range(n):
                closest[i] = trial_d2[best_t, i]
    return idx
