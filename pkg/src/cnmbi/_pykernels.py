"""Pure-Python/numpy versions of the compiled kernels.

Used when the extension is not built, or when ``CNMBI_BACKEND=python``.
"""

import numpy as np

NAME = "python"


def delta_scan(dist, order):
    n = dist.shape[0]
    delta = np.empty(n, dtype=np.float64)
    nearest = np.empty(n, dtype=np.int64)
    if n == 0:
        return delta, nearest
    top = order[0]
    delta[top] = dist[top].max()
    nearest[top] = -1
    for r in range(1, n):
        i = order[r]
        row = dist[i, order[:r]]
        s = int(np.argmin(row))
        delta[i] = row[s]
        nearest[i] = order[s]
    return delta, nearest


def neighborhood_sums(X, dist, dc):
    mask = dist < dc
    np.fill_diagonal(mask, False)
    counts = mask.sum(axis=1).astype(np.int64)
    H = counts[:, None] * X - mask.astype(np.float64) @ X
    return H, counts


def assign_nearest(X, C):
    n = X.shape[0]
    labels = np.empty(n, dtype=np.int64)
    d2 = np.empty(n, dtype=np.float64)
    # chunked to bound the n*k*d temporary
    step = max(1, 2_000_000 // max(1, C.shape[0] * X.shape[1]))
    for lo in range(0, n, step):
        diff = X[lo:lo + step, None, :] - C[None, :, :]
        dd = np.einsum("ikd,ikd->ik", diff, diff)
        lab = dd.argmin(axis=1)
        labels[lo:lo + step] = lab
        d2[lo:lo + step] = dd[np.arange(dd.shape[0]), lab]
    return labels, d2


def centroid_sums(X, labels, k):
    sums = np.zeros((k, X.shape[1]), dtype=np.float64)
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    return sums, counts


def solve_assignment(cost):
    cost = np.asarray(cost, dtype=np.float64)
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cols = np.nonzero(free)[0]
            cur = cost[i0 - 1, cols - 1] - u[i0] - v[cols]
            better = cur < minv[cols]
            minv[cols[better]] = cur[better]
            way[cols[better]] = j0
            j1 = int(cols[np.argmin(minv[cols])])
            delta = minv[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    perm = np.empty(n, dtype=np.int64)
    perm[p[1:] - 1] = np.arange(n)
    return perm


def kmeanspp_indices(X, first, u):
    n = X.shape[0]
    k = u.shape[0] + 1
    idx = np.empty(k, dtype=np.int64)
    idx[0] = first
    diff = X - X[first]
    closest = np.einsum("ij,ij->i", diff, diff)
    for c in range(1, k):
        cum = np.cumsum(closest)
        if cum[-1] <= 0:
            cand = (u[c - 1] * n).astype(np.int64)
        else:
            cand = np.searchsorted(cum, u[c - 1] * cum[-1], side="right")
        np.minimum(cand, n - 1, out=cand)
        diff = X[None, :, :] - X[cand][:, None, :]
        cand_d2 = np.minimum(closest[None, :], np.einsum("tnd,tnd->tn", diff, diff))
        best = int(np.argmin(cand_d2.sum(axis=1)))
        idx[c] = cand[best]
        closest = cand_d2[best]
    return idx
