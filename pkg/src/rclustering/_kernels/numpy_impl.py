"""Pure NumPy implementations of the hot kernels.

These are the import-time fallback when the compiled _speedups extension is
unavailable. Semantics are identical; the compiled twins are only faster.
"""

from __future__ import annotations

import numpy as np

# Linkage method codes shared with the compiled kernel.
SINGLE, COMPLETE, AVERAGE, WEIGHTED, CENTROID, MEDIAN, WARD = range(7)


def adwin_scan(cum: np.ndarray, start: int, end: int, p: int, delta: float, min_sub: int) -> int:
    """Find the oldest admissible split whose mean difference beats the bound.

    ``cum`` holds absolute prefix sums (cum[i] = sum of the first i samples
    of the whole stream); the current window is samples [start, end). Returns
    the number of oldest samples to drop, or 0 when no split fires. Splits
    where the bound is undefined (k*delta' >= 4) cannot certify a change and
    never fire.
    """
    w = end - start
    if w < 2 * min_sub:
        return 0
    k = cum.shape[1]
    ratio = 4.0 * w / (k * delta)  # 4 / (k * delta'),  delta' = delta / |W|
    if ratio <= 1.0:
        return 0
    log_ratio = np.log(ratio)
    n0 = np.arange(min_sub, w - min_sub + 1)
    n1 = w - n0
    prefix = cum[start + n0] - cum[start]
    total = cum[end] - cum[start]
    diff = prefix / n0[:, None] - (total - prefix) / n1[:, None]
    # epsilon = k^(1/p) * sqrt(log_ratio / (2m)), m = 2*n0*n1/(n0+n1)
    if p == 2:
        stat = np.einsum("ij,ij->i", diff, diff)
        threshold = k * log_ratio * w / (4.0 * n0 * n1)
    else:
        stat = np.sum(np.abs(diff) ** p, axis=1) ** (1.0 / p)
        threshold = k ** (1.0 / p) * np.sqrt(log_ratio * w / (4.0 * n0 * n1))
    fired = stat > threshold
    idx = int(np.argmax(fired))
    if fired[idx]:
        return int(n0[idx])
    return 0


def chain_solve_r1(unary: np.ndarray, edge_weights: np.ndarray) -> np.ndarray:
    """Exact minimizer of a radius-1 Potts chain energy.

    ``unary`` is (T, L); ``edge_weights[i] >= 0`` is the full cost of frames
    i and i+1 taking different labels. Returns the lexicographically smallest
    optimal labeling.
    """
    T, L = unary.shape
    suffix = np.empty((T, L))
    suffix[T - 1] = unary[T - 1]
    for i in range(T - 2, -1, -1):
        nxt = suffix[i + 1]
        best = int(np.argmin(nxt))
        other = np.delete(nxt, best).min() if L > 1 else np.inf
        off_min = np.full(L, nxt[best])
        off_min[best] = other
        suffix[i] = unary[i] + np.minimum(nxt, edge_weights[i] + off_min)
    labels = np.empty(T, dtype=np.int64)
    labels[0] = int(np.argmin(suffix[0]))
    label_ids = np.arange(L)
    for i in range(1, T):
        costs = suffix[i] + edge_weights[i - 1] * (label_ids != labels[i - 1])
        labels[i] = int(np.argmin(costs))
    return labels


def lw_linkage(dist: np.ndarray, method: int) -> np.ndarray:
    """Agglomerate by Lance-Williams updates over a square distance matrix.

    Clusters are tracked in matrix slots; a merge keeps the lower slot, so a
    slot index always equals the smallest member frame of its cluster. Ties
    are broken by row-major scan order, which realizes the documented rule
    (smallest min-member index, then smallest other min-member index).

    Returns an (n-1, 4) array of (id_a, id_b, height, size) with id_a < id_b,
    leaves numbered 0..n-1 and internal clusters n, n+1, ... in merge order.
    Heights are on the scale of the input matrix (callers pass squared
    euclidean distances for centroid/median/ward and take square roots).
    """
    n = dist.shape[0]
    d = dist.astype(np.float64, copy=True)
    np.fill_diagonal(d, np.inf)
    merges = np.empty((n - 1, 4))
    sizes = np.ones(n)
    ids = np.arange(n)
    alive = np.ones(n, dtype=bool)
    scan = d.copy()
    scan[np.tril_indices(n)] = np.inf
    for step in range(n - 1):
        flat = int(np.argmin(scan))  # first occurrence in row-major order
        i, j = divmod(flat, n)
        height = d[i, j]
        na, nb = sizes[i], sizes[j]
        merges[step] = (min(ids[i], ids[j]), max(ids[i], ids[j]), height, na + nb)

        others = alive.copy()
        others[i] = others[j] = False
        dai = d[i, others]
        dbj = d[j, others]
        if method == SINGLE:
            updated = np.minimum(dai, dbj)
        elif method == COMPLETE:
            updated = np.maximum(dai, dbj)
        elif method == AVERAGE:
            updated = (na * dai + nb * dbj) / (na + nb)
        elif method == WEIGHTED:
            updated = 0.5 * (dai + dbj)
        elif method == CENTROID:
            nab = na + nb
            updated = (na * dai + nb * dbj) / nab - (na * nb * height) / (nab * nab)
        elif method == MEDIAN:
            updated = 0.5 * dai + 0.5 * dbj - 0.25 * height
        elif method == WARD:
            nc = sizes[others]
            updated = ((na + nc) * dai + (nb + nc) * dbj - nc * height) / (na + nb + nc)
        else:
            raise ValueError(f"unknown linkage method code {method}")

        d[i, others] = updated
        d[others, i] = updated
        d[i, i] = np.inf
        d[j, :] = np.inf
        d[:, j] = np.inf
        alive[j] = False
        sizes[i] = na + nb
        ids[i] = n + step
        # refresh the scan view for the touched row/column
        scan[j, :] = np.inf
        scan[:, j] = np.inf
        idx = np.nonzero(others)[0]
        lower = idx[idx < i]
        upper = idx[idx > i]
        scan[lower, i] = d[lower, i]
        scan[i, upper] = d[i, upper]
    return merges
