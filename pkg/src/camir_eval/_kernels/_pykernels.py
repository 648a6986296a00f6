"""Reference implementations of the numeric kernels (no compilation needed)."""

from __future__ import annotations

import numpy as np


def min_cost_assignment(cost) -> list[int]:
    """Assign every row of an ``n x m`` integer cost matrix (``n <= m``) to a
    distinct column at minimum total cost.

    Shortest augmenting path with dual potentials; exact on integers.
    Returns the column chosen for each row.
    """
    n = len(cost)
    if n == 0:
        return []
    m = len(cost[0])
    if n > m:
        raise ValueError("need rows <= columns")
    inf = float("inf")
    u = [0] * (n + 1)
    v = [0] * (m + 1)
    owner = [0] * (m + 1)  # owner[j]: row (1-based) assigned to column j
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            row = cost[i0 - 1]
            delta = inf
            j1 = 0
            ui0 = u[i0]
            for j in range(1, m + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    result = [0] * n
    for j in range(1, m + 1):
        if owner[j]:
            result[owner[j] - 1] = j - 1
    return result


def _f1(counts: np.ndarray) -> np.ndarray:
    tp, fp, fn = counts[..., 0], counts[..., 1], counts[..., 2]
    denom = 2 * tp + fp + fn
    out = np.ones(denom.shape, dtype=np.float64)
    nz = denom > 0
    out[nz] = 2.0 * tp[nz] / denom[nz]
    return out


def bootstrap_deltas(counts_a, counts_b, samples) -> np.ndarray:
    """F1(A) - F1(B) for each row of resampled document indices.

    ``counts_a``/``counts_b`` are ``(n_docs, 3)`` tp/fp/fn arrays; ``samples``
    is ``(replicates, n_docs)``.  An all-zero count tuple scores F1 = 1.
    """
    counts_a = np.asarray(counts_a, dtype=np.int64)
    counts_b = np.asarray(counts_b, dtype=np.int64)
    samples = np.asarray(samples, dtype=np.int64)
    sum_a = counts_a[samples].sum(axis=1)
    sum_b = counts_b[samples].sum(axis=1)
    return _f1(sum_a) - _f1(sum_b)
