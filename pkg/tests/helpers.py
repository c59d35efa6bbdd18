"""Independent oracles used by the tests.

These deliberately avoid the package's own code paths: brute-force grid
search for the optimal scale, exhaustive partition enumeration for isotonic
regression, and loop-based ranking for Spearman correlation.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform


def random_distance_instance(rng, n, dim_high=4, dim_low=2):
    """Condensed distance vectors of a random point set and a random embedding."""
    x = rng.random((n, dim_high))
    p = rng.random((n, dim_low)) * rng.uniform(0.1, 10.0)
    return pdist(x), pdist(p)


def ns_grid_minimum(dh, dl, upper, step):
    """Brute-force minimizer of normalized stress over alpha in [0, upper]."""
    dh = np.asarray(dh, float)
    dl = np.asarray(dl, float)
    alphas = np.arange(0.0, upper + step / 2, step)
    denom = np.sum(dh**2)
    best_alpha, best_value = 0.0, np.inf
    chunk = 2048
    for start in range(0, alphas.size, chunk):
        a = alphas[start : start + chunk]
        resid = dh[None, :] - a[:, None] * dl[None, :]
        values = np.sqrt(np.sum(resid**2, axis=1) / denom)
        k = int(np.argmin(values))
        if values[k] < best_value:
            best_value = float(values[k])
            best_alpha = float(a[k])
    return best_alpha, best_value


def isotonic_oracle(y, weights=None):
    """Optimal non-decreasing fit by enumerating all contiguous partitions.

    Exponential in the input length; keep inputs at 10 elements or fewer.
    Block means must be non-decreasing for a partition to be feasible; the
    block SSE comes from prefix sums: sum(w*y^2) - mean^2 * sum(w) per block.
    """
    y = np.asarray(y, float)
    n = y.size
    w = np.ones(n) if weights is None else np.asarray(weights, float)
    pw = np.concatenate([[0.0], np.cumsum(w)])
    pwy = np.concatenate([[0.0], np.cumsum(w * y)])
    pwyy = np.concatenate([[0.0], np.cumsum(w * y * y)])

    best_sse, best_cuts = np.inf, None
    for mask in range(1 << (n - 1)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask & (1 << i)] + [n]
        sse = 0.0
        prev_mean = -np.inf
        feasible = True
        for a, b in zip(cuts[:-1], cuts[1:]):
            bw = pw[b] - pw[a]
            mean = (pwy[b] - pwy[a]) / bw
            if mean < prev_mean:
                feasible = False
                break
            prev_mean = mean
            sse += (pwyy[b] - pwyy[a]) - mean * mean * bw
        if feasible and sse < best_sse:
            best_sse, best_cuts = sse, cuts
    fit = np.concatenate(
        [
            np.full(b - a, (pwy[b] - pwy[a]) / (pw[b] - pw[a]))
            for a, b in zip(best_cuts[:-1], best_cuts[1:])
        ]
    )
    return fit, float(best_sse)


def rank_oracle(x):
    """Average ranks computed with explicit loops."""
    x = [float(v) for v in x]
    n = len(x)
    order = sorted(range(n), key=lambda i: x[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and x[order[j + 1]] == x[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return np.array(ranks)


def spearman_oracle(x, y):
    """Rank-then-Pearson, via the loop ranker and numpy's corrcoef."""
    return float(np.corrcoef(rank_oracle(x), rank_oracle(y))[0, 1])


def knn_overlap(a, b, k=10):
    """Mean fraction of shared k-nearest-neighbor sets between two point sets."""
    da = squareform(pdist(a))
    db = squareform(pdist(b))
    na = da.argsort(axis=1)[:, 1 : k + 1]
    nb = db.argsort(axis=1)[:, 1 : k + 1]
    return float(np.mean([len(set(na[i]) & set(nb[i])) / k for i in range(len(a))]))


def three_cluster_blobs(n_per, seed, dim=5):
    rng = np.random.default_rng(seed)
    return np.vstack([rng.normal(loc, 0.5, size=(n_per, dim)) for loc in (0.0, 4.0, 8.0)])
