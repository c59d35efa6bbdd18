"""Monotone-regression and rank-statistics kernels.

Two small building blocks used by the stress metrics: weighted isotonic
regression via pool-adjacent-violators (the monotone line of best fit in a
Shepard diagram) and tie-aware Spearman rank correlation.

Tie policy for the isotonic sort: pairs are ordered by high-dimensional
distance ascending and, within ties, by embedded distance ascending
(Kruskal's secondary approach). With this ordering a rank-consistent
embedding fits with zero error even when the high-dimensional distances
contain ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ShepardPairs
from .errors import EmptyInput, InvalidData, InvalidWeight, ShapeMismatch, UndefinedCorrelation

__all__ = [
    "IsotonicFit",
    "isotonic_fit",
    "rank_average_ties",
    "spearman_rho",
    "sort_for_isotonic",
]


@dataclass(frozen=True, eq=False)
class IsotonicFit:
    """Least-squares non-decreasing fit to a sequence.

    ``fitted`` has the same length as the input and is non-decreasing;
    ``sse`` is the weighted sum of squared residuals, which is minimal over
    all non-decreasing vectors.
    """

    fitted: np.ndarray
    sse: float


def isotonic_fit(y, weights=None) -> IsotonicFit:
    """Weighted least-squares isotonic (non-decreasing) regression.

    Pool-adjacent-violators with a block stack: scan left to right, and
    whenever a block mean exceeds its successor's, merge the two blocks and
    replace their values by the weighted mean. Amortized linear time.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise EmptyInput("isotonic regression needs a non-empty 1-d vector")
    if weights is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != y.shape:
            raise ShapeMismatch("weights must match the input length")
        if np.any(w <= 0.0) or not np.isfinite(w).all():
            raise InvalidWeight("weights must be positive and finite")

    means: list[float] = []
    wsum: list[float] = []
    count: list[int] = []
    for val, wt in zip(y.tolist(), w.tolist()):
        means.append(val)
        wsum.append(wt)
        count.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            m2, w2, c2 = means.pop(), wsum.pop(), count.pop()
            m1, w1, c1 = means.pop(), wsum.pop(), count.pop()
            wt_new = w1 + w2
            means.append((m1 * w1 + m2 * w2) / wt_new)
            wsum.append(wt_new)
            count.append(c1 + c2)

    fitted = np.repeat(means, count)
    sse = float(np.sum(w * (fitted - y) ** 2))
    return IsotonicFit(fitted=fitted, sse=sse)


def rank_average_ties(x) -> np.ndarray:
    """Ranks under ascending sort; tied values share the mean of their positions."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise EmptyInput("ranking needs a non-empty 1-d vector")
    if np.isnan(x).any():
        raise InvalidData("cannot rank NaN entries")
    n = x.size
    order = np.argsort(x, kind="stable")
    sx = x[order]
    new_block = np.empty(n, dtype=bool)
    new_block[0] = True
    new_block[1:] = sx[1:] != sx[:-1]
    block_id = np.cumsum(new_block) - 1
    counts = np.bincount(block_id)
    ends = np.cumsum(counts)
    starts = ends - counts
    block_rank = (starts + 1 + ends) / 2.0
    ranks = np.empty(n, dtype=float)
    ranks[order] = block_rank[block_id]
    return ranks


def spearman_rho(x, y) -> float:
    """Tie-aware Spearman rank correlation: Pearson correlation of average ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ShapeMismatch(f"length mismatch: {x.shape} vs {y.shape}")
    if x.ndim != 1 or x.size < 2:
        raise EmptyInput("Spearman correlation needs at least 2 observations")
    rx = rank_average_ties(x)
    ry = rank_average_ties(y)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise UndefinedCorrelation("correlation undefined for a constant vector")
    if np.array_equal(rx, ry):
        # identical rank vectors correlate exactly; skip the round-off of the general path
        return 1.0
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    rho = float(np.dot(rx, ry) / np.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))
    return float(np.clip(rho, -1.0, 1.0))


def sort_for_isotonic(pairs: ShepardPairs) -> np.ndarray:
    """Embedded distances in fitting order: by d_high ascending, ties by d_low ascending."""
    if len(pairs) == 0:
        raise EmptyInput("no pairs to sort")
    order = np.lexsort((pairs.d_low, pairs.d_high))
    return pairs.d_low[order]
