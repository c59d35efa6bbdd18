"""Core data objects: data matrices, embeddings, and condensed pairwise distances.

Distances between all unordered point pairs are stored in condensed form: a
flat vector of length N(N-1)/2 whose entry k corresponds to the pair (i, j),
i < j, in lexicographic order. All metrics in this package sum over unordered
pairs; raw stress is therefore defined over unordered pairs as well (half the
full double-sum, which leaves every ratio- or argmin-style quantity unchanged).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np
from scipy.spatial.distance import pdist

from .errors import InvalidData, InvalidScale, ShapeMismatch

__all__ = [
    "DataMatrix",
    "EmbeddingMatrix",
    "CondensedDistances",
    "ShepardPairs",
    "pairwise_distances",
    "condensed_index",
    "scale_embedding",
    "shepard_pairs",
    "DISTANCE_METRICS",
]

#: Supported distance kinds, mapped to their scipy.spatial.distance names.
DISTANCE_METRICS: Mapping[str, str] = {
    "euclidean": "euclidean",
    "manhattan": "cityblock",
    "cosine": "cosine",
}


def _validated_matrix(values, *, min_rows: int, what: str) -> np.ndarray:
    v = np.array(values, dtype=float)
    if v.ndim != 2:
        raise InvalidData(f"{what} must be 2-dimensional, got ndim={v.ndim}")
    if v.shape[0] < min_rows:
        raise InvalidData(f"{what} needs at least {min_rows} rows, got {v.shape[0]}")
    if v.shape[1] < 1:
        raise InvalidData(f"{what} needs at least one column")
    finite_rows = np.isfinite(v).all(axis=1)
    if not finite_rows.all():
        bad = int(np.flatnonzero(~finite_rows)[0])
        raise InvalidData(f"non-finite value in {what} row {bad}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """N x n matrix of high-dimensional observations, one object per row."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _validated_matrix(self.values, min_rows=2, what="data matrix")
        )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """N x t low-dimensional projection of a data matrix (typically t = 2).

    ``meta`` carries embedder diagnostics (stress trajectories, warning
    flags); it never participates in numerical results.
    """

    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "values", _validated_matrix(self.values, min_rows=1, what="embedding matrix")
        )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class CondensedDistances:
    """The N(N-1)/2 pairwise distances of a point set, in lexicographic (i, j) order."""

    d: np.ndarray
    n_points: int

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.ndim != 1:
            raise InvalidData("condensed distances must be a flat vector")
        n = int(self.n_points)
        expected = n * (n - 1) // 2
        if d.shape[0] != expected:
            raise ShapeMismatch(
                f"condensed vector for {n} points must have length {expected}, got {d.shape[0]}"
            )
        if not np.isfinite(d).all():
            raise InvalidData("condensed distances contain non-finite entries")
        if d.size and float(d.min()) < 0.0:
            raise InvalidData("condensed distances must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n_points", n)

    def __len__(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True, eq=False)
class ShepardPairs:
    """All (high-dimensional, embedded) distance pairs of a dataset/embedding pair."""

    d_high: np.ndarray
    d_low: np.ndarray

    def __post_init__(self):
        dh = np.asarray(self.d_high, dtype=float)
        dl = np.asarray(self.d_low, dtype=float)
        if dh.shape != dl.shape or dh.ndim != 1:
            raise ShapeMismatch("Shepard pairs need two equal-length flat vectors")
        if dh.size and (dh.min() < 0 or dl.min() < 0):
            raise InvalidData("Shepard pair coordinates must be non-negative")
        object.__setattr__(self, "d_high", dh)
        object.__setattr__(self, "d_low", dl)

    def __len__(self) -> int:
        return self.d_high.shape[0]


Matrix = Union[DataMatrix, EmbeddingMatrix, np.ndarray]


def _matrix_values(m: Matrix) -> np.ndarray:
    if isinstance(m, (DataMatrix, EmbeddingMatrix)):
        return m.values
    return np.asarray(m, dtype=float)


def pairwise_distances(m: Matrix, metric: str = "euclidean") -> CondensedDistances:
    """All pairwise distances between the rows of ``m``, condensed form.

    ``metric`` is one of ``euclidean``, ``manhattan``, ``cosine`` and is
    applied identically to whichever space the matrix lives in.
    """
    values = _matrix_values(m)
    if values.ndim != 2:
        raise InvalidData("pairwise distances need a 2-dimensional matrix")
    if values.shape[0] < 2:
        raise InvalidData("pairwise distances need at least 2 rows")
    finite_rows = np.isfinite(values).all(axis=1)
    if not finite_rows.all():
        bad = int(np.flatnonzero(~finite_rows)[0])
        raise InvalidData(f"non-finite value in row {bad}")
    try:
        scipy_name = DISTANCE_METRICS[metric]
    except KeyError:
        raise InvalidData(f"unknown distance metric {metric!r}") from None
    if metric == "cosine":
        norms = np.linalg.norm(values, axis=1)
        if np.any(norms == 0.0):
            bad = int(np.flatnonzero(norms == 0.0)[0])
            raise InvalidData(f"cosine distance undefined for zero-norm row {bad}")
    d = pdist(values, metric=scipy_name)
    if metric == "cosine":
        # rounding can push cosine distance a hair below zero for near-identical rows
        d = np.clip(d, 0.0, None)
    return CondensedDistances(d=d, n_points=values.shape[0])


def condensed_index(i: int, j: int, n: int) -> int:
    """Flat position of pair (i, j), i < j < n, in the condensed vector."""
    if not (0 <= i < j < n):
        raise IndexError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def scale_embedding(p: EmbeddingMatrix, alpha: float) -> EmbeddingMatrix:
    """Uniformly rescale an embedding; pairwise distances scale by the same factor."""
    a = float(alpha)
    if not np.isfinite(a) or a <= 0.0:
        raise InvalidScale(f"scale factor must be positive and finite, got {alpha!r}")
    return EmbeddingMatrix(values=p.values * a, meta=dict(p.meta))


def shepard_pairs(d_high: CondensedDistances, d_low: CondensedDistances) -> ShepardPairs:
    """Pair up the two condensed vectors into Shepard-diagram points."""
    if d_high.n_points != d_low.n_points or len(d_high) != len(d_low):
        raise ShapeMismatch(
            f"distance vectors disagree: {d_high.n_points} vs {d_low.n_points} points"
        )
    return ShepardPairs(d_high=d_high.d, d_low=d_low.d)
