"""The five stress measures and the stress-scale curve sampler.

All measures take two condensed distance vectors: the high-dimensional
distances and the embedded distances of the same point set. Raw stress and
normalized stress change when the embedding is uniformly rescaled; Shepard
goodness, non-metric stress, and scale-normalized stress do not.

Scale-normalized stress evaluates normalized stress at the rescaling that
minimizes it. Setting the derivative of sum((d_high - alpha*d_low)^2) to zero
gives the closed-form minimizer

    alpha* = sum(d_high * d_low) / sum(d_low**2),

which is verified against a grid-search oracle in the test suite. Since all
distances are non-negative the numerator can only be non-positive when the
two vectors have disjoint supports; alpha* is then clamped to 0, where
normalized stress equals 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import CondensedDistances, ShepardPairs
from .errors import (
    DegenerateEmbedding,
    DegenerateHighSpace,
    InvalidRequest,
    ShapeMismatch,
)
from .monotone import isotonic_fit, sort_for_isotonic, spearman_rho

__all__ = [
    "MetricKind",
    "CurveSample",
    "OptimalScale",
    "raw_stress",
    "normalized_stress",
    "optimal_scale",
    "scale_normalized_stress",
    "shepard_goodness",
    "non_metric_stress",
    "stress_scale_curve",
    "compute_metric",
]


class MetricKind(str, enum.Enum):
    """Closed enumeration of the implemented stress measures."""

    RAW_STRESS = "rs"
    NORMALIZED_STRESS = "ns"
    SHEPARD_GOODNESS = "sgs"
    NON_METRIC_STRESS = "nms"
    SCALE_NORMALIZED_STRESS = "sns"

    @property
    def scale_invariant(self) -> bool:
        return self in (
            MetricKind.SHEPARD_GOODNESS,
            MetricKind.NON_METRIC_STRESS,
            MetricKind.SCALE_NORMALIZED_STRESS,
        )

    @property
    def higher_is_better(self) -> bool:
        return self is MetricKind.SHEPARD_GOODNESS


@dataclass(frozen=True)
class CurveSample:
    """One point on a stress-scale curve: the metric value at scale ``alpha``."""

    alpha: float
    value: float


@dataclass(frozen=True)
class OptimalScale:
    """The stress-minimizing scale factor; ``clamped`` marks the alpha=0 boundary case."""

    alpha_star: float
    clamped: bool = False


DistanceVector = Union[CondensedDistances, np.ndarray, Sequence[float]]


def _as_vector(d: DistanceVector) -> np.ndarray:
    if isinstance(d, CondensedDistances):
        return d.d
    return np.asarray(d, dtype=float)


def _paired(d_high: DistanceVector, d_low: DistanceVector) -> tuple[np.ndarray, np.ndarray]:
    dh = _as_vector(d_high)
    dl = _as_vector(d_low)
    if dh.shape != dl.shape:
        raise ShapeMismatch(f"distance vectors differ in length: {dh.shape} vs {dl.shape}")
    if isinstance(d_high, CondensedDistances) and isinstance(d_low, CondensedDistances):
        if d_high.n_points != d_low.n_points:
            raise ShapeMismatch(
                f"point counts differ: {d_high.n_points} vs {d_low.n_points}"
            )
    return dh, dl


def raw_stress(d_high: DistanceVector, d_low: DistanceVector) -> float:
    """Sum of squared distance differences over unordered pairs."""
    dh, dl = _paired(d_high, d_low)
    return float(np.sum((dh - dl) ** 2))


def normalized_stress(d_high: DistanceVector, d_low: DistanceVector) -> float:
    """Square root of raw stress divided by the squared high-dimensional distances.

    Equals 1 when the embedding is collapsed to a point and is unbounded
    above; despite the name it is not confined to [0, 1].
    """
    dh, dl = _paired(d_high, d_low)
    denom = float(np.sum(dh**2))
    if denom == 0.0:
        raise DegenerateHighSpace("all high-dimensional distances are zero")
    return float(np.sqrt(np.sum((dh - dl) ** 2) / denom))


def optimal_scale(d_high: DistanceVector, d_low: DistanceVector) -> OptimalScale:
    """Closed-form argmin over alpha of sum((d_high - alpha*d_low)^2)."""
    dh, dl = _paired(d_high, d_low)
    denom = float(np.sum(dl**2))
    if denom == 0.0:
        raise DegenerateEmbedding("all embedded distances are zero")
    numer = float(np.sum(dh * dl))
    if numer <= 0.0:
        return OptimalScale(alpha_star=0.0, clamped=True)
    return OptimalScale(alpha_star=numer / denom, clamped=False)


def scale_normalized_stress(d_high: DistanceVector, d_low: DistanceVector) -> float:
    """Normalized stress at the optimal scale; always in [0, 1].

    A fully collapsed embedding scores 1 by convention (the value normalized
    stress itself takes at scale 0).
    """
    dh, dl = _paired(d_high, d_low)
    if float(np.sum(dh**2)) == 0.0:
        raise DegenerateHighSpace("all high-dimensional distances are zero")
    try:
        alpha = optimal_scale(dh, dl).alpha_star
    except DegenerateEmbedding:
        return 1.0
    value = normalized_stress(dh, alpha * dl)
    # the minimum over alpha cannot exceed the alpha=0 boundary value of 1;
    # clip guards round-off only
    return min(value, 1.0)


def shepard_goodness(d_high: DistanceVector, d_low: DistanceVector) -> float:
    """Spearman rank correlation of the Shepard diagram's two coordinates."""
    dh, dl = _paired(d_high, d_low)
    return spearman_rho(dh, dl)


def non_metric_stress(
    d_high: DistanceVector, d_low: DistanceVector, *, kruskal_sqrt: bool = False
) -> float:
    """Squared deviation of embedded distances from their best monotone fit.

    Pairs are sorted by high-dimensional distance, a non-decreasing sequence
    of disparities is fitted to the embedded distances by least squares, and
    the residual sum of squares is divided by the sum of squared embedded
    distances. ``kruskal_sqrt`` applies a square root for comparison with
    classical Kruskal stress-1; the default reports the plain ratio.
    """
    dh, dl = _paired(d_high, d_low)
    denom = float(np.sum(dl**2))
    if denom == 0.0:
        raise DegenerateEmbedding("all embedded distances are zero")
    sequence = sort_for_isotonic(ShepardPairs(d_high=dh, d_low=dl))
    fit = isotonic_fit(sequence)
    value = fit.sse / denom
    return float(np.sqrt(value)) if kruskal_sqrt else float(value)


def stress_scale_curve(
    d_high: DistanceVector,
    d_low: DistanceVector,
    metric: MetricKind = MetricKind.NORMALIZED_STRESS,
    grid: Union[int, Sequence[float], None] = None,
) -> list[CurveSample]:
    """Sample a scale-sensitive metric at a range of embedding scales.

    ``grid`` is either a sample count (that many evenly spaced scales on
    [0, 2*alpha*], the exact optimum appended) or an explicit sequence of
    non-negative scales. Scale-invariant metrics are refused: their curve is
    constant and plotting it would only mislead.
    """
    metric = MetricKind(metric)
    if metric.scale_invariant:
        raise InvalidRequest(f"{metric.value} is scale-invariant; its curve is constant")
    dh, dl = _paired(d_high, d_low)
    if isinstance(grid, (int, np.integer)) or grid is None:
        n_samples = 256 if grid is None else int(grid)
        if n_samples < 2:
            raise InvalidRequest("need at least 2 grid points")
        alpha_star = optimal_scale(dh, dl).alpha_star
        upper = 2.0 * alpha_star if alpha_star > 0.0 else 2.0
        alphas = np.append(np.linspace(0.0, upper, n_samples), alpha_star)
    else:
        alphas = np.asarray(grid, dtype=float)
        if alphas.size < 2:
            raise InvalidRequest("need at least 2 grid points")
        if alphas.min() < 0.0 or not np.isfinite(alphas).all():
            raise InvalidRequest("grid scales must be finite and non-negative")
    fn = raw_stress if metric is MetricKind.RAW_STRESS else normalized_stress
    return [CurveSample(alpha=float(a), value=fn(dh, a * dl)) for a in alphas]


def compute_metric(
    metric: MetricKind, d_high: DistanceVector, d_low: DistanceVector
) -> float:
    """Evaluate one metric by kind."""
    metric = MetricKind(metric)
    if metric is MetricKind.RAW_STRESS:
        return raw_stress(d_high, d_low)
    if metric is MetricKind.NORMALIZED_STRESS:
        return normalized_stress(d_high, d_low)
    if metric is MetricKind.SHEPARD_GOODNESS:
        return shepard_goodness(d_high, d_low)
    if metric is MetricKind.NON_METRIC_STRESS:
        return non_metric_stress(d_high, d_low)
    return scale_normalized_stress(d_high, d_low)
