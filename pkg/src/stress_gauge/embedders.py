"""Reference dimensionality-reduction techniques for the ranking experiments.

Four embedders, each deterministic for a fixed (input, seed, config):

* classical scaling (double centering + Jacobi eigendecomposition),
* metric MDS by stress majorization (SMACOF),
* a minimal exact t-SNE,
* a uniform random baseline in the unit square.

SMACOF directly minimizes raw stress, t-SNE preserves local neighborhoods,
and the random baseline preserves nothing, which is what gives the harness
its expected quality ordering.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import CondensedDistances, DataMatrix, EmbeddingMatrix, pairwise_distances
from .errors import InvalidData, NumericalFailure
from .linalg import jacobi_eigh
from .metrics import raw_stress
from .rng import Xoshiro256StarStar

__all__ = [
    "Technique",
    "EmbedderConfig",
    "classical_mds",
    "smacof_mds",
    "tsne",
    "random_embedding",
    "run_embedder",
]

log = logging.getLogger(__name__)

_TSNE_LEARNING_RATE = 200.0
_TSNE_EXAGGERATION = 12.0
_TSNE_EXPLORE_ITERS = 250
_TSNE_MOMENTUM_EARLY = 0.5
_TSNE_MOMENTUM_LATE = 0.8
_PROB_FLOOR = 1e-12


class Technique(str, enum.Enum):
    CLASSICAL_MDS = "classical-mds"
    SMACOF_MDS = "mds"
    TSNE = "tsne"
    RANDOM = "random"


@dataclass(frozen=True)
class EmbedderConfig:
    technique: Technique = Technique.SMACOF_MDS
    seed: int = 0
    target_dim: int = 2
    tsne_perplexity: float = 30.0
    tsne_iters: int = 750
    smacof_max_iters: int = 300
    smacof_rel_tol: float = 1e-6
    smacof_init: str = "classical"  # or "random"

    def with_seed(self, seed: int) -> "EmbedderConfig":
        return replace(self, seed=int(seed))


def classical_mds(d_high: CondensedDistances, dim: int = 2) -> EmbeddingMatrix:
    """Closed-form scaling: embed the double-centered squared-distance matrix.

    Coordinates come from the top ``dim`` non-negative eigenvalue directions
    scaled by sqrt(eigenvalue). When fewer than ``dim`` eigenvalues are
    positive the missing columns are zero and ``meta['deficient_rank']`` is
    set.
    """
    n = d_high.n_points
    if n < dim + 1:
        raise InvalidData(f"classical scaling needs at least dim+1={dim + 1} points, got {n}")
    sq = squareform(d_high.d) ** 2
    row_mean = sq.mean(axis=1, keepdims=True)
    col_mean = sq.mean(axis=0, keepdims=True)
    b = -0.5 * (sq - row_mean - col_mean + sq.mean())
    eigvals, eigvecs = jacobi_eigh(b)
    order = np.argsort(-eigvals, kind="stable")
    coords = np.zeros((n, dim))
    # eigenvalues within round-off of zero count as zero, not as usable directions
    floor = 1e-12 * max(1.0, float(np.abs(eigvals).max()))
    positive = 0
    for k in range(dim):
        lam = eigvals[order[k]]
        if lam > floor:
            coords[:, k] = eigvecs[:, order[k]] * math.sqrt(lam)
            positive += 1
    meta = {"eigenvalues": eigvals[order], "deficient_rank": positive < dim}
    if meta["deficient_rank"]:
        log.warning("classical scaling found only %d positive eigenvalues for dim=%d", positive, dim)
    return EmbeddingMatrix(values=coords, meta=meta)


def smacof_mds(
    d_high: CondensedDistances,
    cfg: EmbedderConfig,
    classical_init: EmbeddingMatrix | None = None,
) -> EmbeddingMatrix:
    """Metric MDS by iterated Guttman transforms; raw stress never increases.

    Default initialization is the classical-scaling solution perturbed by
    seeded Gaussian noise of scale 1e-4 (pass ``classical_init`` to reuse a
    precomputed solution); ``smacof_init="random"`` starts from seeded
    uniforms in the unit square instead. Stops when the relative raw-stress
    decrease falls below ``smacof_rel_tol``.
    """
    n = d_high.n_points
    if n < 3:
        raise InvalidData(f"SMACOF needs at least 3 points, got {n}")
    dim = cfg.target_dim
    rng = Xoshiro256StarStar(cfg.seed)
    if cfg.smacof_init == "random":
        z = rng.uniform_matrix(n, dim)
    else:
        base = classical_init if classical_init is not None else classical_mds(d_high, dim)
        z = base.values + rng.normal_matrix(n, dim, scale=1e-4)

    d_full = squareform(d_high.d)
    stress = raw_stress(d_high.d, pdist(z))
    trajectory = [stress]
    for _ in range(cfg.smacof_max_iters):
        if stress == 0.0:
            break
        dz = squareform(pdist(z))
        ratio = np.divide(d_full, dz, out=np.zeros_like(d_full), where=dz > 0.0)
        b = -ratio
        np.fill_diagonal(b, ratio.sum(axis=1))
        z_next = (b @ z) / n
        new_stress = raw_stress(d_high.d, pdist(z_next))
        if new_stress > stress:
            # majorization cannot increase stress; an uptick means the update
            # is round-off noise at the convergence floor, so keep the old point
            break
        z = z_next
        trajectory.append(new_stress)
        done = (stress - new_stress) / stress < cfg.smacof_rel_tol
        stress = new_stress
        if done:
            break
    meta = {"stress_trajectory": np.array(trajectory), "iterations": len(trajectory) - 1}
    return EmbeddingMatrix(values=z, meta=meta)


def _conditional_probabilities(sq_dists: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-stochastic Gaussian affinities with per-point bandwidths.

    Each precision is found by 50 bisection steps targeting entropy
    log(perplexity) to within 1e-5 nats.
    """
    n = sq_dists.shape[0]
    target = math.log(perplexity)
    p = np.zeros((n, n))
    for i in range(n):
        mask = np.arange(n) != i
        d_i = sq_dists[i, mask]
        d_i = d_i - d_i.min()  # probabilities are shift-invariant; keeps exp() in range
        beta, beta_lo, beta_hi = 1.0, -math.inf, math.inf
        p_i = np.exp(-d_i)
        for _ in range(50):
            p_i = np.exp(-d_i * beta)
            total = float(p_i.sum())
            entropy = math.log(total) + beta * float(np.dot(d_i, p_i)) / total
            diff = entropy - target
            if abs(diff) < 1e-5:
                break
            if diff > 0.0:
                beta_lo = beta
                beta = beta * 2.0 if beta_hi == math.inf else (beta + beta_hi) / 2.0
            else:
                beta_hi = beta
                beta = beta / 2.0 if beta_lo == -math.inf else (beta + beta_lo) / 2.0
        p[i, mask] = p_i / p_i.sum()
    return p


def tsne(x: DataMatrix, cfg: EmbedderConfig) -> EmbeddingMatrix:
    """Minimal exact t-SNE (quadratic in N, no tree approximations).

    Symmetrized Gaussian input affinities, Student-t output kernel with one
    degree of freedom, plain momentum gradient descent (0.5 then 0.8 after
    iteration 250) at learning rate 200 with 12x early exaggeration for the
    first 250 iterations. Seeded Gaussian initialization of scale 1e-4.
    ``meta['kl_trajectory']`` records the unexaggerated objective per step.
    """
    values = x.values
    n = values.shape[0]
    if n < 10:
        raise InvalidData(f"t-SNE needs at least 10 points, got {n}")
    dim = cfg.target_dim
    perplexity = float(cfg.tsne_perplexity)
    max_perp = (n - 1) / 3.0
    clamped = perplexity >= max_perp
    if clamped:
        perplexity = max_perp * 0.999
        log.warning("perplexity clamped to %.3f for %d points", perplexity, n)

    sq_dists = squareform(pdist(values, metric="sqeuclidean"))
    cond = _conditional_probabilities(sq_dists, perplexity)
    p = np.maximum((cond + cond.T) / (2.0 * n), _PROB_FLOOR)

    rng = Xoshiro256StarStar(cfg.seed)
    y = rng.normal_matrix(n, dim, scale=1e-4)
    update = np.zeros_like(y)
    kl_trajectory = np.empty(cfg.tsne_iters)
    for it in range(cfg.tsne_iters):
        sums = np.sum(y * y, axis=1)
        num = 1.0 / (1.0 + sums[:, None] + sums[None, :] - 2.0 * (y @ y.T))
        np.fill_diagonal(num, 0.0)
        q = num / num.sum()
        exag = _TSNE_EXAGGERATION if it < _TSNE_EXPLORE_ITERS else 1.0
        pq = (exag * p - q) * num
        grad = 4.0 * (pq.sum(axis=1)[:, None] * y - pq @ y)
        if not np.isfinite(grad).all():
            raise NumericalFailure(f"t-SNE gradient became non-finite at iteration {it}")
        momentum = _TSNE_MOMENTUM_EARLY if it < _TSNE_EXPLORE_ITERS else _TSNE_MOMENTUM_LATE
        update = momentum * update - _TSNE_LEARNING_RATE * grad
        y = y + update
        y = y - y.mean(axis=0)
        kl_trajectory[it] = float(np.sum(p * np.log(p / np.maximum(q, _PROB_FLOOR))))
    meta = {
        "kl_trajectory": kl_trajectory,
        "perplexity_used": perplexity,
        "perplexity_clamped": clamped,
    }
    return EmbeddingMatrix(values=y, meta=meta)


def random_embedding(n: int, cfg: EmbedderConfig) -> EmbeddingMatrix:
    """Seeded uniform coordinates in the unit square, independent of the data."""
    if n < 1:
        raise InvalidData("random embedding needs at least 1 point")
    rng = Xoshiro256StarStar(cfg.seed)
    return EmbeddingMatrix(values=rng.uniform_matrix(n, cfg.target_dim))


def run_embedder(
    cfg: EmbedderConfig,
    data: DataMatrix | None = None,
    distances: CondensedDistances | None = None,
    classical_init: EmbeddingMatrix | None = None,
) -> EmbeddingMatrix:
    """Dispatch one technique; computes distances from ``data`` when absent."""
    technique = Technique(cfg.technique)
    if technique is Technique.TSNE:
        if data is None:
            raise InvalidData("t-SNE needs the data matrix")
        return tsne(data, cfg)
    if technique is Technique.RANDOM:
        n = data.n_rows if data is not None else (distances.n_points if distances else 0)
        return random_embedding(n, cfg)
    if distances is None:
        if data is None:
            raise InvalidData("MDS needs distances or a data matrix")
        distances = pairwise_distances(data)
    if technique is Technique.CLASSICAL_MDS:
        return classical_mds(distances, cfg.target_dim)
    return smacof_mds(distances, cfg, classical_init=classical_init)
