"""Symmetric eigendecomposition by cyclic Jacobi rotation sweeps.

Self-contained solver for the dense symmetric matrices classical scaling
produces at this package's scale (hundreds of points). Deterministic: no
pivot randomization, fixed sweep order.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidData, NumericalFailure

__all__ = ["jacobi_eigh"]


def jacobi_eigh(a, tol: float = 1e-10, max_sweeps: int = 60):
    """Eigenvalues and eigenvectors of a symmetric matrix.

    Sweeps over all off-diagonal positions, rotating each away, until the
    off-diagonal Frobenius norm falls below ``tol`` (scaled by the matrix
    norm when that norm exceeds 1). Returns ``(eigvals, eigvecs)`` with
    ``a == eigvecs @ diag(eigvals) @ eigvecs.T``; eigenvalues are unsorted.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidData("Jacobi eigensolver needs a square matrix")
    if not np.isfinite(a).all():
        raise InvalidData("matrix contains non-finite entries")
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-12):
        raise InvalidData("matrix is not symmetric")
    a = (a + a.T) / 2.0

    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return np.diag(a).copy(), v

    tol_eff = tol * max(1.0, float(np.linalg.norm(a)))
    # rotations below this leave the off-diagonal norm under tol_eff even if
    # every remaining element sits exactly at the threshold
    skip = tol_eff / n

    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= tol_eff:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = 0.5 * math.atan2(2.0 * apq, a[q, q] - a[p, p])
                c = math.cos(theta)
                s = math.sin(theta)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                v_p = v[:, p].copy()
                v_q = v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q
    off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
    if off <= tol_eff:
        return np.diag(a).copy(), v
    raise NumericalFailure(
        f"Jacobi sweeps did not converge in {max_sweeps} sweeps (off-norm {off:.3e})"
    )
