"""One-sided (Hestenes) Jacobi SVD for small dense matrices.

Orthogonalises the columns of A by plane rotations applied on the right,
A V = U Σ. Small singular values come out with high relative accuracy,
which matters when the decision is whether σ_min is numerically zero.
"""

from __future__ import annotations

import numpy as np


def jacobi_svd(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(s, v)`` with singular values descending and ``v[:, i]`` the
    right singular vector for ``s[i]``."""
    w = np.array(a, dtype=float, copy=True)
    if w.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    n = w.shape[1]
    # work at unit scale so squared norms neither overflow nor underflow
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0 or not np.isfinite(scale):
        scale = 1.0
    w /= scale
    v = np.eye(n)
    # columns below this squared norm are rounding noise of an exact dependence
    negligible = (np.finfo(float).eps * np.linalg.norm(w)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = float(w[:, p] @ w[:, p])
                beta = float(w[:, q] @ w[:, q])
                gamma = float(w[:, p] @ w[:, q])
                if min(alpha, beta) <= negligible or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                wp = w[:, p].copy()
                w[:, p] = c * wp - s * w[:, q]
                w[:, q] = s * wp + c * w[:, q]
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            break
    else:
        raise RuntimeError("Jacobi SVD did not converge")
    sv = np.linalg.norm(w, axis=0) * scale
    order = np.argsort(-sv, kind="stable")
    return sv[order], v[:, order]


def singular_values(a: np.ndarray) -> np.ndarray:
    return jacobi_svd(a)[0]
