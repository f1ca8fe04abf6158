"""Dense ground truth for small graphs.

Direct solves of both formulations of the PPR system, a dense
eigendecomposition of Q for spectral checks, and first-kind Chebyshev
polynomial values for the acceleration-schedule identities.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

DENSE_SOLVE_MAX_N = 5000
DENSE_EIGS_MAX_N = 500


def _dense_adjacency(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    rows = np.repeat(np.arange(g.n), g.degrees)
    A[rows, g.neighbors] = 1.0
    return A


def dense_ppr(g: Graph, alpha: float, s: int) -> np.ndarray:
    """Solve (I - (1-alpha)(I + A D^{-1})/2) pi = alpha * e_s directly."""
    if g.n > DENSE_SOLVE_MAX_N:
        raise ValueError(f"dense oracle capped at n={DENSE_SOLVE_MAX_N}, got {g.n}")
    A = _dense_adjacency(g)
    lazy = 0.5 * (np.eye(g.n) + A / g.degrees_f[None, :])
    M = np.eye(g.n) - (1.0 - alpha) * lazy
    rhs = np.zeros(g.n)
    rhs[s] = alpha
    return np.linalg.solve(M, rhs)


def dense_Q(g: Graph, alpha: float) -> np.ndarray:
    """Q = I - (1-alpha)/(1+alpha) * D^{-1/2} A D^{-1/2}, dense."""
    inv_sqrt = 1.0 / np.sqrt(g.degrees_f)
    W = _dense_adjacency(g) * inv_sqrt[:, None] * inv_sqrt[None, :]
    return np.eye(g.n) - (1.0 - alpha) / (1.0 + alpha) * W


def dense_ppr_via_Q(g: Graph, alpha: float, s: int) -> np.ndarray:
    """pi via the symmetric route: solve Qx = b, return D^{1/2} x."""
    if g.n > DENSE_SOLVE_MAX_N:
        raise ValueError(f"dense oracle capped at n={DENSE_SOLVE_MAX_N}, got {g.n}")
    b = np.zeros(g.n)
    b[s] = 2.0 * alpha / (1.0 + alpha) / np.sqrt(g.degrees_f[s])
    x = np.linalg.solve(dense_Q(g, alpha), b)
    return np.sqrt(g.degrees_f) * x


def dense_eigs_Q(g: Graph, alpha: float) -> np.ndarray:
    """Ascending eigenvalues of Q (symmetric dense solve)."""
    if g.n > DENSE_EIGS_MAX_N:
        raise ValueError(f"dense eigensolve capped at n={DENSE_EIGS_MAX_N}, got {g.n}")
    return np.linalg.eigvalsh(dense_Q(g, alpha))


def chebyshev_T(t: int, x: float) -> float:
    """First-kind Chebyshev polynomial T_t(x) by the three-term recurrence."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 1.0
    prev, cur = 1.0, float(x)
    for _ in range(t - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur
