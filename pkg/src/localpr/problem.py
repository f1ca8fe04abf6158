"""Problem definition: the SPD system Q x = b in scaled coordinates.

All solvers store the scaled pair (x_tilde, r_tilde) = (D^{1/2} x, D^{1/2} r).
In these coordinates b becomes c * e_s with c = 2*alpha/(1+alpha), the
operator D^{1/2} Q D^{-1/2} becomes I - (1-alpha)/(1+alpha) * A D^{-1}, the
returned approximation is pi_hat = x_tilde itself, and the sup-norm stop
condition ||D^{-1/2} r||_inf <= c*eps turns into the per-node activity test
|r_tilde_u| >= c * eps * d_u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

ALPHA_MIN = 1e-6


@dataclass(frozen=True)
class Problem:
    """theta = (G, alpha, eps, s) plus derived constants."""

    graph: Graph
    alpha: float
    eps: float
    source: int
    c: float = field(init=False)            # 2*alpha/(1+alpha)
    atilde: float = field(init=False)        # (1-sqrt(alpha))/(1+sqrt(alpha))
    omega_star: float = field(init=False)    # optimal SOR relaxation

    def __post_init__(self):
        a = self.alpha
        if not (ALPHA_MIN <= a <= 1.0 - ALPHA_MIN):
            raise ValueError(f"alpha={a} outside [{ALPHA_MIN}, {1.0 - ALPHA_MIN}]")
        if not self.eps > 0.0:
            raise ValueError(f"eps={self.eps} must be positive")
        if not 0 <= self.source < self.graph.n:
            raise ValueError(f"source {self.source} out of range [0, {self.graph.n})")
        object.__setattr__(self, "c", 2.0 * a / (1.0 + a))
        sq = math.sqrt(a)
        object.__setattr__(self, "atilde", (1.0 - sq) / (1.0 + sq))
        object.__setattr__(
            self, "omega_star",
            2.0 / (1.0 + math.sqrt(1.0 - (1.0 - a) ** 2 / (1.0 + a) ** 2)))

    @property
    def rho(self) -> float:
        """(1-alpha)/(1+alpha), the off-diagonal weight of the scaled system."""
        return (1.0 - self.alpha) / (1.0 + self.alpha)

    def threshold(self) -> np.ndarray:
        """Per-node activity threshold c * eps * d_u."""
        return self.c * self.eps * self.graph.degrees_f


@dataclass
class ScaledState:
    """Scaled solution/residual pair; x_tilde doubles as the running pi_hat."""

    x_tilde: np.ndarray
    r_tilde: np.ndarray


def init_state(p: Problem) -> ScaledState:
    """x_tilde = 0, r_tilde = c * e_s."""
    x = np.zeros(p.graph.n)
    r = np.zeros(p.graph.n)
    r[p.source] = p.c
    return ScaledState(x_tilde=x, r_tilde=r)


def is_active(p: Problem, state: ScaledState, u: int) -> bool:
    """|r_tilde_u| >= c * eps * d_u."""
    return abs(state.r_tilde[u]) >= p.c * p.eps * p.graph.degrees_f[u]


def is_converged(p: Problem, state: ScaledState) -> bool:
    """True iff no node is active."""
    return bool(np.all(np.abs(state.r_tilde) < p.threshold()))


def scaled_matvec(g: Graph, y: np.ndarray) -> np.ndarray:
    """(A D^{-1}) y — the scaled-coordinate form of D^{-1/2} A D^{-1/2}."""
    per_edge = np.repeat(y / g.degrees_f, g.degrees)
    return np.bincount(g.neighbors, weights=per_edge, minlength=g.n)


def residual_from_solution(p: Problem, x_tilde: np.ndarray) -> np.ndarray:
    """Exact scaled residual r_tilde = c*e_s - x_tilde + rho * (A D^{-1}) x_tilde.

    Used to cross-check the incrementally maintained residuals of solvers.
    """
    r = -x_tilde + p.rho * scaled_matvec(p.graph, x_tilde)
    r[p.source] += p.c
    return r


def error_vs_oracle(p: Problem, pi_hat: np.ndarray, pi_star: np.ndarray) -> float:
    """Degree-normalized sup error max_u |pi_hat_u - pi_star_u| / d_u."""
    return float(np.max(np.abs(pi_hat - pi_star) / p.graph.degrees_f))
