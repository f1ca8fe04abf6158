"""Runtime-bound expressions evaluated from problem constants and run traces.

All bounds use the explicit constants of the underlying inequalities (no
asymptotic slack), so tests can assert them against measured operation
counts.
"""

from __future__ import annotations

import math

import numpy as np

from .local_solvers import ChebSchedule
from .problem import Problem


def anderson_bound(p: Problem) -> float:
    """Degree-sum bound 1/(alpha*eps) for the residual-push solver."""
    return 1.0 / (p.alpha * p.eps)


def evolving_upper_bound(p: Problem, summary: dict) -> float:
    """(1+alpha)/2 * min{ 1/(alpha*eps),
                          vol_bar/(alpha*gamma_bar) * ln(C/eps) }
    with C = (1+alpha)/((1-alpha)*|I_T|), |I_T| = |supp(r_tilde^{(T)})|.

    With T = 0, gamma_bar = 0, or empty final support, only the first branch
    is defined.
    """
    branches = [1.0 / (p.alpha * p.eps)]
    gamma_bar = summary.get("gamma_bar")
    vol_bar = summary.get("vol_bar")
    i_t = summary.get("i_t_size", 0)
    if summary.get("T", 0) > 0 and gamma_bar and vol_bar is not None and i_t > 0:
        C = (1.0 + p.alpha) / ((1.0 - p.alpha) * i_t)
        branches.append(vol_bar / (p.alpha * gamma_bar) * math.log(C / p.eps))
    return (1.0 + p.alpha) / 2.0 * min(branches)


def evolving_lower_bound(p: Problem, summary: dict,
                         l1_start: float, l1_end: float) -> float:
    """(1+alpha)/2 * vol_bar/(alpha*gamma_bar) * (1 - l1_end/l1_start)."""
    gamma_bar = summary.get("gamma_bar")
    vol_bar = summary.get("vol_bar")
    if summary.get("T", 0) == 0 or not gamma_bar or l1_start == 0.0:
        return 0.0
    return ((1.0 + p.alpha) / 2.0 * vol_bar / (p.alpha * gamma_bar)
            * (1.0 - l1_end / l1_start))


def chebyshev_iteration_bound(p: Problem) -> int:
    """ceil((1+sqrt(alpha))/(2 sqrt(alpha)) * ln(2/eps)), clamped at 0."""
    sq = math.sqrt(p.alpha)
    return max(0, math.ceil((1.0 + sq) / (2.0 * sq) * math.log(2.0 / p.eps)))


def chebyshev_decay_proxy(p: Problem, trace) -> np.ndarray:
    """Descriptive diagnostic: l2[t] / (delta_{1:t} * l2[0]) per epoch t >= 1.

    A value near or below 1 indicates the accelerated contraction held at
    epoch t; no guarantee is attached (the sufficient assumption behind the
    accelerated local rate is not checkable at run time).
    """
    l2 = trace.l2
    if len(l2) == 0 or l2[0] == 0.0:
        return np.empty(0)
    sched = ChebSchedule.start(p.alpha)
    out = np.empty(len(l2) - 1)
    for t in range(1, len(l2)):
        out[t - 1] = l2[t] / (sched.product * l2[0])
        sched.advance()
    return out
