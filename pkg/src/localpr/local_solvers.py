"""The five local solvers driven by the evolving-set queue.

Each wrapper owns the dense state arrays and the queue buffers, calls the
compiled epoch kernel in a loop, records one EpochTrace row per epoch, and
assembles a Solution.  Optional recording flags capture per-epoch solution
snapshots, residual snapshots, and processed-node sequences for the
trajectory-equality and set-evolution tests; they are off on the fast path.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from . import _kernels as K
from .problem import Problem, init_state
from .process import EpochTrace, summarize


@dataclass
class Solution:
    """Result of one solver run.

    pi_hat: the approximation (equals the scaled x_tilde).
    trace: per-epoch (local) or per-iteration (global) record.
    converged: queue exhausted / stop condition met before the cap.
    total_ops: sum of degrees of processed nodes (locals) or
        matvecs * 2m (globals) — the machine-independent cost.
    epochs: T.
    wall_time: seconds, informational only.
    r_tilde: final scaled residual as maintained by the solver.
    """

    pi_hat: np.ndarray
    trace: object
    converged: bool
    total_ops: int
    epochs: int
    wall_time: float
    r_tilde: np.ndarray
    extras: dict = field(default_factory=dict)
    solution_snapshots: Optional[List[np.ndarray]] = None
    residual_snapshots: Optional[List[np.ndarray]] = None
    processed_sets: Optional[List[np.ndarray]] = None

    @property
    def i_t_size(self) -> int:
        """|supp(r_tilde)| at termination."""
        return int(np.count_nonzero(self.r_tilde))

    def summary(self) -> dict:
        if hasattr(self.trace, "gamma"):
            s = summarize(self.trace)
        else:  # per-iteration global trace
            s = {"T": self.epochs, "total_ops": self.total_ops}
        s["i_t_size"] = self.i_t_size
        s["l1_end"] = float(np.abs(self.r_tilde).sum())
        s["l1_start"] = float(self.trace.l1[0]) if self.trace.T else s["l1_end"]
        return s


@dataclass
class ChebSchedule:
    """Ratios of consecutive Chebyshev values at (1+alpha)/(1-alpha).

    State at time t >= 1: delta_t, delta_next = delta_{t+1}, and the running
    product delta_{1:t} = 1 / T_t((1+alpha)/(1-alpha)).
    """

    delta_t: float
    delta_next: float
    product: float
    _x2: float  # 2(1+alpha)/(1-alpha)

    @classmethod
    def start(cls, alpha: float) -> "ChebSchedule":
        d1 = (1.0 - alpha) / (1.0 + alpha)
        x2 = 2.0 * (1.0 + alpha) / (1.0 - alpha)
        return cls(delta_t=d1, delta_next=1.0 / (x2 - d1), product=d1, _x2=x2)

    def advance(self) -> None:
        self.delta_t = self.delta_next
        self.delta_next = 1.0 / (self._x2 - self.delta_t)
        self.product *= self.delta_t


def default_t_max(p: Problem) -> int:
    """ceil((1+sqrt(alpha))/sqrt(alpha) * ln(2/eps)) * 4, at least 1."""
    sq = math.sqrt(p.alpha)
    return max(1, 4 * math.ceil((1.0 + sq) / sq * math.log(2.0 / p.eps)))


def _queue_arrays(n: int, seed: int):
    fifo = np.empty(n + 1, dtype=np.int64)
    in_q = np.zeros(n, dtype=np.uint8)
    qs = np.zeros(2, dtype=np.int64)
    fifo[0] = seed
    qs[1] = 1
    in_q[seed] = 1
    return fifo, in_q, qs


def _trivial_solution(p: Problem) -> Solution:
    st = init_state(p)
    return Solution(pi_hat=st.x_tilde, trace=EpochTrace(p.graph.degrees),
                    converged=True, total_ops=0, epochs=0, wall_time=0.0,
                    r_tilde=st.r_tilde)


def _source_inactive(p: Problem) -> bool:
    # initial state has all mass on s: active iff c >= c*eps*d_s
    return p.eps * p.graph.degrees_f[p.source] > 1.0


def _resolve_omega(p: Problem, omega: Union[str, float]) -> float:
    if omega == "opt":
        return p.omega_star
    w = float(omega)
    if not 0.0 < w < 2.0:
        raise ValueError(f"omega={w} outside (0, 2)")
    return w


def appr(p: Problem, record_states: bool = False,
         record_sets: bool = False) -> Solution:
    """Residual-push solver on the unsymmetric system (p, z) with
    z <- e_s, push p_u += alpha*z_u, activity test z_u >= eps*d_u.

    Identical in exact arithmetic to loc_sor with omega=(1+alpha)/2; kept on
    the (p, z) pair so its classical invariants (z >= 0, l1 strictly
    decreasing) are observable directly.
    """
    if _source_inactive(p):
        return _trivial_solution(p)
    g = p.graph
    t0 = time.perf_counter()
    pvec = np.zeros(g.n)
    z = np.zeros(g.n)
    z[p.source] = 1.0
    fifo, in_q, qs = _queue_arrays(g.n, p.source)
    snodes = np.empty(g.n, dtype=np.int64)
    trace = EpochTrace(g.degrees)
    states = [] if record_states else None
    sets = [] if record_sets else None
    min_nu = np.inf
    min_zw = np.inf
    while qs[1] > 0:
        l1 = float(np.abs(z).sum())
        l2 = float(np.linalg.norm(z))
        processed, vol, gnum, mnu, mzw = K.appr_epoch(
            g.offsets, g.neighbors, g.degrees_f, pvec, z,
            fifo, in_q, qs, snodes, p.alpha, p.eps)
        gamma = gnum / l1 if processed else 0.0
        trace.add_epoch(vol, processed, gamma, p.c * l1, p.c * l2)
        min_nu = min(min_nu, mnu)
        min_zw = min(min_zw, mzw)
        if record_states:
            states.append(pvec.copy())
        if record_sets:
            sets.append(snodes[:processed].copy())
    supp = pvec != 0.0
    sol = Solution(
        pi_hat=pvec, trace=trace, converged=True,
        total_ops=int(trace.cum_ops[-1]) if trace.T else 0,
        epochs=trace.T, wall_time=time.perf_counter() - t0,
        r_tilde=p.c * z,
        extras={"min_push_residual": float(min_nu),
                "min_z_written": float(min_zw),
                "supp_vol": int(g.degrees[supp].sum())},
        solution_snapshots=states, processed_sets=sets)
    return sol


def loc_gs_sor_m(p: Problem, omega: Union[str, float],
                 record_states: bool = False,
                 record_sets: bool = False) -> Solution:
    """Relaxed local coordinate descent on M pi = e_s (M_uu = (1+alpha)/(2 alpha)).

    With omega = (1+alpha)/2 the push sequence coincides with appr().
    """
    w = _resolve_omega(p, omega)
    if _source_inactive(p):
        return _trivial_solution(p)
    g = p.graph
    t0 = time.perf_counter()
    pvec = np.zeros(g.n)
    z = np.zeros(g.n)
    z[p.source] = 1.0
    fifo, in_q, qs = _queue_arrays(g.n, p.source)
    snodes = np.empty(g.n, dtype=np.int64)
    trace = EpochTrace(g.degrees)
    states = [] if record_states else None
    sets = [] if record_sets else None
    while qs[1] > 0:
        l1 = float(np.abs(z).sum())
        l2 = float(np.linalg.norm(z))
        processed, vol, gnum = K.gs_sor_m_epoch(
            g.offsets, g.neighbors, g.degrees_f, pvec, z,
            fifo, in_q, qs, snodes, p.alpha, w, p.eps)
        gamma = gnum / l1 if processed else 0.0
        trace.add_epoch(vol, processed, gamma, p.c * l1, p.c * l2)
        if record_states:
            states.append(pvec.copy())
        if record_sets:
            sets.append(snodes[:processed].copy())
    return Solution(
        pi_hat=pvec, trace=trace, converged=True,
        total_ops=int(trace.cum_ops[-1]) if trace.T else 0,
        epochs=trace.T, wall_time=time.perf_counter() - t0,
        r_tilde=p.c * z,
        solution_snapshots=states, processed_sets=sets)


def loc_sor(p: Problem, omega: Union[str, float],
            record_states: bool = False, record_sets: bool = False,
            record_residuals: bool = False) -> Solution:
    """Scaled-coordinate local SOR: x_u += omega*r_u, r_u -= omega*r_u,
    neighbors gain (1-alpha)*omega/((1+alpha) d_u) * r_u."""
    w = _resolve_omega(p, omega)
    if _source_inactive(p):
        return _trivial_solution(p)
    g = p.graph
    t0 = time.perf_counter()
    x = np.zeros(g.n)
    r = np.zeros(g.n)
    r[p.source] = p.c
    fifo, in_q, qs = _queue_arrays(g.n, p.source)
    snodes = np.empty(g.n, dtype=np.int64)
    push_coef = (1.0 - p.alpha) * w / (1.0 + p.alpha)
    thr = p.c * p.eps
    trace = EpochTrace(g.degrees)
    states = [] if record_states else None
    sets = [] if record_sets else None
    resid = [r.copy()] if record_residuals else None
    while qs[1] > 0:
        l1 = float(np.abs(r).sum())
        l2 = float(np.linalg.norm(r))
        processed, vol, gnum = K.sor_epoch(
            g.offsets, g.neighbors, g.degrees_f, x, r,
            fifo, in_q, qs, snodes, w, push_coef, thr)
        gamma = gnum / l1 if processed else 0.0
        trace.add_epoch(vol, processed, gamma, l1, l2)
        if record_states:
            states.append(x.copy())
        if record_sets:
            sets.append(snodes[:processed].copy())
        if record_residuals:
            resid.append(r.copy())
    return Solution(
        pi_hat=x, trace=trace, converged=True,
        total_ops=int(trace.cum_ops[-1]) if trace.T else 0,
        epochs=trace.T, wall_time=time.perf_counter() - t0,
        r_tilde=r, solution_snapshots=states, processed_sets=sets,
        residual_snapshots=resid)


def loc_gd(p: Problem, record_sets: bool = False) -> Solution:
    """Epoch-batched local gradient descent (Algo-4 style): drain the whole
    queue with x += r snapshots, then push; gamma uses epoch-start values."""
    if _source_inactive(p):
        return _trivial_solution(p)
    g = p.graph
    t0 = time.perf_counter()
    x = np.zeros(g.n)
    r = np.zeros(g.n)
    r[p.source] = p.c
    fifo, in_q, qs = _queue_arrays(g.n, p.source)
    snodes = np.empty(g.n, dtype=np.int64)
    svals = np.empty(g.n)
    thr = p.c * p.eps
    trace = EpochTrace(g.degrees)
    sets = [] if record_sets else None
    while qs[1] > 0:
        l1 = float(np.abs(r).sum())
        l2 = float(np.linalg.norm(r))
        processed, vol, gnum = K.gd_epoch(
            g.offsets, g.neighbors, g.degrees_f, x, r,
            fifo, in_q, qs, snodes, svals, p.rho, thr)
        gamma = gnum / l1 if processed else 0.0
        trace.add_epoch(vol, processed, gamma, l1, l2)
        if record_sets:
            sets.append(snodes[:processed].copy())
    return Solution(
        pi_hat=x, trace=trace, converged=True,
        total_ops=int(trace.cum_ops[-1]) if trace.T else 0,
        epochs=trace.T, wall_time=time.perf_counter() - t0,
        r_tilde=r, processed_sets=sets)


def _loc_momentum(p: Problem, t_max: Optional[int], chebyshev: bool,
                  force_full_support: bool, record_residuals: bool) -> Solution:
    if t_max is None:
        t_max = default_t_max(p)
    if t_max < 1:
        raise ValueError(f"t_max={t_max} must be >= 1")
    if _source_inactive(p):
        return _trivial_solution(p)
    g = p.graph
    t0 = time.perf_counter()
    x = np.zeros(g.n)
    r = np.zeros(g.n)
    r[p.source] = p.c
    mom = np.zeros(g.n)
    fifo, in_q, qs = _queue_arrays(g.n, p.source)
    snodes = np.empty(g.n, dtype=np.int64)
    svals = np.empty(g.n)
    pnodes = np.empty(g.n, dtype=np.int64)
    pvals = np.empty(g.n)
    plen = 0
    thr = p.c * p.eps
    thr_vec = p.threshold()
    at2 = p.atilde ** 2
    sched: Optional[ChebSchedule] = None
    trace = EpochTrace(g.degrees)
    resid = [r.copy()] if record_residuals else None
    converged = False
    while trace.T < t_max:
        if force_full_support:
            if bool(np.all(np.abs(r) < thr_vec)):
                converged = True
                break
        elif qs[1] == 0:
            converged = True
            break
        if chebyshev:
            if sched is None and trace.T >= 1:
                sched = ChebSchedule.start(p.alpha)
            if sched is None:  # epoch 0: Delta = r_{S_0}
                coef_m = 0.0
            else:
                coef_m = sched.delta_t * sched.delta_next
                sched.advance()
            coef_r = 1.0 + coef_m
        else:
            coef_m = at2
            coef_r = 1.0 + at2
        l1 = float(np.abs(r).sum())
        l2 = float(np.linalg.norm(r))
        processed, vol, gnum, plen = K.mom_epoch(
            g.offsets, g.neighbors, g.degrees_f, x, r, mom,
            fifo, in_q, qs, snodes, svals, pnodes, pvals, plen,
            coef_r, coef_m, p.rho, thr, force_full_support)
        gamma = gnum / l1 if (processed and l1 > 0.0) else 0.0
        trace.add_epoch(vol, processed, gamma, l1, l2)
        if record_residuals:
            resid.append(r.copy())
    else:
        converged = (bool(np.all(np.abs(r) < thr_vec))
                     if force_full_support else qs[1] == 0)
    return Solution(
        pi_hat=x, trace=trace, converged=converged,
        total_ops=int(trace.cum_ops[-1]) if trace.T else 0,
        epochs=trace.T, wall_time=time.perf_counter() - t0,
        r_tilde=r, residual_snapshots=resid)


def loc_ch(p: Problem, t_max: Optional[int] = None,
           force_full_support: bool = False,
           record_residuals: bool = False) -> Solution:
    """Local Chebyshev: batch step Delta = (1+delta_t delta_{t+1}) r
    + delta_t delta_{t+1} * momentum on the active set; epoch 0 uses
    Delta = r_{S_0}."""
    return _loc_momentum(p, t_max, chebyshev=True,
                         force_full_support=force_full_support,
                         record_residuals=record_residuals)


def loc_hb(p: Problem, t_max: Optional[int] = None,
           force_full_support: bool = False,
           record_residuals: bool = False) -> Solution:
    """Local heavy-ball: constant coefficients (1+atilde^2, atilde^2),
    zero initial momentum."""
    return _loc_momentum(p, t_max, chebyshev=False,
                         force_full_support=force_full_support,
                         record_residuals=record_residuals)
