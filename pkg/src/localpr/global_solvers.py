"""Full-vector baseline solvers sharing the Problem stop condition.

All globals work on the scaled pair (x_tilde, r_tilde) except conjugate
gradient, which runs on the symmetric system in unscaled coordinates and
rescales on exit.  Operation accounting: one sparse matvec per iteration =
2m operations, via the same push-style kernels as the local solvers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from . import _kernels as K
from .local_solvers import Solution, ChebSchedule, _resolve_omega
from .problem import Problem, residual_from_solution

DRIFT_GUARD_EVERY = 64
DRIFT_GUARD_RTOL = 1e-8


class GlobalTrace:
    """Per-iteration norms of the scaled residual plus cumulative ops."""

    def __init__(self):
        self._l1, self._l2, self._linf, self._cum = [], [], [], []

    def add(self, r_tilde: np.ndarray, cum_ops: int):
        self._l1.append(float(np.abs(r_tilde).sum()))
        self._l2.append(float(np.linalg.norm(r_tilde)))
        self._linf.append(float(np.max(np.abs(r_tilde))))
        self._cum.append(int(cum_ops))

    @property
    def T(self) -> int:
        return len(self._l1)

    @property
    def l1(self) -> np.ndarray:
        return np.asarray(self._l1)

    @property
    def l2(self) -> np.ndarray:
        return np.asarray(self._l2)

    @property
    def linf(self) -> np.ndarray:
        return np.asarray(self._linf)

    @property
    def cum_ops(self) -> np.ndarray:
        return np.asarray(self._cum, dtype=np.int64)

    def to_csv(self, path_or_file=None) -> Optional[str]:
        def _write(f):
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["t", "l1", "l2", "linf", "cum_ops"])
            for t in range(self.T):
                w.writerow([t, repr(self._l1[t]), repr(self._l2[t]),
                            repr(self._linf[t]), self._cum[t]])

        if path_or_file is None:
            buf = io.StringIO()
            _write(buf)
            return buf.getvalue()
        if isinstance(path_or_file, (str, Path)):
            with open(path_or_file, "w", newline="") as f:
                _write(f)
            return None
        _write(path_or_file)
        return None

    def to_json(self, path=None) -> Optional[str]:
        doc = {"schema_version": 1,
               "iterations": [
                   {"t": t, "l1": self._l1[t], "l2": self._l2[t],
                    "linf": self._linf[t], "cum_ops": self._cum[t]}
                   for t in range(self.T)]}
        text = json.dumps(doc, indent=2, allow_nan=False)
        if path is None:
            return text
        Path(path).write_text(text)
        return None


def linear_t_max(p: Problem) -> int:
    """Default cap for the linearly converging globals (GD, SOR)."""
    return max(1, 4 * math.ceil(
        (1.0 + p.alpha) / (2.0 * p.alpha) * math.log(2.0 / p.eps)))


def accel_t_max(p: Problem) -> int:
    """Default cap for the accelerated globals (Chebyshev, HB, CG)."""
    sq = math.sqrt(p.alpha)
    return max(1, 4 * math.ceil((1.0 + sq) / (2.0 * sq) * math.log(2.0 / p.eps)) + 8)


def _init_scaled(p: Problem):
    x = np.zeros(p.graph.n)
    r = np.zeros(p.graph.n)
    r[p.source] = p.c
    return x, r


def _finish(p, x, r, trace, converged, matvecs, t0, resid) -> Solution:
    return Solution(pi_hat=x, trace=trace, converged=converged,
                    total_ops=matvecs * 2 * p.graph.m, epochs=matvecs,
                    wall_time=time.perf_counter() - t0, r_tilde=r,
                    residual_snapshots=resid)


def global_gd(p: Problem, t_max: Optional[int] = None,
              record_residuals: bool = False) -> Solution:
    """x += r; r <- (1-alpha)/(1+alpha) * (A D^{-1}) r, one matvec per step."""
    if t_max is None:
        t_max = linear_t_max(p)
    g = p.graph
    t0 = time.perf_counter()
    x, r = _init_scaled(p)
    thr = p.threshold()
    out = np.empty(g.n)
    trace = GlobalTrace()
    trace.add(r, 0)
    resid = [r.copy()] if record_residuals else None
    converged = bool(np.all(np.abs(r) < thr))
    matvecs = 0
    while not converged and matvecs < t_max:
        x += r
        K.push_matvec(g.offsets, g.neighbors, g.degrees_f, r, out)
        r = p.rho * out
        matvecs += 1
        trace.add(r, matvecs * 2 * g.m)
        if record_residuals:
            resid.append(r.copy())
        converged = bool(np.all(np.abs(r) < thr))
    return _finish(p, x, r, trace, converged, matvecs, t0, resid)


def global_sor(p: Problem, omega: Union[str, float],
               t_max: Optional[int] = None,
               record_residuals: bool = False) -> Solution:
    """Forward-substitution SOR sweeps over nodes 0..n-1."""
    w = _resolve_omega(p, omega)
    if t_max is None:
        t_max = linear_t_max(p)
    g = p.graph
    t0 = time.perf_counter()
    x, r = _init_scaled(p)
    thr = p.threshold()
    push_coef = (1.0 - p.alpha) * w / (1.0 + p.alpha)
    trace = GlobalTrace()
    trace.add(r, 0)
    resid = [r.copy()] if record_residuals else None
    converged = bool(np.all(np.abs(r) < thr))
    sweeps = 0
    while not converged and sweeps < t_max:
        K.sor_sweep(g.offsets, g.neighbors, g.degrees_f, x, r, w, push_coef)
        sweeps += 1
        trace.add(r, sweeps * 2 * g.m)
        if record_residuals:
            resid.append(r.copy())
        converged = bool(np.all(np.abs(r) < thr))
    return _finish(p, x, r, trace, converged, sweeps, t0, resid)


def global_chebyshev(p: Problem, t_max: Optional[int] = None,
                     record_residuals: bool = False) -> Solution:
    """Chebyshev semi-iteration: two-term residual recurrence
    r^{(t+1)} = 2 delta_{t+1} W r^{(t)} - delta_t delta_{t+1} r^{(t-1)}
    (W in scaled coordinates is A D^{-1}), with a drift guard recomputing
    b - Qx every 64 iterations to 1e-8 of the initial residual scale."""
    if t_max is None:
        t_max = accel_t_max(p)
    g = p.graph
    t0 = time.perf_counter()
    x_prev, r_prev = _init_scaled(p)  # x^{(0)}, r^{(0)}
    thr = p.threshold()
    out = np.empty(g.n)
    trace = GlobalTrace()
    trace.add(r_prev, 0)
    resid = [r_prev.copy()] if record_residuals else None
    if bool(np.all(np.abs(r_prev) < thr)):
        return _finish(p, x_prev, r_prev, trace, True, 0, t0, resid)
    # t = 1: x^{(1)} = x^{(0)} + r^{(0)}, r^{(1)} = delta_1 * W r^{(0)}
    sched = ChebSchedule.start(p.alpha)
    x = x_prev + r_prev
    K.push_matvec(g.offsets, g.neighbors, g.degrees_f, r_prev, out)
    r = sched.delta_t * out
    matvecs = 1
    trace.add(r, matvecs * 2 * g.m)
    if record_residuals:
        resid.append(r.copy())
    converged = bool(np.all(np.abs(r) < thr))
    guard_scale = p.c  # ||r_tilde^{(0)}||_2 — the problem's residual scale
    while not converged and matvecs < t_max:
        dd = sched.delta_t * sched.delta_next
        two_dnext = 2.0 * sched.delta_next
        K.push_matvec(g.offsets, g.neighbors, g.degrees_f, r, out)
        r_next = two_dnext * out - dd * r_prev
        x_next = x + (1.0 + dd) * r + dd * (x - x_prev)
        x_prev, x = x, x_next
        r_prev, r = r, r_next
        sched.advance()
        matvecs += 1
        trace.add(r, matvecs * 2 * g.m)
        if record_residuals:
            resid.append(r.copy())
        if matvecs % DRIFT_GUARD_EVERY == 0:
            direct = residual_from_solution(p, x)
            drift = float(np.linalg.norm(r - direct))
            if drift > DRIFT_GUARD_RTOL * guard_scale:
                raise RuntimeError(
                    f"chebyshev residual drift {drift:.3e} exceeds "
                    f"{DRIFT_GUARD_RTOL:.0e} * {guard_scale:.3e} at t={matvecs}")
        converged = bool(np.all(np.abs(r) < thr))
    return _finish(p, x, r, trace, converged, matvecs, t0, resid)


def global_hb(p: Problem, t_max: Optional[int] = None,
              record_residuals: bool = False) -> Solution:
    """Heavy-ball with the zero-initialization practical case
    (x^{(1)} = x^{(0)} = 0, r^{(1)} = r^{(0)} = b):
    r^{(t+1)} = 2 atilde W r^{(t)} - atilde^2 r^{(t-1)}."""
    if t_max is None:
        t_max = accel_t_max(p)
    g = p.graph
    t0 = time.perf_counter()
    x_prev, r_prev = _init_scaled(p)  # x^{(0)}, r^{(0)}
    thr = p.threshold()
    out = np.empty(g.n)
    trace = GlobalTrace()
    trace.add(r_prev, 0)
    resid = [r_prev.copy()] if record_residuals else None
    if bool(np.all(np.abs(r_prev) < thr)):
        return _finish(p, x_prev, r_prev, trace, True, 0, t0, resid)
    x = x_prev.copy()       # x^{(1)} = 0
    r = r_prev.copy()       # r^{(1)} = b
    trace.add(r, 0)
    if record_residuals:
        resid.append(r.copy())
    at = p.atilde
    at2 = at * at
    matvecs = 0
    converged = False
    while not converged and matvecs < t_max:
        K.push_matvec(g.offsets, g.neighbors, g.degrees_f, r, out)
        r_next = 2.0 * at * out - at2 * r_prev
        x_next = x + (1.0 + at2) * r + at2 * (x - x_prev)
        x_prev, x = x, x_next
        r_prev, r = r, r_next
        matvecs += 1
        trace.add(r, matvecs * 2 * g.m)
        if record_residuals:
            resid.append(r.copy())
        converged = bool(np.all(np.abs(r) < thr))
    return _finish(p, x, r, trace, converged, matvecs, t0, resid)


def conjugate_gradient(p: Problem, t_max: Optional[int] = None,
                       record_residuals: bool = False) -> Solution:
    """Standard CG on the SPD system Qx = b in unscaled coordinates;
    the stop condition and reported vectors match the other solvers."""
    if t_max is None:
        t_max = accel_t_max(p)
    g = p.graph
    t0 = time.perf_counter()
    sqrt_d = np.sqrt(g.degrees_f)
    inv_sqrt = 1.0 / sqrt_d
    b = np.zeros(g.n)
    b[p.source] = p.c * inv_sqrt[p.source]
    x = np.zeros(g.n)
    r = b.copy()
    thr_unscaled = p.c * p.eps * sqrt_d  # |r_u| < c*eps*sqrt(d_u)
    out = np.empty(g.n)
    trace = GlobalTrace()
    trace.add(sqrt_d * r, 0)
    resid = [r.copy()] if record_residuals else None
    converged = bool(np.all(np.abs(r) < thr_unscaled))
    pdir = r.copy()
    rr = float(r @ r)
    matvecs = 0
    while not converged and matvecs < t_max:
        K.sym_matvec(g.offsets, g.neighbors, inv_sqrt, pdir, out)
        q = pdir - p.rho * out
        pAp = float(pdir @ q)
        if pAp <= 0.0:
            break  # numerical breakdown; Q is SPD so this is defensive only
        step = rr / pAp
        x += step * pdir
        r -= step * q
        matvecs += 1
        trace.add(sqrt_d * r, matvecs * 2 * g.m)
        if record_residuals:
            resid.append(r.copy())
        converged = bool(np.all(np.abs(r) < thr_unscaled))
        rr_new = float(r @ r)
        if rr_new == 0.0:
            converged = True
            break
        pdir = r + (rr_new / rr) * pdir
        rr = rr_new
    return _finish(p, sqrt_d * x, sqrt_d * r, trace, converged, matvecs, t0, resid)
