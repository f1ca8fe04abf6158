"""Sweep-cut local clustering over an approximate PPR vector.

Nodes are ranked by pi_hat_u / sqrt(d_u) descending (ties by id ascending,
zero entries excluded); the conductance of every prefix is computed
incrementally in O(vol(supp)) total and the first minimizing prefix wins.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import _kernels as K
from .graph import Graph


@dataclass(frozen=True)
class SweepResult:
    ordering: np.ndarray           # ranked node ids (support only)
    best_prefix_len: int
    best_conductance: float
    conductance_curve: np.ndarray  # Phi of prefix k+1 at index k

    @property
    def best_set(self) -> np.ndarray:
        return self.ordering[:self.best_prefix_len]

    def to_csv(self, path_or_file=None) -> Optional[str]:
        def _write(f):
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["prefix_len", "conductance"])
            for k, phi in enumerate(self.conductance_curve, start=1):
                w.writerow([k, repr(float(phi))])

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


def conductance(g: Graph, S: Iterable[int]) -> float:
    """Phi(S) = |boundary(S)| / min(vol(S), 2m - vol(S)) for proper nonempty S."""
    ids = np.asarray(list(S) if not isinstance(S, np.ndarray) else S,
                     dtype=np.int64)
    if ids.size == 0:
        raise ValueError("conductance of the empty set is undefined")
    if np.unique(ids).size != ids.size:
        raise ValueError("duplicate node ids in S")
    if ids.min() < 0 or ids.max() >= g.n:
        raise IndexError(f"node id out of range [0, {g.n})")
    if ids.size == g.n:
        raise ValueError("conductance of the full vertex set is undefined")
    in_S = np.zeros(g.n, dtype=bool)
    in_S[ids] = True
    rows = np.repeat(in_S, g.degrees)
    boundary = int(np.count_nonzero(rows & ~in_S[g.neighbors]))
    vol_S = int(g.degrees[ids].sum())
    return boundary / min(vol_S, 2 * g.m - vol_S)


def sweep_cut(g: Graph, pi_hat: np.ndarray) -> SweepResult:
    """Minimal-conductance prefix of the degree-normalized ranking of pi_hat."""
    pi_hat = np.asarray(pi_hat, dtype=np.float64)
    nz = np.flatnonzero(pi_hat)
    if nz.size == 0:
        raise ValueError("sweep_cut needs at least one nonzero entry")
    key = pi_hat[nz] / np.sqrt(g.degrees_f[nz])
    order = nz[np.lexsort((nz, -key))]
    vols, bnds = K.sweep_prefix_cuts(g.offsets, g.neighbors, order)
    denom = np.minimum(vols, 2 * g.m - vols)
    valid = denom > 0  # excludes only the full-V prefix
    curve = bnds[valid] / denom[valid]
    best = int(np.argmin(curve))  # first minimum wins
    return SweepResult(ordering=order, best_prefix_len=best + 1,
                       best_conductance=float(curve[best]),
                       conductance_curve=curve)
