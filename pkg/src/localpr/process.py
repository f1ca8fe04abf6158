"""The locally evolving set process engine.

A FIFO ring buffer holds the active nodes together with one epoch sentinel;
dequeuing the sentinel while other entries remain closes epoch t and opens
epoch t+1.  Per-epoch locality metrics are accumulated in EpochTrace:

    vol(S_t)  degree sum of the processed (non-stale) nodes,
    gamma_t   sum_i |r_tilde_{u_i}| at processing time / ||r_tilde^{(t)}||_1,
    cum_ops   running sum of vol(S_t), the machine-independent cost measure.

The performance-critical solvers replicate exactly this queue discipline
inside their compiled kernels; this module is the reference implementation
and the shared trace container.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .problem import Problem, ScaledState, is_active


@dataclass(frozen=True)
class Node:
    u: int


@dataclass(frozen=True)
class EpochBoundary:
    t: int


class _ExhaustedType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Exhausted"


Exhausted = _ExhaustedType()


class EvolvingQueue:
    """FIFO of active nodes with an epoch sentinel and O(1) membership.

    Capacity is n+1 (every node at most once, plus the sentinel).  The
    sentinel id is n.
    """

    def __init__(self, n: int, seeds=()):
        self.n = n
        self._fifo = np.empty(n + 1, dtype=np.int64)
        self._head = 0
        self._size = 0
        self.in_queue = np.zeros(n, dtype=bool)
        self.epoch = 0
        self._sentinel_in = False
        # all seeds form the first batch; the sentinel goes in behind them
        for s in seeds:
            if not self.in_queue[s]:
                self._append(s)
                self.in_queue[s] = True
        if self._size:
            self._append(self.n)
            self._sentinel_in = True

    def __len__(self):
        return self._size - int(self._sentinel_in)

    def _append(self, v: int):
        self._fifo[(self._head + self._size) % (self.n + 1)] = v
        self._size += 1

    def push(self, v: int) -> bool:
        """Enqueue v if not already queued; keeps the sentinel present
        whenever a real node is queued."""
        if self.in_queue[v]:
            return False
        self._append(v)
        self.in_queue[v] = True
        if not self._sentinel_in:
            self._append(self.n)
            self._sentinel_in = True
        return True

    def next(self):
        """Dequeue one entry: Node(u), EpochBoundary(t_new), or Exhausted."""
        if self._size == 0:
            return Exhausted
        u = int(self._fifo[self._head])
        self._head = (self._head + 1) % (self.n + 1)
        self._size -= 1
        if u == self.n:
            if self._size == 0:
                self._sentinel_in = False
                return Exhausted
            self.epoch += 1
            self._append(self.n)
            return EpochBoundary(self.epoch)
        self.in_queue[u] = False
        return Node(u)


def push_if_active(q: EvolvingQueue, p: Problem, state: ScaledState, v: int) -> bool:
    """Enqueue v iff |r_tilde_v| >= c*eps*d_v and v is not queued."""
    if q.in_queue[v] or not is_active(p, state, v):
        return False
    return q.push(v)


class EpochTrace:
    """Per-epoch record of the evolving set process.

    Columns: t, vol (vol(S_t)), size (|S_t|), gamma (gamma_t), l1 and l2 of
    the scaled residual at the start of the epoch, cum_ops.
    """

    def __init__(self, degrees: Optional[np.ndarray] = None):
        self._degrees = degrees
        self._vol, self._size, self._gamma = [], [], []
        self._l1, self._l2, self._cum = [], [], []
        # open-epoch accumulators for the record_processed path
        self._acc_vol = 0
        self._acc_size = 0
        self._acc_num = 0.0

    # --- bulk path used by the solver wrappers -------------------------
    def add_epoch(self, vol: int, size: int, gamma: float, l1: float, l2: float):
        self._vol.append(int(vol))
        self._size.append(int(size))
        self._gamma.append(float(gamma))
        self._l1.append(float(l1))
        self._l2.append(float(l2))
        self._cum.append((self._cum[-1] if self._cum else 0) + int(vol))

    # --- incremental path ----------------------------------------------
    def record(self, t: int, u: int, scaled_residual_at_processing: float):
        if t != len(self._vol):
            raise ValueError(f"recording epoch {t}, current open epoch is {len(self._vol)}")
        self._acc_vol += int(self._degrees[u])
        self._acc_size += 1
        self._acc_num += abs(scaled_residual_at_processing)

    def close_epoch(self, l1: float, l2: float):
        gamma = self._acc_num / l1 if (l1 > 0.0 and self._acc_size > 0) else 0.0
        self.add_epoch(self._acc_vol, self._acc_size, gamma, l1, l2)
        self._acc_vol = 0
        self._acc_size = 0
        self._acc_num = 0.0

    # --- views -----------------------------------------------------------
    @property
    def T(self) -> int:
        return len(self._vol)

    @property
    def vol(self) -> np.ndarray:
        return np.asarray(self._vol, dtype=np.int64)

    @property
    def size(self) -> np.ndarray:
        return np.asarray(self._size, dtype=np.int64)

    @property
    def gamma(self) -> np.ndarray:
        return np.asarray(self._gamma)

    @property
    def l1(self) -> np.ndarray:
        return np.asarray(self._l1)

    @property
    def l2(self) -> np.ndarray:
        return np.asarray(self._l2)

    @property
    def cum_ops(self) -> np.ndarray:
        return np.asarray(self._cum, dtype=np.int64)

    # --- serialization -----------------------------------------------------
    def to_csv(self, path_or_file: Union[str, Path, io.IOBase, None] = None) -> Optional[str]:
        def _write(f):
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["t", "vol", "size", "gamma", "l1", "l2", "cum_ops"])
            for t in range(self.T):
                w.writerow([t, self._vol[t], self._size[t],
                            repr(self._gamma[t]), repr(self._l1[t]),
                            repr(self._l2[t]), self._cum[t]])

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

    def to_json(self, path: Union[str, Path, None] = None) -> Optional[str]:
        doc = {
            "schema_version": 1,
            "epochs": [
                {"t": t, "vol": self._vol[t], "size": self._size[t],
                 "gamma": self._gamma[t], "l1": self._l1[t],
                 "l2": self._l2[t], "cum_ops": self._cum[t]}
                for t in range(self.T)
            ],
            "summary": summarize(self),
        }
        text = json.dumps(doc, indent=2, allow_nan=False)
        if path is None:
            return text
        Path(path).write_text(text)
        return None


def record_processed(trace: EpochTrace, t: int, u: int,
                     scaled_residual_at_processing: float):
    """Accumulate one processed node into epoch t's open accumulators."""
    trace.record(t, u, scaled_residual_at_processing)


def summarize(trace: EpochTrace) -> dict:
    """{T, vol_bar, gamma_bar, total_ops}; means over epochs 0..T-1."""
    T = trace.T
    if T == 0:
        return {"T": 0, "vol_bar": None, "gamma_bar": None, "total_ops": 0}
    return {
        "T": T,
        "vol_bar": float(trace.vol.mean()),
        "gamma_bar": float(trace.gamma.mean()),
        "total_ops": int(trace.cum_ops[-1]),
    }
