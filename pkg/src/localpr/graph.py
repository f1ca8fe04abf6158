"""Compressed sparse adjacency for undirected simple graphs.

Input graphs are plain-text edge lists (two integers per line, ``#`` comments).
Preprocessing: undirect, deduplicate, drop self-loops, keep the largest
connected component, relabel nodes to a dense ``0..n-1`` range.  The original
node ids survive in ``Graph.remap``.
"""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

CACHE_ENV_VAR = "LOCALPR_CACHE_DIR"
_CACHE_MAGIC = b"LPRG"
_CACHE_VERSION = 1


class GraphParseError(ValueError):
    """Malformed edge-list input."""


class EmptyGraphError(ValueError):
    """No usable edges remain after preprocessing."""


@dataclass(frozen=True)
class PreprocessOptions:
    cache_dir: Optional[Union[str, Path]] = None  # None -> $LOCALPR_CACHE_DIR


@dataclass(frozen=True)
class Graph:
    """Immutable CSR adjacency of a connected undirected simple graph.

    Fields:
        n: node count.
        m: undirected edge count.
        offsets: int64[n+1] CSR row offsets.
        neighbors: int64[2m] concatenated sorted neighbor lists.
        degrees: int64[n], degrees[u] = offsets[u+1] - offsets[u].
        remap: int64[n], remap[u] = original input id of node u.
    """

    n: int
    m: int
    offsets: np.ndarray
    neighbors: np.ndarray
    degrees: np.ndarray
    remap: np.ndarray
    # float64 copy of degrees, precomputed for the numeric kernels
    degrees_f: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.degrees_f is None:
            object.__setattr__(self, "degrees_f", self.degrees.astype(np.float64))
        for arr in (self.offsets, self.neighbors, self.degrees,
                    self.remap, self.degrees_f):
            arr.setflags(write=False)

    @property
    def vol_total(self) -> int:
        """vol(V) = 2m."""
        return 2 * self.m


def from_edges(edges: np.ndarray) -> Graph:
    """Build a Graph from a (k, 2) integer array of (possibly messy) edges.

    Applies the full preprocessing pipeline; ids need not be dense.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size:
        edges = edges[edges[:, 0] != edges[:, 1]]  # drop self-loops
    if edges.size == 0:
        raise EmptyGraphError("no edges remain after preprocessing")

    # dense provisional ids, ascending by original id
    nodes, flat = np.unique(edges, return_inverse=True)
    e = flat.reshape(-1, 2)
    lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
    key = lo.astype(np.int64) * len(nodes) + hi
    e = np.stack([lo, hi], axis=1)[np.unique(key, return_index=True)[1]]

    adj = sp.csr_matrix(
        (np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])),
        shape=(len(nodes), len(nodes)),
    )
    n_comp, labels = connected_components(adj, directed=False)
    if n_comp > 1:
        sizes = np.bincount(labels, minlength=n_comp)
        # ties between equal-size components: smallest original node id wins
        min_orig = np.full(n_comp, np.iinfo(np.int64).max)
        np.minimum.at(min_orig, labels, nodes)
        best = max(range(n_comp), key=lambda c: (sizes[c], -min_orig[c]))
        keep = labels == best
        e = e[keep[e[:, 0]] & keep[e[:, 1]]]
        remap = nodes[keep]
        # compress to the kept nodes (ascending original-id order preserved)
        new_id = np.cumsum(keep) - 1
        e = new_id[e]
    else:
        remap = nodes

    n = len(remap)
    m = len(e)
    both = np.concatenate([e, e[:, ::-1]])
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(both[:, 0], minlength=n), out=offsets[1:])
    neighbors = np.ascontiguousarray(both[:, 1])
    degrees = np.diff(offsets)
    return Graph(n=n, m=m, offsets=offsets, neighbors=neighbors,
                 degrees=degrees, remap=remap)


def _parse_edge_lines(data: bytes) -> np.ndarray:
    pairs = []
    for ln, raw in enumerate(data.splitlines(), start=1):
        line = raw.decode("utf-8", errors="replace").strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphParseError(
                f"line {ln}: expected two integers, got {len(toks)} fields "
                f"(weighted edges are not supported): {line!r}")
        try:
            pairs.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise GraphParseError(f"line {ln}: non-integer node id: {line!r}") from None
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def load_edge_list(source, options: Optional[PreprocessOptions] = None) -> Graph:
    """Load a graph from an edge-list path, file object, or byte stream."""
    options = options or PreprocessOptions()
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:  # file-like
        data = source.read()
        if isinstance(data, str):
            data = data.encode()

    cache_dir = options.cache_dir or os.environ.get(CACHE_ENV_VAR)
    cache_path = None
    if cache_dir:
        digest = hashlib.sha256(data).hexdigest()[:32]
        cache_path = Path(cache_dir) / f"{digest}.lprg"
        if cache_path.is_file():
            return load_cache(cache_path)

    g = from_edges(_parse_edge_lines(data))
    if cache_path is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        save_cache(g, cache_path)
    return g


def save_cache(g: Graph, path: Union[str, Path]) -> None:
    """Serialize g: magic "LPRG", version u32, n u64, m u64, then the
    offsets, neighbors and remap arrays as little-endian int64."""
    buf = io.BytesIO()
    buf.write(_CACHE_MAGIC)
    buf.write(np.array([_CACHE_VERSION], dtype="<u4").tobytes())
    buf.write(np.array([g.n, g.m], dtype="<u8").tobytes())
    for arr in (g.offsets, g.neighbors, g.remap):
        buf.write(arr.astype("<i8").tobytes())
    Path(path).write_bytes(buf.getvalue())


def load_cache(path: Union[str, Path]) -> Graph:
    data = Path(path).read_bytes()
    if data[:4] != _CACHE_MAGIC:
        raise ValueError(f"{path}: not a LPRG cache file")
    version = int(np.frombuffer(data, "<u4", count=1, offset=4)[0])
    if version != _CACHE_VERSION:
        raise ValueError(f"{path}: unsupported cache version {version}")
    n = int(np.frombuffer(data, "<u8", count=1, offset=8)[0])
    m = int(np.frombuffer(data, "<u8", count=1, offset=16)[0])
    off = 24
    offsets = np.frombuffer(data, "<i8", count=n + 1, offset=off).astype(np.int64)
    off += 8 * (n + 1)
    neighbors = np.frombuffer(data, "<i8", count=2 * m, offset=off).astype(np.int64)
    off += 8 * 2 * m
    remap = np.frombuffer(data, "<i8", count=n, offset=off).astype(np.int64)
    return Graph(n=n, m=m, offsets=offsets, neighbors=neighbors,
                 degrees=np.diff(offsets), remap=remap)


def volume(g: Graph, S: Iterable[int]) -> int:
    """vol(S) = sum of degrees over S."""
    ids = np.fromiter(S, dtype=np.int64) if not isinstance(S, np.ndarray) \
        else S.astype(np.int64)
    if ids.size == 0:
        return 0
    if ids.min() < 0 or ids.max() >= g.n:
        raise IndexError(f"node id out of range [0, {g.n})")
    return int(g.degrees[ids].sum())


def neighbors(g: Graph, u: int) -> np.ndarray:
    """Sorted neighbor list of u."""
    if not 0 <= u < g.n:
        raise IndexError(f"node id {u} out of range [0, {g.n})")
    return g.neighbors[g.offsets[u]:g.offsets[u + 1]]
