"""Edge-list parsing, preprocessing pipeline, CSR invariants, binary cache."""

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localpr.graph import (EmptyGraphError, Graph, GraphParseError,
                           PreprocessOptions, from_edges, load_cache,
                           load_edge_list, neighbors, save_cache, volume)


# --- parsing ----------------------------------------------------------------

def test_parse_basic_bytes():
    g = load_edge_list(b"# comment\n0 1\n\n1 2\n")
    assert g.n == 3 and g.m == 2


def test_parse_file_object():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    assert g.n == 3 and g.m == 2


def test_parse_rejects_weighted_with_line_number():
    with pytest.raises(GraphParseError, match=r"line 2.*weighted"):
        load_edge_list(b"0 1\n1 2 0.5\n")


def test_parse_rejects_non_integer_with_line_number():
    with pytest.raises(GraphParseError, match=r"line 3.*non-integer"):
        load_edge_list(b"0 1\n# x\na b\n")


def test_parse_single_field_rejected():
    with pytest.raises(GraphParseError, match="expected two integers"):
        load_edge_list(b"7\n")


def test_empty_input_raises():
    with pytest.raises(EmptyGraphError):
        load_edge_list(b"# nothing\n")


def test_only_self_loops_raises():
    with pytest.raises(EmptyGraphError):
        from_edges([(3, 3), (4, 4)])


# --- preprocessing ----------------------------------------------------------

def test_dedup_reverse_and_self_loops():
    g = from_edges([(1, 2), (2, 1), (1, 2), (3, 3)])
    assert g.n == 2 and g.m == 1
    assert g.remap.tolist() == [1, 2]


def test_largest_component_kept():
    g = from_edges([(0, 1), (2, 3), (3, 4)])
    assert g.n == 3 and g.m == 2
    assert g.remap.tolist() == [2, 3, 4]


def test_component_tie_break_smallest_original_id():
    # two components of equal size; the one containing id 1 wins
    g = from_edges([(5, 6), (1, 2)])
    assert g.remap.tolist() == [1, 2]


def test_relabel_preserves_original_id_order():
    g = from_edges([(10, 7), (7, 30)])
    assert g.remap.tolist() == [7, 10, 30]
    # node 0 is original id 7, connected to both others
    assert neighbors(g, 0).tolist() == [1, 2]


def test_csr_shape_star():
    g = from_edges([(0, 1), (0, 2), (0, 3)])
    assert g.offsets.tolist() == [0, 3, 4, 5, 6]
    assert g.neighbors.tolist() == [1, 2, 3, 0, 0, 0]
    assert g.degrees.tolist() == [3, 1, 1, 1]
    assert g.vol_total == 6


def test_arrays_read_only():
    g = from_edges([(0, 1)])
    with pytest.raises(ValueError):
        g.neighbors[0] = 5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)),
                min_size=1, max_size=60))
def test_preprocessing_invariants(edges):
    if all(a == b for a, b in edges):
        with pytest.raises(EmptyGraphError):
            from_edges(edges)
        return
    g = from_edges(edges)
    # connected: BFS from 0 reaches everything
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in neighbors(g, u):
                if not seen[v]:
                    seen[v] = True
                    nxt.append(int(v))
        frontier = nxt
    assert seen.all()
    # no self loops, sorted unique rows, symmetry
    assert int(g.degrees.sum()) == 2 * g.m
    pairs = set()
    for u in range(g.n):
        row = neighbors(g, u)
        assert (np.diff(row) > 0).all()  # sorted, no duplicates
        assert u not in row
        pairs.update((u, int(v)) for v in row)
    assert all((v, u) in pairs for u, v in pairs)
    # remap ascending original ids
    assert (np.diff(g.remap) > 0).all()


# --- cache ------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    g = from_edges([(0, 1), (1, 2), (0, 2), (2, 9)])
    path = tmp_path / "g.lprg"
    save_cache(g, path)
    h = load_cache(path)
    assert h.n == g.n and h.m == g.m
    for a, b in ((g.offsets, h.offsets), (g.neighbors, h.neighbors),
                 (g.remap, h.remap), (g.degrees, h.degrees)):
        assert np.array_equal(a, b)


def test_cache_layout_is_stable(tmp_path):
    g = from_edges([(0, 1)])
    path = tmp_path / "g.lprg"
    save_cache(g, path)
    raw = path.read_bytes()
    assert raw[:4] == b"LPRG"
    assert int.from_bytes(raw[4:8], "little") == 1       # version
    assert int.from_bytes(raw[8:16], "little") == g.n
    assert int.from_bytes(raw[16:24], "little") == g.m


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.lprg"
    path.write_bytes(b"XXXX" + bytes(64))
    with pytest.raises(ValueError, match="not a LPRG cache"):
        load_cache(path)


def test_cache_bad_version(tmp_path):
    g = from_edges([(0, 1)])
    path = tmp_path / "g.lprg"
    save_cache(g, path)
    raw = bytearray(path.read_bytes())
    raw[4] = 99
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError, match="version"):
        load_cache(path)


def test_load_edge_list_uses_cache_dir(tmp_path):
    src = tmp_path / "edges.txt"
    src.write_text("0 1\n1 2\n")
    opts = PreprocessOptions(cache_dir=tmp_path / "cache")
    g1 = load_edge_list(src, opts)
    cached = list((tmp_path / "cache").glob("*.lprg"))
    assert len(cached) == 1
    g2 = load_edge_list(src, opts)
    assert np.array_equal(g1.offsets, g2.offsets)
    assert np.array_equal(g1.neighbors, g2.neighbors)
    assert np.array_equal(g1.remap, g2.remap)


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("LOCALPR_CACHE_DIR", str(tmp_path / "envcache"))
    src = tmp_path / "edges.txt"
    src.write_text("0 1\n")
    load_edge_list(src)
    assert list((tmp_path / "envcache").glob("*.lprg"))


# --- helpers ----------------------------------------------------------------

def test_volume(star4):
    assert volume(star4, [0]) == 3
    assert volume(star4, [1, 2]) == 2
    assert volume(star4, np.array([0, 1, 2, 3])) == 6
    assert volume(star4, []) == 0
    with pytest.raises(IndexError):
        volume(star4, [4])


def test_neighbors_bounds(star4):
    assert neighbors(star4, 0).tolist() == [1, 2, 3]
    assert neighbors(star4, 2).tolist() == [0]
    with pytest.raises(IndexError):
        neighbors(star4, -1)
    with pytest.raises(IndexError):
        neighbors(star4, 4)
