"""Benchmarking command line.

Subcommands:
  solve     run one solver, emit a report (JSON) or the trace (CSV)
  compare   local solver vs its global counterpart over random sources
  cluster   solve + sweep cut, report the best prefix and conductance
  validate  run every solver against the dense oracle and all bound checks

Sources given on the command line are original input ids (the loader keeps
a remap table).  Randomness comes from numpy.random.default_rng(--seed), so
runs are reproducible across platforms.  The edge-list cache directory is
taken from $LOCALPR_CACHE_DIR when set.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds as B
from . import global_solvers as G
from . import local_solvers as L
from .clustering import sweep_cut
from .graph import Graph, load_edge_list
from .oracle import dense_ppr
from .problem import Problem, error_vs_oracle, residual_from_solution

SCHEMA_VERSION = 1

LOCAL_ALGS = ("appr", "locsor", "locgd", "locch", "lochb")
GLOBAL_ALGS = ("gd", "sor", "ch", "hb", "cg")


def _run_alg(alg: str, p: Problem, omega, t_max):
    if alg == "appr":
        return L.appr(p)
    if alg == "locsor":
        return L.loc_sor(p, omega if omega is not None else "opt")
    if alg == "locgd":
        return L.loc_gd(p)
    if alg == "locch":
        return L.loc_ch(p, t_max)
    if alg == "lochb":
        return L.loc_hb(p, t_max)
    if alg == "gd":
        return G.global_gd(p, t_max)
    if alg == "sor":
        return G.global_sor(p, omega if omega is not None else "opt", t_max)
    if alg == "ch":
        return G.global_chebyshev(p, t_max)
    if alg == "hb":
        return G.global_hb(p, t_max)
    if alg == "cg":
        return G.conjugate_gradient(p, t_max)
    raise ValueError(f"unknown solver {alg!r}")


def _counterpart(alg: str, p: Problem, t_max):
    """Global twin of a local solver, matched update rule for update rule."""
    if alg == "appr":
        return "sor", G.global_sor(p, (1.0 + p.alpha) / 2.0, t_max)
    if alg == "locsor":
        return "sor", G.global_sor(p, "opt", t_max)
    if alg == "locgd":
        return "gd", G.global_gd(p, t_max)
    if alg == "locch":
        return "ch", G.global_chebyshev(p, t_max)
    if alg == "lochb":
        return "hb", G.global_hb(p, t_max)
    raise ValueError(f"{alg!r} is not a local solver")


def _load_graph(path: str) -> Graph:
    return load_edge_list(path)


def _resolve_eps(eps_arg: str, g: Graph) -> float:
    if eps_arg == "auto":
        return 1.0 / g.n
    return float(eps_arg)


def _resolve_source(g: Graph, original_id: int) -> int:
    idx = int(np.searchsorted(g.remap, original_id))
    if idx >= g.n or g.remap[idx] != original_id:
        raise ValueError(f"source {original_id} is not a node of the "
                         f"preprocessed graph (it may have been outside the "
                         f"largest connected component)")
    return idx


def _emit(doc: dict, out, fmt: str, trace=None):
    if fmt == "csv":
        text = trace.to_csv() if trace is not None else ""
    else:
        text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _solution_report(alg: str, p: Problem, sol, emit_pi: bool) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "solver": alg,
        "graph": {"n": p.graph.n, "m": p.graph.m},
        "alpha": p.alpha,
        "eps": p.eps,
        "source": int(p.graph.remap[p.source]),
        "converged": sol.converged,
        "total_ops": sol.total_ops,
        "epochs": sol.epochs,
        "wall_time": sol.wall_time,
        "summary": sol.summary(),
    }
    bound_doc = {"anderson": B.anderson_bound(p),
                 "chebyshev_iterations": B.chebyshev_iteration_bound(p)}
    if alg in LOCAL_ALGS and hasattr(sol.trace, "gamma"):
        s = sol.summary()
        bound_doc["evolving_upper"] = B.evolving_upper_bound(p, s)
        bound_doc["evolving_lower"] = B.evolving_lower_bound(
            p, s, s["l1_start"], s["l1_end"])
    doc["bounds"] = bound_doc
    if emit_pi:
        doc["pi_hat"] = {int(p.graph.remap[u]): float(sol.pi_hat[u])
                         for u in np.flatnonzero(sol.pi_hat)}
    return doc


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    eps = _resolve_eps(args.eps, g)
    s = _resolve_source(g, args.source)
    p = Problem(graph=g, alpha=args.alpha, eps=eps, source=s)
    omega = args.omega if args.omega is None or args.omega == "opt" \
        else float(args.omega)
    sol = _run_alg(args.alg, p, omega, args.tmax)
    _emit(_solution_report(args.alg, p, sol, args.emit_pi),
          args.out, args.format, trace=sol.trace)
    return 0


def _eps_grid(p_alpha: float, d_s: float, n: int, points: int):
    hi = p_alpha / (2.0 * (1.0 + p_alpha) * d_s)
    lo = 1e-4 / n
    if points <= 1 or hi <= lo:
        return [max(lo, hi)]
    return list(np.geomspace(hi, lo, points))


def cmd_compare(args) -> int:
    g = _load_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    sources = rng.integers(0, g.n, size=args.sources)
    rows = []
    for s in sources:
        s = int(s)
        if args.eps_sweep:
            eps_values = _eps_grid(args.alpha, float(g.degrees_f[s]), g.n,
                                   args.eps_sweep)
        else:
            eps_values = [_resolve_eps(args.eps, g)]
        for eps in eps_values:
            p = Problem(graph=g, alpha=args.alpha, eps=eps, source=s)
            local = _run_alg(args.alg, p, None, args.tmax)
            gname, glob = _counterpart(args.alg, p, args.tmax)
            rows.append({
                "source": int(g.remap[s]),
                "eps": eps,
                "local_alg": args.alg,
                "global_alg": gname,
                "local_ops": local.total_ops,
                "global_ops": glob.total_ops,
                "speedup_ops": (glob.total_ops / local.total_ops
                                if local.total_ops else float("inf")),
                "local_wall": local.wall_time,
                "global_wall": glob.wall_time,
                "speedup_wall": (glob.wall_time / local.wall_time
                                 if local.wall_time else float("inf")),
                "local_converged": local.converged,
                "global_converged": glob.converged,
            })
    doc = {"schema_version": SCHEMA_VERSION, "alpha": args.alpha,
           "seed": args.seed, "rows": rows}
    if args.format == "csv":
        import csv as _csv
        import io as _io
        buf = _io.StringIO()
        w = _csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text, end="")
    else:
        _emit(doc, args.out, "json")
    return 0


def cmd_cluster(args) -> int:
    g = _load_graph(args.graph)
    eps = _resolve_eps(args.eps, g)
    s = _resolve_source(g, args.source)
    p = Problem(graph=g, alpha=args.alpha, eps=eps, source=s)
    t0 = time.perf_counter()
    sol = _run_alg(args.alg, p, None, args.tmax)
    result = sweep_cut(g, sol.pi_hat)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "solver": args.alg,
        "alpha": p.alpha,
        "eps": p.eps,
        "source": int(g.remap[s]),
        "conductance": result.best_conductance,
        "cluster_size": result.best_prefix_len,
        "cluster": [int(g.remap[u]) for u in result.best_set],
        "operations": sol.total_ops,
        "run_time": time.perf_counter() - t0,
        "converged": sol.converged,
    }
    if args.format == "csv":
        _emit(doc, args.out, "csv", trace=result)
    else:
        _emit(doc, args.out, "json")
    return 0


def cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    eps = _resolve_eps(args.eps, g)
    s = _resolve_source(g, args.source)
    p = Problem(graph=g, alpha=args.alpha, eps=eps, source=s)
    pi_star = dense_ppr(g, p.alpha, s)
    failures = []

    def check(name, ok, detail=""):
        print(f"  {'ok' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        if not ok:
            failures.append(name)

    runs = {
        "appr": L.appr(p),
        "locsor": L.loc_sor(p, "opt"),
        "locsor_w1": L.loc_sor(p, 1.0),
        "locgd": L.loc_gd(p),
        "locch": L.loc_ch(p),
        "lochb": L.loc_hb(p),
        "gd": G.global_gd(p),
        "sor": G.global_sor(p, "opt"),
        "ch": G.global_chebyshev(p),
        "hb": G.global_hb(p),
        "cg": G.conjugate_gradient(p),
    }
    for name, sol in runs.items():
        err = error_vs_oracle(p, sol.pi_hat, pi_star)
        check(f"{name}: converged", sol.converged)
        check(f"{name}: oracle error {err:.2e} <= eps", err <= p.eps)
        drift = float(np.abs(residual_from_solution(p, sol.pi_hat)
                             - sol.r_tilde).max())
        check(f"{name}: residual consistency", drift <= 1e-9 * p.c)
    check("appr: ops <= 1/(alpha*eps)",
          runs["appr"].total_ops <= B.anderson_bound(p))
    ssum = runs["locsor_w1"].summary()
    ub = B.evolving_upper_bound(p, ssum)
    lb = B.evolving_lower_bound(p, ssum, ssum["l1_start"], ssum["l1_end"])
    check("locsor(1): lower <= ops <= upper",
          lb <= runs["locsor_w1"].total_ops <= ub)
    check("ch: iterations <= bound",
          runs["ch"].epochs <= B.chebyshev_iteration_bound(p))
    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="localpr",
        description="Local vs global personalized-PageRank solver benchmark")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, with_source=True):
        sp.add_argument("--graph", required=True, help="edge-list path")
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--eps", default="auto",
                        help="float or 'auto' (= 1/n)")
        if with_source:
            sp.add_argument("--source", type=int, required=True,
                            help="original node id")
        sp.add_argument("--tmax", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="json")

    sp = sub.add_parser("solve", help="run one solver")
    common(sp)
    sp.add_argument("--alg", required=True, choices=LOCAL_ALGS + GLOBAL_ALGS)
    sp.add_argument("--omega", default=None, help="float in (0,2) or 'opt'")
    sp.add_argument("--emit-pi", action="store_true",
                    help="include nonzero pi_hat entries in the report")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("compare", help="local vs global counterpart")
    common(sp, with_source=False)
    sp.add_argument("--alg", required=True, choices=LOCAL_ALGS)
    sp.add_argument("--sources", type=int, default=10,
                    help="number of random sources")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eps-sweep", type=int, default=0, metavar="K",
                    help="log grid of K eps values per source, from "
                         "alpha/(2(1+alpha)d_s) down to 1e-4/n")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("cluster", help="solve then sweep cut")
    common(sp)
    sp.add_argument("--alg", default="locsor",
                    choices=LOCAL_ALGS + GLOBAL_ALGS)
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("validate", help="oracle + bound checks, small graphs")
    common(sp)
    sp.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
