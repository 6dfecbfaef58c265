"""Command-line interface.

Subcommands: gen, info, signatures, arcs, min-even, mincut, global-mincut,
verify, bench.  Instances travel as ``.crs`` text, results as JSON, bench
tables as CSV with a wall-time figure rendered next to them.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .cover import all_classes, build_cover
from .cuts import global_min_cut, min_st_cut
from .generate import GenSpec, gen_text
from .homology import edge_signatures, forest_cotree_greedy, homology_surface
from .oracles import (
    OracleReport,
    oracle_global_min_cut,
    oracle_max_flow_min_cut,
    oracle_min_even_all,
)
from .surface import SurfaceError, parse_surface


def _load(path):
    return parse_surface(Path(path).read_text())


def _dart_str(d):
    return f"{d >> 1}{'+' if d & 1 == 0 else '-'}"


def _emit(out, text):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _graph_of(s):
    return list(zip(s.edge_u, s.edge_v, s.weight))


def cmd_gen(args):
    weights = "unit"
    if args.weights != "unit":
        parts = args.weights.split(":")
        if parts[0] != "uniform" or len(parts) != 3:
            raise SystemExit("weights must be 'unit' or 'uniform:LO:HI'")
        weights = ("uniform", int(parts[1]), int(parts[2]))
    spec = GenSpec(kind=args.kind, rows=args.rows, cols=args.cols,
                   genus=args.genus, subdivisions=args.subdivisions,
                   vertices=args.vertices, edges=args.edges,
                   weights=weights, seed=args.seed)
    _emit(args.out, gen_text(spec))
    return 0


def cmd_info(args):
    s = _load(args.instance)
    chi, g, b, beta = s.stats()
    info = {
        "n": s.n, "m": s.m, "f": s.f, "chi": chi,
        "genus": g, "boundaries": b, "beta": beta,
        "weight_scale": s.weight_scale, "total_weight": s.total_weight(),
    }
    if args.json:
        print(json.dumps(info, sort_keys=True))
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return 0


def cmd_signatures(args):
    s = _load(args.instance)
    sigs = edge_signatures(s)
    for e, h in enumerate(sigs):
        print(f"{e} {h:x}")
    return 0


def cmd_arcs(args):
    s = _load(args.instance)
    fc = forest_cotree_greedy(homology_surface(s))
    for arc in fc.arcs:
        print(" ".join(_dart_str(d) for d in arc))
    return 0


def cmd_min_even(args):
    s = _load(args.instance)
    cov = build_cover(s)
    table = all_classes(cov, args.mode)
    if args.all:
        classes = range(cov.sheets)
    else:
        if args.cls is None:
            raise SystemExit("need --class HEXBITS or --all")
        classes = [int(args.cls, 16)]
    for h in classes:
        w, sub, comps = table.subgraphs[h]
        print(json.dumps({
            "class": f"{h:x}",
            "weight": w,
            "edges": sorted(sub.edges),
            "components": comps,
        }, sort_keys=True))
    return 0


def _cut_json(res, weight_scale):
    out = {
        "weight": res.weight,
        "edges": sorted(res.edges),
        "side_s": list(res.side_s),
        "side_t": list(res.side_t),
        "provenance": res.provenance,
    }
    if weight_scale != 1:
        out["weight_scale"] = weight_scale
    return json.dumps(out, sort_keys=True)


def cmd_mincut(args):
    s = _load(args.instance)
    res = min_st_cut(s, args.s, args.t, mode=args.mode)
    print(_cut_json(res, s.weight_scale))
    if args.verify:
        val, _c, _side = oracle_max_flow_min_cut(s.n, _graph_of(s), args.s, args.t)
        if val != res.weight:
            print(f"VERIFY MISMATCH: solver {res.weight} oracle {val}", file=sys.stderr)
            return 1
    return 0


def cmd_global_mincut(args):
    s = _load(args.instance)
    res = global_min_cut(s, s=args.s, mode=args.mode)
    print(_cut_json(res, s.weight_scale))
    if args.verify:
        val, _side = oracle_global_min_cut(s.n, _graph_of(s))
        if val != res.weight:
            print(f"VERIFY MISMATCH: solver {res.weight} oracle {val}", file=sys.stderr)
            return 1
    return 0


def cmd_verify(args):
    suite = sorted(Path(args.suite).glob("*.crs"))
    if not suite:
        print(f"no .crs instances under {args.suite}", file=sys.stderr)
        return 1
    mismatches = 0
    for path in suite:
        try:
            s = parse_surface(path.read_text())
        except SurfaceError as exc:
            print(json.dumps({"instance": path.name, "error": str(exc)}))
            mismatches += 1
            continue
        reports = []
        res = min_st_cut(s, 0, s.n - 1) if s.n >= 2 else None
        if res is not None:
            val, _c, _side = oracle_max_flow_min_cut(s.n, _graph_of(s), 0, s.n - 1)
            reports.append(OracleReport(path.name, "st-cut(0,n-1)", val, res.weight))
        if s.n >= 2:
            gres = global_min_cut(s, mode=args.mode)
            gval, _ = oracle_global_min_cut(s.n, _graph_of(s))
            reports.append(OracleReport(path.name, "global-cut", gval, gres.weight))
        if s.m <= 22:
            cov = build_cover(s)
            hs = cov.hs
            table = all_classes(cov, args.mode)
            oracle = oracle_min_even_all(
                hs.n, list(zip(hs.edge_u, hs.edge_v, hs.weight)),
                list(edge_signatures(s)))
            solver_w = {h: table.weight(h) for h in range(cov.sheets)}
            oracle_w = {h: oracle[h][0] for h in oracle}
            reports.append(OracleReport(path.name, "min-even-all-classes",
                                        oracle_w, solver_w))
        for r in reports:
            print(r.to_json())
            if not r.match:
                mismatches += 1
    return min(mismatches, 255)


def cmd_bench(args):
    corpus = sorted(Path(args.corpus).glob("*.crs"))
    rows = []
    failures = []
    for path in corpus:
        try:
            s = parse_surface(path.read_text())
        except SurfaceError as exc:
            failures.append((path.name, str(exc)))
            continue
        t0 = time.perf_counter()
        if args.solver == "global-mincut":
            res = global_min_cut(s, mode=args.mode)
        else:
            res = min_st_cut(s, 0, s.n - 1, mode=args.mode)
        wall = time.perf_counter() - t0
        rows.append({
            "instance": path.name, "n": s.n, "g": s.genus, "beta": s.betti,
            "solver": args.solver, "wall_time": f"{wall:.6f}",
            "weight": res.weight,
        })
    fields = ["instance", "n", "g", "beta", "solver", "wall_time", "weight"]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    for name, err in failures:
        print(f"parse failure: {name}: {err}", file=sys.stderr)

    plot = args.plot
    if plot is None and args.out:
        plot = str(Path(args.out).with_suffix(".png"))
    if plot and rows:
        _render_bench_plot(rows, plot)
    return 0


def _render_bench_plot(rows, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r["n"] for r in rows]
    ys = [float(r["wall_time"]) for r in rows]
    ax.loglog(xs, ys, "o-", lw=1)
    ax.set_xlabel("vertices")
    ax.set_ylabel("wall time [s]")
    ax.set_title(f"{rows[0]['solver']} wall time")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def build_parser():
    ap = argparse.ArgumentParser(prog="homocut",
                                 description="minimum cuts on surface-embedded graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    common_mode = argparse.ArgumentParser(add_help=False)
    common_mode.add_argument("--mode", choices=["naive", "sliced"], default="naive")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--kind", required=True,
                   choices=["planar-grid", "torus-grid", "genus-schema",
                            "random-rotation"])
    p.add_argument("--rows", type=int, default=0)
    p.add_argument("--cols", type=int, default=0)
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--subdivisions", type=int, default=0)
    p.add_argument("--vertices", type=int, default=0)
    p.add_argument("--edges", type=int, default=0)
    p.add_argument("--weights", default="unit", help="unit | uniform:LO:HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("info", help="surface statistics")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("signatures", help="per-edge homology signatures (hex)")
    p.add_argument("instance")
    p.set_defaults(func=cmd_signatures)

    p = sub.add_parser("arcs", help="greedy system of arcs as dart sequences")
    p.add_argument("instance")
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("min-even", parents=[common_mode],
                       help="minimum even subgraph per homology class")
    p.add_argument("instance")
    p.add_argument("--class", dest="cls", help="class as hex bits")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_min_even)

    p = sub.add_parser("mincut", parents=[common_mode], help="minimum (s,t)-cut")
    p.add_argument("instance")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mincut)

    p = sub.add_parser("global-mincut", parents=[common_mode],
                       help="global minimum cut")
    p.add_argument("instance")
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_global_mincut)
    # the global solver defaults to the sliced engine internally
    p.set_defaults(mode="sliced")

    p = sub.add_parser("verify", parents=[common_mode],
                       help="solver-vs-oracle over a corpus")
    p.add_argument("--suite", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common_mode],
                       help="timing table (CSV) plus a wall-time figure")
    p.add_argument("--corpus", required=True)
    p.add_argument("--solver", choices=["global-mincut", "mincut"],
                   default="global-mincut")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="figure path (default: CSV path with .png)")
    p.set_defaults(func=cmd_bench)
    p.set_defaults(mode="sliced")

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SurfaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
