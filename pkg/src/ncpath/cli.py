"""Command-line front end.

Every command prints one JSON object per input file on stdout (JSON lines);
diagnostics go to stderr. Exit codes: 0 success, 1 negative verdict,
2 usage or input error, 3 failed self-verification.
"""

from __future__ import annotations

import argparse
import csv
import gc
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .graph import (Graph, GraphFormatError, DisconnectedGraphError, connected_components, is_connected,
                    parse_graph, serialize)
from .recognition import (CLASSES, Certificate, NotChordalError, Witness, find_claw_chordal, recognize,
                          verify_certificate)
from .domination import NotInClassError, build_model, mcds, mds, mids, steiner_tree
from .hamiltonicity import (NotBiconnected, SpanResult, TooManyLeaves, hamiltonian_cycle, hamiltonian_path,
                            min_leaf_spanning_tree, validate_span)
from .model import to_dot
from .testkit.generators import KINDS, GenSpec, GenError, gen

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNVERIFIED = 0, 1, 2, 3
GRAPH_COMMANDS = ("recognize", "model", "claw", "mds", "mids", "mcds", "steiner", "hamcycle", "hampath", "minleaf")


class UsageError(Exception):
    pass


def default_seed(given=None) -> int:
    if given is not None:
        return given
    env = os.environ.get("NCPATH_SEED")
    return int(env) if env else 0


def read_graph(path, fmt="auto") -> Graph:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text, fmt)


def _dom_check(g: Graph, kind, vs, X=None):
    from .testkit.oracles import induces_connected, is_dominating

    if kind == "Steiner":
        return induces_connected(g, vs) and set(X) <= set(vs)
    if not is_dominating(g, vs):
        return False
    if kind in ("MIDS", "MDS"):
        s = set(vs)
        return not any(g.has_edge(u, v) for u in s for v in s if u < v)
    return induces_connected(g, vs)


def _sub_certificate(g: Graph, cls):
    """Certificates per component, witnesses mapped back to global ids."""
    if is_connected(g):
        c = recognize(g, cls)
        return c.member, c.to_json(), bool(verify_certificate(g, c))
    comps = []
    member = True
    ok = True
    for verts in connected_components(g):
        sub, old = g.subgraph(verts)
        c = recognize(sub, cls)
        ok &= bool(verify_certificate(sub, c))
        member &= c.member
        d = c.to_json()
        if "witness" in d:
            d["witness"]["vertices"] = old[d["witness"]["vertices"]].tolist()
            if "center" in d["witness"]:
                d["witness"]["center"] = int(old[d["witness"]["center"]])
        comps.append({"vertices": [int(v) for v in old], "certificate": d})
    return member, {"class": cls, "verdict": "member" if member else "non-member", "components": comps}, ok


def run_on_graph(cmd, g: Graph, opts) -> tuple:
    """(result payload, verified flag, exit code) for one graph."""
    if cmd == "recognize":
        member, res, ok = _sub_certificate(g, opts["cls"])
        return res, ok, EXIT_OK if member else EXIT_NEGATIVE
    if cmd == "claw":
        try:
            w, model = find_claw_chordal(g)
        except NotChordalError as exc:
            return {"error": "not chordal", "witness": Witness("Hole", exc.hole).to_json()}, True, EXIT_NEGATIVE
        if w is None:
            return {"claw": None}, True, EXIT_OK
        from .recognition import check_witness
        return {"claw": w.to_json()}, bool(check_witness(g, w)), EXIT_OK
    try:
        m = build_model(g)
    except NotInClassError as exc:
        return {"error": "not an nc-path-tree graph", "witness": exc.witness.to_json()}, True, EXIT_NEGATIVE
    if cmd == "model":
        if opts.get("dot"):
            return {"dot": to_dot(m)}, True, EXIT_OK
        return m.to_json(), True, EXIT_OK
    if cmd in ("mds", "mids", "mcds", "steiner"):
        X = None
        if cmd == "mds":
            r = mds(g, m)
        elif cmd == "mids":
            r = mids(g, m)
        elif cmd == "mcds":
            r = mcds(g, m)
        else:
            X = opts["terminals"]
            if not X or any(not 0 <= v < g.n for v in X):
                raise UsageError("steiner needs --terminals with vertex ids of the graph")
            r = steiner_tree(g, X, m)
        ok = r.complete_graph or _dom_check(g, r.kind, r.vertices, X)
        return r.to_json(), ok, EXIT_OK
    if cmd == "hamcycle":
        r = hamiltonian_cycle(g, m)
    elif cmd == "hampath":
        r = hamiltonian_path(g, m)
    else:
        r = min_leaf_spanning_tree(g, m)
    if isinstance(r, (NotBiconnected, TooManyLeaves)):
        return r.to_json(), True, EXIT_NEGATIVE
    return r.to_json(), validate_span(g, r), EXIT_OK


def _process(job):
    cmd, path, opts = job
    try:
        g = read_graph(path, opts.get("format", "auto"))
        if cmd != "recognize" and not is_connected(g):
            comps = connected_components(g)
            raise DisconnectedGraphError(comps[0][0], comps[1][0])
        t0 = time.perf_counter_ns()
        res, ok, code = run_on_graph(cmd, g, opts)
        wall = time.perf_counter_ns() - t0
    except (UsageError, GraphFormatError, DisconnectedGraphError) as exc:
        return None, f"{path}: {exc}", EXIT_USAGE
    report = {"command": cmd, "input": path, "digest": g.digest(), "wall_ns": wall, "result": res,
              "verification": "verified" if ok else "failed"}
    if not ok:
        return json.dumps(report), f"{path}: result failed verification", EXIT_UNVERIFIED
    return json.dumps(report), None, code


def _worst(codes):
    for c in (EXIT_UNVERIFIED, EXIT_USAGE, EXIT_NEGATIVE):
        if c in codes:
            return c
    return EXIT_OK


def cmd_graphs(args) -> int:
    opts = {"cls": getattr(args, "cls", "nc-path-tree"), "dot": getattr(args, "dot", False),
            "format": args.format, "terminals": getattr(args, "terminals", None)}
    jobs = [(args.command, p, opts) for p in args.inputs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            outs = list(ex.map(_process, jobs))
    else:
        outs = [_process(j) for j in jobs]
    codes = []
    for line, err, code in outs:
        if line is not None:
            if args.command == "model" and args.dot and code == EXIT_OK:
                sys.stdout.write(json.loads(line)["result"]["dot"])
            else:
                print(line)
        if err:
            print(err, file=sys.stderr)
        codes.append(code)
    sys.stdout.flush()
    return _worst(codes)


def _params(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def cmd_gen(args) -> int:
    spec = GenSpec(args.kind, args.n, default_seed(args.seed), _params(args.param))
    try:
        g = gen(spec)
    except GenError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(serialize(g, spec.header()))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load certificate: {exc}") from None
    if "result" in d:
        d = d["result"]
    g = read_graph(args.graph, args.format)
    try:
        c = Certificate.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed certificate: {exc}") from None
    v = verify_certificate(g, c)
    print(json.dumps({"command": "verify", "digest": g.digest(), "ok": v.ok, "reason": v.reason}))
    return EXIT_OK if v.ok else EXIT_UNVERIFIED


BENCH_OPS = {
    "recognize": lambda g: recognize(g, "nc-path-tree"),
    "mcds": lambda g: mcds(g),
    "hamcycle": lambda g: hamiltonian_cycle(g),
}


def bench(sizes, kind="random-host-tree-nc-paths", seed=0, ops=("recognize", "mcds", "hamcycle"),
          params=None, repeat=1):
    """One row (n, m, op, wall seconds) per size and operation; best of ``repeat`` runs."""
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise UsageError("sizes must be ascending")
    params = dict({"biconnected": True} if kind == "random-host-tree-nc-paths" else {}, **(params or {}))
    warm = gen(GenSpec(kind, 64, seed, params))
    for op in ops:
        BENCH_OPS[op](warm)
    rows = []
    for n in sizes:
        g = gen(GenSpec(kind, n, seed, params))
        for op in ops:
            best = None
            for _ in range(repeat):
                gc.collect()
                gc.disable()
                try:
                    t0 = time.perf_counter()
                    BENCH_OPS[op](g)
                    dt = time.perf_counter() - t0
                finally:
                    gc.enable()
                best = dt if best is None else min(best, dt)
            rows.append((n, g.m, op, best))
    return rows


def loglog_slope(rows, op) -> float:
    """Least-squares slope of log(wall) against log(n + m)."""
    pts = [(n + m, t) for n, m, o, t in rows if o == op]
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def cmd_bench(args) -> int:
    if args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
    else:
        sizes = [2 ** k for k in range(args.min_exp, args.max_exp + 1)]
    ops = tuple(args.ops.split(","))
    for op in ops:
        if op not in BENCH_OPS:
            raise UsageError(f"unknown operation {op!r}")
    rows = bench(sizes, args.kind, default_seed(args.seed), ops, _params(args.param), args.repeat)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["n", "m", "op", "wall"])
    for n, m, op, t in rows:
        w.writerow([n, m, op, f"{t:.6f}"])
    if args.out:
        fh.close()
    for op in ops:
        slope = loglog_slope(rows, op) if len(sizes) > 1 else float("nan")
        big = [r for r in rows if r[2] == op][-1]
        print(f"{op}: slope {slope:.3f}, {big[1] / big[3]:.0f} edges/s at n={big[0]}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="ncpath", description="Claw-free chordal graph toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("inputs", nargs="+", help="graph files, or - for stdin")
        p.add_argument("--format", default="auto", choices=("auto", "edge-list", "dimacs"))
        p.add_argument("--jobs", type=int, default=1, help="worker processes over input files")
        return p

    p = graph_cmd("recognize", "certified class membership")
    p.add_argument("--class", dest="cls", default="nc-path-tree", choices=CLASSES)
    p = graph_cmd("model", "annotated path model (JSON, or DOT with --dot)")
    p.add_argument("--dot", action="store_true")
    graph_cmd("claw", "find an induced claw in a chordal graph")
    graph_cmd("mds", "minimum dominating set")
    graph_cmd("mids", "minimum independent dominating set")
    graph_cmd("mcds", "minimum connected dominating set")
    p = graph_cmd("steiner", "minimum Steiner tree (vertex count)")
    p.add_argument("--terminals", required=True, type=lambda s: [int(x) for x in s.split(",") if x],
                   help="comma-separated terminal vertices")
    graph_cmd("hamcycle", "Hamiltonian cycle or a cut-vertex obstruction")
    graph_cmd("hampath", "Hamiltonian path or the block-tree leaf count")
    graph_cmd("minleaf", "spanning tree with the fewest leaves")

    p = sub.add_parser("gen", help="generate an instance as an edge list")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")

    p = sub.add_parser("verify", help="check a recognition certificate against a graph")
    p.add_argument("certificate")
    p.add_argument("graph")
    p.add_argument("--format", default="auto", choices=("auto", "edge-list", "dimacs"))

    p = sub.add_parser("bench", help="time operations over growing instances (CSV)")
    p.add_argument("--sizes", help="comma-separated n values (default: powers of two)")
    p.add_argument("--min-exp", type=int, default=14)
    p.add_argument("--max-exp", type=int, default=20)
    p.add_argument("--kind", default="random-host-tree-nc-paths", choices=KINDS[:3])
    p.add_argument("--ops", default="recognize,mcds,hamcycle")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command in GRAPH_COMMANDS:
            return cmd_graphs(args)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_bench(args)
    except (UsageError, GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
