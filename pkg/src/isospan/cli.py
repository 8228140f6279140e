"""Command-line entry point.

Exit status is 0 when every checked inequality holds, 1 when one fails and 2
for unreadable input or violated preconditions (an error record is printed to
stderr and written to ``<out>/error.json`` when an output directory is given).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time


from . import __version__, constants, kernels
from .errors import IsospanError, PreconditionError
from .flow import check_flow, report_json, scenario_from_json
from .geometry import ClosedBall
from .io import dumps, load_set, write_json, write_mesh
from .measure import measure_covering, measure_simplicial
from .span import SpanOptions, span
from .suites import SUITES

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _header(cmd, args):
    return {"schema": SCHEMA, "command": cmd, "version": __version__,
            "backend": kernels.BACKEND, "seed": args.seed}


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _mesh_ext(n, fmt):
    if fmt == "auto":
        return "obj" if n <= 3 else "off"
    if fmt == "obj" and n > 3:
        raise PreconditionError("OBJ needs n <= 3; use --format off")
    return fmt


# -------------------------------------------------------------------------
# subcommands


def cmd_span(args):
    A = load_set(args.input)
    ball = _floats(args.ball, "--ball")
    if len(ball) != A.n + 1:
        raise PreconditionError(f"--ball needs {A.n} center coordinates and a radius")
    B = ClosedBall(tuple(ball[:-1]), ball[-1])
    L = args.L if args.L == "auto" else float(args.L)
    opts = SpanOptions(n_offsets=args.n_offsets, enforce_preconditions=not args.relaxed,
                       tol=args.tol)
    run = span(A, B, args.m, L=L, zeta=args.zeta, opts=opts)
    out = _outdir(args)
    ext = _mesh_ext(A.n, args.format)
    write_mesh(os.path.join(out, f"A_tilde.{ext}"), run.A_tilde)
    write_mesh(os.path.join(out, f"S_tilde.{ext}"), run.S_tilde)
    rep = dict(_header("span", args), **run.to_json())
    rep["measures"] = {
        "A": measure_simplicial(run.A.with_dim(args.m - 1), args.m - 1).to_json(),
        "A_tilde": measure_simplicial(run.A_tilde, args.m).to_json(),
    }
    rep["constants"] = constants.ConstantLedger(A.n, args.m).to_json()
    write_json(os.path.join(out, "report.json"), rep)
    th = run.isoperimetric
    lines = [f"span m={args.m} n={A.n} L={run.L:.6g} ({run.L_mode})",
             f"  H^m(A~) = {th['root_bound']['lhs']:.6g}",
             f"  inequality: {th['lhs']:.6g} <= {th['rhs']:.6g}  margin {th['margin']:.6g}",
             f"  node properties: {sum(e['pass'] for e in run.properties)}/{len(run.properties)} pass",
             f"  K(1,0,N) = {constants.K1_CONVENTION:g} by convention",
             f"  result: {'PASS' if run.passed else 'FAIL'}"]
    _summary(out, lines)
    return EXIT_OK if run.passed else EXIT_FAIL


def cmd_flow(args):
    with open(args.scenario) as fh:
        obj = json.load(fh)
    mode, sc, Z = scenario_from_json(obj)
    out = _outdir(args)
    t0 = time.perf_counter()
    if mode == "compose":
        Yt, rep = sc.run(tol=args.tol)
        write_mesh(os.path.join(out, "Y_intermediate.off"), rep.pop("intermediate"))
        write_mesh(os.path.join(out, "Y_final.off"), Yt)
        ok = rep["pass"]
        lines = [f"composition '{sc.label}': slab_boundary {rep['slab_boundary']['distance']:.3g}, "
                 f"sphere_trace {rep['sphere_trace']['distance']:.3g} (tol {args.tol:g})"]
    else:
        times = _floats(args.times, "--times")
        rep = check_flow(sc, Z, times, tol=args.tol)
        for t, Zt in zip(rep["times"], rep["snapshots"]):
            write_mesh(os.path.join(out, f"Z_t{t:g}.off"), Zt)
        rep = report_json(rep)
        ok = rep["item1"]["pass"] and rep["item1"]["monotone"] and rep["item2"]["pass"] \
            and rep["item3"]["pass"]
        rep["pass"] = bool(ok)
        lines = [f"flow '{sc.label}' at T={rep['times'][-1]:g}: "
                 f"item1 {rep['item1']['distance']:.3g} (monotone {rep['item1']['monotone']}), "
                 f"item2 {rep['item2']['max_movement']:.3g}, item3 {rep['item3']['distance']:.3g}"]
    rep = dict(_header("flow", args), mode=mode, scenario=obj, **rep)
    write_json(os.path.join(out, "flow_report.json"), rep)
    write_json(os.path.join(out, "report.json"), rep)
    lines.append(f"  {time.perf_counter() - t0:.1f}s  result: {'PASS' if ok else 'FAIL'}")
    _summary(out, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_constants(args):
    ledger = constants.ConstantLedger(args.n, args.m)
    rep = dict(_header("constants", args), **ledger.to_json())
    print(ledger.format_table())
    if args.json:
        print(dumps(rep))
    if args.out:
        write_json(os.path.join(_outdir(args), "report.json"), rep)
    return EXIT_OK


def cmd_measure(args):
    X = load_set(args.input)
    d = X.dim if args.dim is None else args.dim
    if args.method == "covering":
        rep = measure_covering(X, d, args.grid)
    else:
        rep = measure_simplicial(X.with_dim(d) if X.dim < d else X, d)
    out = dict(_header("measure", args), measures=rep.to_json())
    print(dumps(out))
    if args.out:
        write_json(os.path.join(_outdir(args), "report.json"), out)
    return EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = {}
    for name in names:
        kw = {"seed": args.seed}
        if args.count:
            kw["count"] = args.count
        results[name] = SUITES[name](**kw)
        r = results[name]
        print(f"{name:10s} {'PASS' if r['pass'] else 'FAIL'}  failures={r['failures']}/{len(r['rows'])}")
    ok = all(r["pass"] for r in results.values())
    rep = dict(_header("verify", args), suites=results, **{"pass": ok})
    if args.out:
        write_json(os.path.join(_outdir(args), "report.json"), rep)
    return EXIT_OK if ok else EXIT_FAIL


def _summary(out, lines):
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    with open(os.path.join(out, "summary.txt"), "w") as fh:
        fh.write(text)


# -------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="isospan", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("span", parents=[common], help="build a spanning set")
    s.add_argument("--input", required=True, help="geometry JSON of A")
    s.add_argument("--ball", required=True, help="c1,...,cn,r")
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--L", default="auto", help="'auto' or a positive number")
    s.add_argument("--zeta", type=_positive, default=None)
    s.add_argument("--n-offsets", type=int, default=1024)
    s.add_argument("--tol", type=_positive, default=1e-9)
    s.add_argument("--relaxed", action="store_true",
                   help="record node preconditions instead of stopping on them")
    s.add_argument("--format", choices=("auto", "obj", "off"), default="auto")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_span)

    f = sub.add_parser("flow", parents=[common], help="simulate a coning flow scenario")
    f.add_argument("--scenario", required=True)
    f.add_argument("--times", default="1,2,5,10,50")
    f.add_argument("--tol", type=_positive, default=1e-3)
    f.add_argument("--out", default=".")
    f.set_defaults(func=cmd_flow)

    c = sub.add_parser("constants", parents=[common], help="print the constant table")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_constants)

    m = sub.add_parser("measure", parents=[common], help="measure a simplicial set")
    m.add_argument("--input", required=True)
    m.add_argument("--dim", type=int, default=None)
    m.add_argument("--method", choices=("simplicial", "covering"), default="simplicial")
    m.add_argument("--grid", type=_positive, default=1e-2)
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_measure)

    v = sub.add_parser("verify", parents=[common], help="run randomized property suites")
    v.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    v.add_argument("--count", type=int, default=None)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IsospanError, ValueError, KeyError, OSError) as exc:
        return _fail(args, exc)


def _fail(args, exc):
    rec = {"schema": SCHEMA, "command": args.command, "error": type(exc).__name__,
           "message": str(exc), "path": getattr(exc, "path", None)}
    sys.stderr.write(dumps(rec) + "\n")
    if getattr(args, "out", None):
        try:
            write_json(os.path.join(_outdir(args), "error.json"), rec)
        except OSError:
            pass
    return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
