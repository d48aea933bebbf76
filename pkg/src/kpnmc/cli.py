"""Symbolic CTLK model checking for knowledge-oriented Petri nets.

    kpnmc check MODEL.ppn [--formula NAME=EXPR ...] [options]
    kpnmc bench dcp --n 10 --pattern sequential [options]
    kpnmc dot MODEL.ppn OUT.dot [--agent NAME]

``check`` and ``bench`` print one ``NAME: valid|invalid`` line per formula
followed by the statistics block. Exit status is 0 when every formula holds,
1 when one fails and 2 on any error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .checker import Checker, check_formula
from .ctlk import FormulaError, parse_formula
from .models import (
    PATTERNS, PHI1, PHI2, PHI3, gen_alice_bob, gen_dcp, gen_dcp_formulas,
)
from .net import KpnError
from .oracle import DEFAULT_STATE_CAP, ExplicitChecker, build_rger, to_dot
from .ordering import noack_order, read_order, structural_order
from .ppn import PpnError, dump, load
from .symbolic import SymContext

FAMILIES = ("alice-bob", "alice-bob-attacker", "dcp")
EXACT_BELOW = 10**12


class UsageError(Exception):
    pass


def _order(net, spec):
    if spec == "structural":
        return structural_order(net)
    if spec == "noack":
        return noack_order(net)
    if spec.startswith("file:"):
        return read_order(spec[len("file:"):], net)
    raise UsageError(f"unknown order {spec!r}")


def _fmt_count(n, exact):
    if exact or n < EXACT_BELOW:
        return str(n)
    return f"{n:.4g}"


def run(net, formulas, args, out=None):
    """Order, mark and verify; prints the report and returns the exit status."""
    out = out or sys.stdout
    results = []
    if args.engine == "explicit":
        t0 = time.perf_counter()
        t1 = time.perf_counter()
        rger = build_rger(net, args.state_cap)
        t2 = time.perf_counter()
        ex = ExplicitChecker(rger, net, args.d_semantics)
        for name, f in formulas.items():
            results.append((name, 0 in ex.sat(f)))
        t3 = time.perf_counter()
        count, peak, mem = len(rger), 0, 0
        extra = ["engine=explicit", f"edges={sum(map(len, rger.edges))}"]
    else:
        t0 = time.perf_counter()
        order = _order(net, args.order)
        t1 = time.perf_counter()
        ctx = SymContext(net, order, pre_mode=args.pre)
        reached = ctx.mark()
        t2 = time.perf_counter()
        checker = Checker(ctx, args.d_semantics)
        for name, f in formulas.items():
            results.append((name, check_formula(ctx, f, checker)))
        t3 = time.perf_counter()
        count = ctx.count(reached)
        st = ctx.mgr.stats()
        peak, mem = st.peak_nodes, st.peak_nodes * ctx.mgr._node_bytes
        extra = [
            f"engine=symbolic backend={ctx.mgr.backend}",
            f"iterations={ctx.iterations}",
            f"nodes_reached={ctx.mgr.node_count(reached)}",
            f"nodes_live={st.live_nodes}",
            f"gc_runs={ctx.mgr.collections}",
        ]
    for name, ok in results:
        print(f"{name}: {'valid' if ok else 'invalid'}", file=out)
    print(f"states={_fmt_count(count, args.count)}", file=out)
    print(f"t_order={t1 - t0:.3f}", file=out)
    print(f"t_mark={t2 - t1:.3f}", file=out)
    print(f"t_verify={t3 - t2:.3f}", file=out)
    print(f"nodes_peak={peak}", file=out)
    print(f"mem_est={mem}", file=out)
    if args.stats:
        for line in extra:
            print(line, file=out)
    if args.dot:
        Path(args.dot).write_text(to_dot(build_rger(net, args.state_cap), net))
    return 0 if all(ok for _, ok in results) else 1


def _extra_formulas(specs, net):
    out = {}
    for spec in specs or ():
        name, eq, expr = spec.partition("=")
        if not eq or not name.strip():
            raise UsageError(f"--formula expects NAME=EXPR, got {spec!r}")
        out[name.strip()] = parse_formula(expr, net)
    return out


def cmd_check(args):
    net, formulas = load(args.model)
    formulas.update(_extra_formulas(args.formula, net))
    return run(net, formulas, args)


def bench_model(family, n=None, pattern="parallel"):
    """The net and named formulas of a benchmark family."""
    if family == "dcp":
        if n is None:
            raise UsageError("dcp needs --n")
        if n < 3:
            raise UsageError("dcp needs at least 3 cryptographers")
        phi4, phi5 = gen_dcp_formulas(n)
        return gen_dcp(n, pattern), {"phi4": phi4, "phi5": phi5}
    if family == "alice-bob":
        return gen_alice_bob(False), {"phi1": parse_formula(PHI1), "phi2": parse_formula(PHI2)}
    if family == "alice-bob-attacker":
        fs = {name: parse_formula(t) for name, t in (("phi1", PHI1), ("phi2", PHI2), ("phi3", PHI3))}
        return gen_alice_bob(True), fs
    raise UsageError(f"unknown family {family!r}")


def cmd_bench(args):
    net, formulas = bench_model(args.family, args.n, args.pattern)
    if args.emit:
        dump(args.emit, net, formulas)
    return run(net, formulas, args)


def cmd_dot(args):
    net, _ = load(args.model)
    rger = build_rger(net, args.state_cap)
    Path(args.out).write_text(to_dot(rger, net, args.agent))
    print(f"wrote {len(rger)} markings to {args.out}")
    return 0


def _common(p):
    p.add_argument("--order", default="structural",
                   help="structural, noack or file:<path> (default structural)")
    p.add_argument("--count", action="store_true", help="print the exact marking count")
    p.add_argument("--engine", choices=("symbolic", "explicit"), default="symbolic")
    p.add_argument("--pre", choices=("exact", "verbatim"), default="exact",
                   help="backward image used by EX/EG/EU")
    p.add_argument("--d-semantics", choices=("def4", "alg11"), default="def4",
                   help="distributed knowledge: pooled view or per-agent intersection")
    p.add_argument("--dot", metavar="PATH", help="also write the explicit graph as DOT")
    p.add_argument("--stats", action="store_true", help="print extra engine statistics")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP,
                   help="marking limit for the explicit engine and DOT export")


def build_parser():
    parser = argparse.ArgumentParser(prog="kpnmc", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"kpnmc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify the formulas of a .ppn model")
    p.add_argument("model")
    p.add_argument("--formula", action="append", metavar="NAME=EXPR",
                   help="extra formula (repeatable)")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="generate and verify a benchmark model")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, help="number of cryptographers (dcp)")
    p.add_argument("--pattern", choices=PATTERNS, default="parallel")
    p.add_argument("--emit", metavar="PATH", help="write the generated model as .ppn")
    _common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dot", help="export the reachability graph of a model as DOT")
    p.add_argument("model")
    p.add_argument("out")
    p.add_argument("--agent", help="colour nodes by this agent's classes")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PpnError, KpnError, FormulaError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
