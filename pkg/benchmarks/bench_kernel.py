"""Compare the compiled and pure-Python BDD kernels.

Runs the same workloads on both backends, checks that they agree, and
prints wall-clock times and the speed-up::

    python benchmarks/bench_kernel.py [--quick]
"""

import argparse
import random
import sys
import time

from kpnmc.bdd import Manager, _pykernel
from kpnmc.models import gen_dcp
from kpnmc.ordering import structural_order
from kpnmc.symbolic import SymContext

try:
    from kpnmc.bdd import _ckernel
except ImportError:
    _ckernel = None


def random_cnf(backend, nvars, nclauses, width, seed):
    """Conjunction of random clauses; returns the model count."""
    rng = random.Random(seed)
    mgr = Manager(nvars, backend=backend)
    f = mgr.true
    for _ in range(nclauses):
        clause = mgr.false
        for v in rng.sample(range(nvars), width):
            clause = clause | mgr.literal(v, rng.random() < 0.5)
        f = f & clause
    return mgr.sat_count(f)


def dcp_reach(backend, n, pattern):
    """Reachable-marking count of a dining cryptographers ring."""
    net = gen_dcp(n, pattern)
    ctx = SymContext(net, structural_order(net), backend=backend)
    return ctx.count(ctx.mark())


def timed(fn, *args):
    t = time.perf_counter()
    r = fn(*args)
    return r, time.perf_counter() - t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel not built; nothing to compare")
        return 1
    if args.quick:
        work = [
            ("cnf 30 vars x 90 clauses", random_cnf, (30, 90, 3, 1)),
            ("dcp n=5 parallel reach", dcp_reach, (5, "parallel")),
            ("dcp n=10 sequential reach", dcp_reach, (10, "sequential")),
        ]
    else:
        work = [
            ("cnf 40 vars x 120 clauses", random_cnf, (40, 120, 3, 1)),
            ("dcp n=10 parallel reach", dcp_reach, (10, "parallel")),
            ("dcp n=20 sequential reach", dcp_reach, (20, "sequential")),
        ]
    print(f"{'workload':32} {'python s':>10} {'cython s':>10} {'speed-up':>9}")
    for name, fn, extra in work:
        rp, tp = timed(fn, _pykernel, *extra)
        rc, tc = timed(fn, _ckernel, *extra)
        if rp != rc:
            print(f"{name}: backends disagree ({rp} vs {rc})")
            return 1
        print(f"{name:32} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
