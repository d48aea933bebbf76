"""Fixpoint evaluation of CTLK formulas over a symbolic reachable set."""

from __future__ import annotations

from .ctlk import (
    And, Atom, Const, Epistemic, Formula, FormulaError, Not, Temporal, Until,
    is_enf, resolve, to_enf,
)
from .symbolic import SymContext

D_SEMANTICS = ("def4", "alg11")


class Checker:
    """Computes satisfaction sets on one ``SymContext``.

    Results are memoised per sub-formula for the lifetime of the checker, so
    several formulas checked against the same context share work.
    ``d_semantics`` selects how distributed knowledge is evaluated: ``"def4"``
    pools the observations of the group, ``"alg11"`` intersects the per-agent
    images, which can over-approximate the indistinguishable set.
    """

    def __init__(self, ctx: SymContext, d_semantics="def4"):
        if d_semantics not in D_SEMANTICS:
            raise ValueError(f"unknown D semantics {d_semantics!r}")
        self.ctx = ctx
        self.d_semantics = d_semantics
        self._memo = {}
        self._dead = None

    def sat(self, f: Formula):
        """Markings of the reachable set satisfying ENF formula ``f``."""
        return self.rel(f) & self.ctx.reached

    def rel(self, f: Formula):
        """A set that agrees with ``sat(f)`` on reachable markings.

        Boolean structure is evaluated without intersecting with the reachable
        set, which keeps the intermediate BDDs small; the intersection is taken
        only where a fixpoint or an epistemic image needs exact input.
        """
        r = self._memo.get(f)
        if r is None:
            r = self._rel(f)
            self._memo[f] = r
        return r

    def _rel(self, f):
        ctx = self.ctx
        mgr = ctx.mgr
        if isinstance(f, Const):
            if not f.value:
                raise FormulaError("false is not an ENF constructor; use to_enf")
            return mgr.true
        if isinstance(f, Atom):
            return ctx.literal(ctx.net.place(f.name))
        if isinstance(f, Not):
            return ~self.rel(f.f)
        if isinstance(f, And):
            return self.rel(f.left) & self.rel(f.right)
        if isinstance(f, Temporal):
            if f.op == "EX":
                return self.sat_ex(self.sat(f.f))
            if f.op == "EG":
                return self.sat_eg(self.sat(f.f))
        if isinstance(f, Until) and f.exists:
            return self.sat_eu(self.sat(f.left), self.sat(f.right))
        if isinstance(f, Epistemic):
            group = tuple(ctx.net.agent(a) for a in f.group)
            if not group:
                raise FormulaError("empty agent group")
            neg = ctx.reached - self.rel(f.f)
            if f.op in ("K", "E"):
                return self.sat_e(group, neg)
            if f.op == "D":
                return self.sat_d(group, neg)
            return self.sat_c(group, neg)
        raise FormulaError(f"not in existential normal form: {f!r}")

    # -- temporal ---------------------------------------------------------

    def sat_ex(self, x):
        return self.ctx.pre(x)

    def deadlocks(self):
        if self._dead is None:
            reached = self.ctx.reached
            self._dead = reached - self.ctx.pre(reached)
        return self._dead

    def sat_eg(self, z):
        """Markings starting a maximal computation that stays inside ``z``.

        Infinite computations come from the greatest fixpoint of
        ``Y = z & pre(Y)``; finite ones end in a deadlock inside ``z`` and are
        collected by a least fixpoint grown backwards from those deadlocks.
        """
        ctx = self.ctx
        y1 = z
        while True:
            nxt = z & ctx.pre(y1)
            if nxt == y1:
                break
            y1 = nxt
        y2 = z & self.deadlocks()
        while True:
            nxt = y2 | (z & ctx.pre(y2))
            if nxt == y2:
                break
            y2 = nxt
        return y1 | y2

    def sat_eu(self, z, y):
        """Least fixpoint of ``Y = y | (z & pre(Y))``.

        Only the markings added in the previous round are expanded, since the
        predecessor image distributes over union.
        """
        ctx = self.ctx
        frontier = y
        while True:
            new = (z & ctx.pre(frontier)) - y
            if new.is_false:
                return y
            y = y | new
            frontier = new

    # -- epistemic ---------------------------------------------------------
    # Each takes the set ``neg`` of markings violating the argument and
    # returns the markings from which no violating marking is indistinguishable.

    def sat_e(self, group, neg):
        ctx = self.ctx
        bad = ctx.mgr.false
        for a in group:
            bad = bad | ctx.eq(neg, (a,))
        return ctx.reached - bad

    def sat_d(self, group, neg):
        ctx = self.ctx
        if self.d_semantics == "def4":
            return ctx.reached - ctx.eq(neg, group)
        bad = ctx.reached
        for a in group:
            bad = bad & ctx.eq(neg, (a,))
        return ctx.reached - bad

    def sat_c(self, group, neg):
        ctx = self.ctx
        y = frontier = neg
        while True:
            grown = ctx.mgr.false
            for a in group:
                grown = grown | ctx.eq(frontier, (a,))
            new = grown - y
            if new.is_false:
                return ctx.reached - y
            y = y | new
            frontier = new


def check_formula(ctx: SymContext, f: Formula, checker: Checker | None = None) -> bool:
    """True iff the initial marking satisfies ``f`` (any syntax; ENF is derived)."""
    resolve(f, ctx.net)
    g = f if is_enf(f) else to_enf(f)
    checker = checker or Checker(ctx)
    return ctx.contains(checker.rel(g), ctx.net.initial)


def check(net, f: Formula, order=None, pre_mode="exact", d_semantics="def4") -> bool:
    """Build a context for ``net`` under ``order`` and check ``f`` at the initial marking."""
    ctx = SymContext(net, order=order, pre_mode=pre_mode)
    ctx.mark()
    return check_formula(ctx, f, Checker(ctx, d_semantics))
