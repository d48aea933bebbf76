"""Symbolic state-space construction over BDDs.

Markings are minterms over one variable per place. Reachability follows the
frontier loop of the classic forward fixpoint, predecessor and equivalence
images are computed on demand from the net structure; no transition or
equivalence relation is ever built as a BDD.
"""

from __future__ import annotations

from .bdd import Manager
from .net import Kpn, KpnError, agent_places


class SymContext:
    """A net, a BDD manager laid out by ``order``, and the reachable set.

    ``pre_mode`` is ``"exact"`` (default) or ``"verbatim"``; the latter keeps
    the looser backward image that only constrains the post-set of each
    transition, and can admit reachable markings that are not predecessors.
    ``backend`` picks a kernel module explicitly (see ``kpnmc.bdd``).
    """

    def __init__(self, net: Kpn, order=None, pre_mode="exact", backend=None):
        if pre_mode not in ("exact", "verbatim"):
            raise ValueError(f"unknown pre mode {pre_mode!r}")
        self.net = net
        self.order = list(order) if order is not None else list(range(net.num_places))
        self.mgr = Manager(net.num_places, self.order, backend=backend)
        self.pre_mode = pre_mode
        self._reached = None
        self.iterations = 0
        mgr = self.mgr
        self._x = [mgr.literal(p) for p in range(net.num_places)]
        self._nx = [mgr.literal(p, False) for p in range(net.num_places)]
        # Per transition: enabling cube, forward frame cube, backward cubes.
        self._enable = []
        self._post_on = []
        self._fwd = []
        self._bwd_guard = []
        self._bwd_frame = []
        self._loose_guard = []
        self._loose_frame = []
        self._changed = []
        for t in net.transitions:
            self._enable.append(mgr.cube({p: True for p in t.pre}))
            self._fwd.append(mgr.cube({**{p: False for p in t.consumed},
                                       **{p: True for p in t.produced}}))
            self._post_on.append([self._x[p] for p in t.produced])
            self._bwd_guard.append(mgr.cube({**{p: True for p in t.post},
                                             **{p: False for p in t.consumed}}))
            self._bwd_frame.append(mgr.cube({**{p: True for p in t.pre},
                                             **{p: False for p in t.produced}}))
            self._loose_guard.append(mgr.cube({p: True for p in t.post}))
            self._loose_frame.append(mgr.cube({**{p: True for p in t.consumed},
                                               **{p: False for p in t.produced}}))
            self._changed.append(frozenset(t.changed))
        self._changed_cube = [mgr.cube({p: True for p in ch}) for ch in self._changed]
        self._agent_cache = {}

    # -- encoding -------------------------------------------------------

    def encode(self, m):
        """The minterm of marking ``m``."""
        return self.mgr.cube({p: bool(v) for p, v in enumerate(m)})

    def literal(self, p):
        """All markings (reachable or not) with place ``p`` marked."""
        return self._x[p]

    def place(self, p):
        """Markings of the reachable set with place ``p`` marked."""
        return self.reached & self._x[p]

    def decode(self, s):
        """Yield every marking in ``s`` as a 0/1 tuple."""
        for row in self.mgr.assignments(s):
            yield tuple(int(b) for b in row)

    # -- images -------------------------------------------------------

    def enable_set(self, t, mx):
        return mx & self._enable[t]

    def img(self, t, mx):
        """Markings obtained by firing transition ``t`` from some marking of ``mx``."""
        e = mx & self._enable[t]
        if e.is_false:
            return e
        for lit in self._post_on[t]:
            if not (e & lit).is_false:
                name = self.net.transitions[t].name
                raise KpnError("one-safeness violation", f"at transition {name}")
        mgr = self.mgr
        moved = mgr._wrap(mgr._k.exists(e.node, self._changed_cube[t].node))
        return moved & self._fwd[t]

    def mark(self):
        """Compute (once) and return the reachable set."""
        if self._reached is not None:
            return self._reached
        m0 = self.encode(self.net.initial)
        reached = frm = m0
        ntrans = len(self.net.transitions)
        while True:
            self.iterations += 1
            for t in range(ntrans):
                frm = frm | self.img(t, frm)
            new = frm - reached
            if new.is_false:
                break
            frm = new
            reached = reached | new
        self._reached = reached
        return reached

    @property
    def reached(self):
        return self.mark()

    def pre_t(self, t, mx):
        """Predecessors of ``mx`` via transition ``t``, not yet filtered by reachability."""
        mgr = self.mgr
        if self.pre_mode == "exact":
            guard, frame = self._bwd_guard[t], self._bwd_frame[t]
        else:
            guard, frame = self._loose_guard[t], self._loose_frame[t]
        g = mx & guard
        if g.is_false:
            return g
        moved = mgr._wrap(mgr._k.exists(g.node, self._changed_cube[t].node))
        return moved & frame

    def pre(self, mx):
        """Reachable markings with a successor in ``mx``."""
        acc = self.mgr.false
        for t in range(len(self.net.transitions)):
            acc = acc | self.pre_t(t, mx)
        return self.reached & acc

    def eq(self, mx, group):
        """Reachable markings indistinguishable from some marking of ``mx``.

        For a group of agents the observation is the union of their knowledge
        places, i.e. the view of one agent owning all of them.
        """
        return self.reached & self.eq_raw(mx, group)

    def eq_raw(self, mx, group):
        """``eq`` without the final intersection with the reachable set."""
        group = frozenset(group)
        if not group:
            raise KpnError("empty agent group")
        cube = self._agent_cache.get(group)
        if cube is None:
            visible = agent_places(self.net, group)
            hidden = [p for p in range(self.net.num_places) if p not in visible]
            cube = self.mgr.cube({p: True for p in hidden})
            self._agent_cache[group] = cube
        mgr = self.mgr
        return mgr._wrap(mgr._k.exists(mx.node, cube.node))

    def count(self, s):
        return self.mgr.sat_count(s)

    def contains(self, s, m):
        return self.mgr.evaluate(s, [bool(v) for v in m])
