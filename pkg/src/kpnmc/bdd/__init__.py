"""Reduced ordered BDDs with a static variable order.

The node store and recursive algorithms live in a compiled extension
(``_ckernel``) when it has been built, otherwise in the pure-Python
``_pykernel``. Set ``KPNMC_PURE_PYTHON=1`` to force the fallback.
"""

import os
from dataclasses import dataclass
from itertools import product

from . import _pykernel

if os.environ.get("KPNMC_PURE_PYTHON"):
    _backend = _pykernel
else:
    try:
        from . import _ckernel as _backend
    except ImportError:  # extension not built
        _backend = _pykernel

BACKEND = _backend.BACKEND
NODE_BYTES = _backend.NODE_BYTES

__all__ = ["Manager", "Function", "BddError", "Stats", "BACKEND", "NODE_BYTES"]


class BddError(Exception):
    pass


@dataclass(frozen=True)
class Stats:
    live_nodes: int
    peak_nodes: int
    bytes: int


class Function:
    """Handle to a node of a ``Manager``; equal handles denote equal functions.

    Live handles are the roots for garbage collection in the manager.
    """

    __slots__ = ("mgr", "node")

    def __init__(self, mgr, node):
        self.mgr = mgr
        self.node = node
        refs = mgr._refs
        refs[node] = refs.get(node, 0) + 1

    def __del__(self):
        try:
            refs = self.mgr._refs
            c = refs[self.node] - 1
            if c:
                refs[self.node] = c
            else:
                del refs[self.node]
        except (AttributeError, KeyError, TypeError):  # interpreter shutdown
            pass

    def __eq__(self, other):
        if not isinstance(other, Function):
            return NotImplemented
        return self.mgr is other.mgr and self.node == other.node

    def __hash__(self):
        return hash((id(self.mgr), self.node))

    def __and__(self, other):
        return self.mgr.apply("and", self, other)

    def __or__(self, other):
        return self.mgr.apply("or", self, other)

    def __sub__(self, other):
        return self.mgr.apply("diff", self, other)

    def __xor__(self, other):
        return self.mgr.apply("xor", self, other)

    def __invert__(self):
        return self.mgr.not_(self)

    def __le__(self, other):
        """Set inclusion."""
        return (self - other).is_false

    def __ge__(self, other):
        return (other - self).is_false

    @property
    def is_false(self):
        return self.node == _pykernel.FALSE

    @property
    def is_true(self):
        return self.node == _pykernel.TRUE

    def __repr__(self):
        return f"Function(node={self.node})"


class Manager:
    """A BDD manager over ``nvars`` variables with a fixed order.

    ``order`` lists the variables from the top level down; the identity order
    is used when it is omitted. The order never changes after construction.
    """

    def __init__(self, nvars, order=None, backend=None, gc_threshold=None):
        if order is None:
            order = list(range(nvars))
        order = list(order)
        if len(order) != nvars or sorted(order) != list(range(nvars)):
            raise BddError(f"order is not a permutation of 0..{nvars - 1}")
        self.nvars = nvars
        self.order = order
        self.level_of = [0] * nvars
        for lvl, v in enumerate(order):
            self.level_of[v] = lvl
        kernel_mod = _backend if backend is None else backend
        self.backend = kernel_mod.BACKEND
        self._node_bytes = kernel_mod.NODE_BYTES
        self._k = kernel_mod.Kernel(nvars)
        self._refs = {}
        if gc_threshold is None:
            gc_threshold = 300_000 if self.backend == "python" else 2_000_000
        self._gc_floor = gc_threshold
        self._gc_next = gc_threshold
        self.collections = 0
        self.false = Function(self, _pykernel.FALSE)
        self.true = Function(self, _pykernel.TRUE)

    def _wrap(self, node):
        f = Function(self, node)
        if self._k.live() > self._gc_next:
            self.collect()
        return f

    def collect(self):
        """Free nodes not reachable from any live ``Function``; returns the count freed."""
        freed = self._k.collect(list(self._refs))
        self.collections += 1
        self._gc_next = max(self._gc_floor, 2 * self._k.live())
        return freed

    def _own(self, f):
        if f.mgr is not self:
            raise BddError("operand belongs to a different manager")
        return f.node

    def literal(self, v, phase=True):
        if not 0 <= v < self.nvars:
            raise BddError(f"variable {v} out of range")
        lvl = self.level_of[v]
        if phase:
            return self._wrap(self._k.mk(lvl, 0, 1))
        return self._wrap(self._k.mk(lvl, 1, 0))

    def apply(self, op, f, g):
        a, b = self._own(f), self._own(g)
        k = self._k
        if op == "and":
            return self._wrap(k.bdd_and(a, b))
        if op == "or":
            return self._wrap(k.bdd_or(a, b))
        if op == "diff":
            return self._wrap(k.bdd_diff(a, b))
        if op == "xor":
            return self._wrap(k.bdd_xor(a, b))
        raise BddError(f"unknown operation {op!r}")

    def not_(self, f):
        return self._wrap(self._k.bdd_diff(1, self._own(f)))

    def conj(self, fs):
        r = self.true
        for f in fs:
            r = r & f
        return r

    def disj(self, fs):
        r = self.false
        for f in fs:
            r = r | f
        return r

    def cube(self, assignment):
        """Conjunction of literals from a ``{var: bool}`` mapping."""
        node = _pykernel.TRUE
        k = self._k
        for v in sorted(assignment, key=self.level_of.__getitem__, reverse=True):
            if not 0 <= v < self.nvars:
                raise BddError(f"variable {v} out of range")
            lvl = self.level_of[v]
            node = k.mk(lvl, 0, node) if assignment[v] else k.mk(lvl, node, 0)
        return self._wrap(node)

    def exists(self, f, variables):
        variables = set(variables)
        if not variables:
            return f
        cube = self.cube({v: True for v in variables})
        return self._wrap(self._k.exists(self._own(f), cube.node))

    def forall(self, f, variables):
        return ~self.exists(~f, variables)

    def restrict(self, f, assignment):
        """Cofactor of ``f`` under a partial assignment ``{var: bool}``."""
        if not assignment:
            return f
        cube = self.cube(assignment)
        return self._wrap(self._k.restrict(self._own(f), cube.node))

    def sat_count(self, f):
        return self._k.satcount(self._own(f))

    def node_count(self, f):
        return self._k.nodecount(self._own(f))

    def support(self, f):
        """Variables ``f`` depends on."""
        k = self._k
        seen = set()
        levels = set()
        stack = [self._own(f)]
        while stack:
            node = stack.pop()
            if node < 2 or node in seen:
                continue
            seen.add(node)
            levels.add(k.level(node))
            stack.append(k.low(node))
            stack.append(k.high(node))
        return {self.order[lvl] for lvl in levels}

    def evaluate(self, f, assignment):
        """Value of ``f`` under a total assignment (sequence or mapping of bools)."""
        k = self._k
        node = self._own(f)
        while node > 1:
            v = self.order[k.level(node)]
            node = k.high(node) if assignment[v] else k.low(node)
        return node == 1

    def assignments(self, f, variables=None):
        """Yield every satisfying assignment as a tuple of bools over ``variables``.

        ``variables`` defaults to all variables; variables outside the list
        must not occur in the support of ``f``.
        """
        if variables is None:
            variables = range(self.nvars)
        variables = list(variables)
        pos = {self.level_of[v]: i for i, v in enumerate(variables)}
        width = len(variables)
        for path in self._k.pick_paths(self._own(f)):
            fixed = [None] * width
            for lvl, val in path.items():
                if lvl not in pos:
                    raise BddError("function depends on a variable outside the list")
                fixed[pos[lvl]] = val
            free = [i for i, val in enumerate(fixed) if val is None]
            for bits in product((False, True), repeat=len(free)):
                row = list(fixed)
                for i, b in zip(free, bits):
                    row[i] = b
                yield tuple(row)

    def stats(self):
        live = self._k.live()
        return Stats(live, self._k.peak, live * self._node_bytes)

    def clear_caches(self):
        self._k.clear_cache()
