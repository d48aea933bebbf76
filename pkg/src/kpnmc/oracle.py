"""Explicit-state reference checker.

Builds the full reachability graph with the per-agent indistinguishability
partitions and evaluates formulas of any syntax directly on it, without
rewriting to normal form. Meant for small nets and for validating the
symbolic engine.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .checker import Checker
from .ctlk import (
    And, Atom, Const, Deadlock, Epistemic, Formula, FormulaError, Implies, Not, Or,
    Temporal, Until, resolve, to_enf, to_text,
)
from .net import Kpn, KpnError, agent_places, projection, successors
from .symbolic import SymContext

DEFAULT_STATE_CAP = 200_000

PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)


@dataclass
class Rger:
    """Reachability graph with equivalence relations.

    ``edges[i]`` lists ``(transition, j)`` pairs; ``classes[a][i]`` is the
    class id of marking ``i`` for agent index ``a``.
    """

    markings: list
    index: dict
    edges: list
    classes: list = field(default_factory=list)

    def __len__(self):
        return len(self.markings)

    @property
    def deadlocks(self):
        return frozenset(i for i, out in enumerate(self.edges) if not out)

    def preds(self):
        back = [[] for _ in self.markings]
        for i, out in enumerate(self.edges):
            for _, j in out:
                back[j].append(i)
        return back

    def partition(self, a):
        """Classes of agent ``a`` as a list of index lists."""
        groups = {}
        for i, c in enumerate(self.classes[a]):
            groups.setdefault(c, []).append(i)
        return list(groups.values())


def build_rger(net: Kpn, state_cap=DEFAULT_STATE_CAP) -> Rger:
    """Breadth-first exploration from the initial marking."""
    m0 = tuple(net.initial)
    markings = [m0]
    index = {m0: 0}
    edges = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        out = []
        for t, m in successors(net, markings[i]):
            j = index.get(m)
            if j is None:
                if len(markings) >= state_cap:
                    raise KpnError("state cap exceeded", f"more than {state_cap} markings")
                j = len(markings)
                index[m] = j
                markings.append(m)
                queue.append(j)
            out.append((t, j))
        while len(edges) <= i:
            edges.append([])
        edges[i] = out
    rger = Rger(markings, index, edges)
    rger.classes = [_classes(markings, agent_places(net, [a])) for a in range(len(net.agents))]
    return rger


def _classes(markings, places):
    ids = {}
    return [ids.setdefault(projection(m, places), len(ids)) for m in markings]


def _group_classes(rger, net, group):
    """Class ids of the pooled observation of ``group``."""
    return _classes(rger.markings, agent_places(net, group))


def _components(rger, agents):
    """Connected components of the union of the agents' relations."""
    parent = list(range(len(rger)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in agents:
        first = {}
        for i, c in enumerate(rger.classes[a]):
            if c in first:
                ra, rb = find(first[c]), find(i)
                if ra != rb:
                    parent[ra] = rb
            else:
                first[c] = i
    return [find(i) for i in range(len(rger))]


def _backward_closure(rger, seeds, within, back):
    """Markings in ``within`` that reach ``seeds`` through ``within``."""
    out = set(seeds)
    stack = list(seeds)
    while stack:
        j = stack.pop()
        for i in back[j]:
            if i in within and i not in out:
                out.add(i)
                stack.append(i)
    return out


def _on_cycle(rger, within):
    """Markings of ``within`` lying on a cycle of the graph restricted to ``within``."""
    # iterative Tarjan
    index = {}
    low = {}
    on_stack = set()
    stack = []
    result = set()
    counter = 0
    for root in within:
        if root in index:
            continue
        work = [(root, iter(rger.edges[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for _, w in it:
                if w not in within:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(rger.edges[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or any(w == v for _, w in rger.edges[v]):
                    result.update(comp)
    return result


class ExplicitChecker:
    """Direct evaluation of formulas on a ``Rger``."""

    def __init__(self, rger: Rger, net: Kpn, d_semantics="def4"):
        self.rger = rger
        self.net = net
        self.d_semantics = d_semantics
        self.all = frozenset(range(len(rger)))
        self._back = rger.preds()
        self._memo = {}

    def sat(self, f: Formula) -> frozenset:
        r = self._memo.get(f)
        if r is None:
            r = frozenset(self._sat(f))
            self._memo[f] = r
        return r

    def _sat(self, f):
        rger, n = self.rger, len(self.rger)
        if isinstance(f, Const):
            return self.all if f.value else frozenset()
        if isinstance(f, Deadlock):
            return rger.deadlocks
        if isinstance(f, Atom):
            p = self.net.place(f.name)
            return {i for i, m in enumerate(rger.markings) if m[p]}
        if isinstance(f, Not):
            return self.all - self.sat(f.f)
        if isinstance(f, And):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, Or):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, Implies):
            return (self.all - self.sat(f.left)) | self.sat(f.right)
        if isinstance(f, Temporal):
            s = self.sat(f.f)
            if f.op == "EX":
                return {i for i in range(n) if any(j in s for _, j in rger.edges[i])}
            if f.op == "AX":
                return {i for i in range(n)
                        if rger.edges[i] and all(j in s for _, j in rger.edges[i])}
            if f.op == "EF":
                return _backward_closure(rger, s, self.all, self._back)
            if f.op == "AG":
                bad = _backward_closure(rger, self.all - s, self.all, self._back)
                return self.all - bad
            if f.op == "EG":
                return self._eg(s)
            if f.op == "AF":
                return self.all - self._eg(self.all - s)
        if isinstance(f, Until):
            a, b = self.sat(f.left), self.sat(f.right)
            if f.exists:
                return _backward_closure(rger, b, a | b, self._back)
            return self._au(a, b)
        if isinstance(f, Epistemic):
            return self._epistemic(f)
        raise FormulaError(f"unsupported formula {f!r}")

    def _eg(self, s):
        """Markings starting a maximal computation inside ``s``."""
        seeds = set(self.rger.deadlocks & s) | _on_cycle(self.rger, s)
        return _backward_closure(self.rger, seeds, s, self._back)

    def _au(self, a, b):
        """Every maximal computation reaches ``b`` through ``a``."""
        rger = self.rger
        y = set(b)
        changed = True
        while changed:
            changed = False
            for i in range(len(rger)):
                if i in y or i not in a or not rger.edges[i]:
                    continue
                if all(j in y for _, j in rger.edges[i]):
                    y.add(i)
                    changed = True
        return y

    def _epistemic(self, f):
        rger, net = self.rger, self.net
        s = self.sat(f.f)
        group = [net.agent(a) for a in f.group]
        if f.op in ("K", "E"):
            bad_classes = [{rger.classes[a][i] for i in self.all - s} for a in group]
            return {i for i in range(len(rger))
                    if all(rger.classes[a][i] not in bad for a, bad in zip(group, bad_classes))}
        if f.op == "D":
            if self.d_semantics == "alg11":
                bad_classes = [{rger.classes[a][i] for i in self.all - s} for a in group]
                return {i for i in range(len(rger))
                        if not all(rger.classes[a][i] in bad for a, bad in zip(group, bad_classes))}
            pooled = _group_classes(rger, net, group)
            bad = {pooled[i] for i in self.all - s}
            return {i for i in range(len(rger)) if pooled[i] not in bad}
        comp = _components(rger, group)
        bad = {comp[i] for i in self.all - s}
        return {i for i in range(len(rger)) if comp[i] not in bad}


def sat_explicit(rger: Rger, net: Kpn, f: Formula, d_semantics="def4") -> frozenset:
    """Indices of the markings of ``rger`` satisfying ``f``."""
    resolve(f, net)
    return ExplicitChecker(rger, net, d_semantics).sat(f)


# -- cross checking ------------------------------------------------------------

@dataclass
class Divergence:
    formula: str
    marking: tuple
    symbolic: bool
    explicit: bool


@dataclass
class CrossReport:
    checked: int = 0
    divergences: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.divergences

    def __str__(self):
        if self.ok:
            return f"all match ({self.checked} formulas)"
        d = self.divergences[0]
        return (f"{len(self.divergences)} divergence(s); first: {d.formula} at "
                f"{d.marking} symbolic={d.symbolic} explicit={d.explicit}")


def cross_check(net: Kpn, formulas, order=None, pre_mode="exact", d_semantics="def4",
                explicit_d_semantics="def4", state_cap=DEFAULT_STATE_CAP, rger=None) -> CrossReport:
    """Compare symbolic and explicit satisfaction sets marking by marking.

    The first divergence per formula is recorded with its witness marking.
    """
    rger = rger or build_rger(net, state_cap)
    ctx = SymContext(net, order=order, pre_mode=pre_mode)
    ctx.mark()
    sym = Checker(ctx, d_semantics)
    exp = ExplicitChecker(rger, net, explicit_d_semantics)
    report = CrossReport()
    for f in formulas:
        resolve(f, net)
        report.checked += 1
        s = exp.sat(f)
        found = set(ctx.decode(sym.sat(to_enf(f))))
        for i, m in enumerate(rger.markings):
            if (m in found) != (i in s):
                report.divergences.append(Divergence(to_text(f), m, m in found, i in s))
                break
        else:
            extra = found - rger.index.keys()
            if extra:
                m = min(extra)
                report.divergences.append(Divergence(to_text(f), m, True, False))
    return report


# -- DOT export ------------------------------------------------------------------

def to_dot(rger: Rger, net: Kpn, agent=None) -> str:
    """The graph in DOT, nodes filled by equivalence class of ``agent``.

    ``agent`` is a name or index; the first agent is used by default. Node
    labels list the marked places.
    """
    a = 0 if agent is None else (net.agent(agent) if isinstance(agent, str) else agent)
    lines = ["digraph rger {", "  node [shape=box, style=filled];"]
    if net.agents:
        lines.append(f'  label="classes of {net.agents[a]}";')
    for i, m in enumerate(rger.markings):
        names = ",".join(net.places[p] for p, v in enumerate(m) if v) or "-"
        color = PALETTE[rger.classes[a][i] % len(PALETTE)] if net.agents else "white"
        lines.append(f'  M{i} [label="M{i}\\n{names}", fillcolor="{color}"];')
    for i, out in enumerate(rger.edges):
        for t, j in out:
            lines.append(f'  M{i} -> M{j} [label="{net.transitions[t].name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
