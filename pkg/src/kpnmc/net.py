"""Knowledge-oriented Petri nets: data model, validation and the token game.

Places, transitions and agents are identified by dense integer indices in
declaration order; names are kept for display and for parsing formulas.
A marking is a tuple of 0/1 ints indexed by place.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class KpnError(ValueError):
    """Structural or behavioural error in a net.

    ``kind`` is a short stable identifier such as ``"labeled state place"``.
    """

    def __init__(self, kind, detail=""):
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind}: {detail}" if detail else kind)


@dataclass(frozen=True)
class Transition:
    name: str
    pre: frozenset[int]
    post: frozenset[int]

    @property
    def consumed(self):
        return self.pre - self.post

    @property
    def produced(self):
        return self.post - self.pre

    @property
    def changed(self):
        return self.pre ^ self.post


@dataclass(frozen=True)
class Kpn:
    places: tuple[str, ...]
    state_places: frozenset[int]
    knowledge_places: frozenset[int]
    transitions: tuple[Transition, ...]
    initial: tuple[int, ...]
    agents: tuple[str, ...]
    labels: dict[int, frozenset[int]] = field(hash=False)

    @property
    def num_places(self):
        return len(self.places)

    @property
    def num_arcs(self):
        return sum(len(t.pre) + len(t.post) for t in self.transitions)

    @property
    def num_drawn_arcs(self):
        """Arcs as usually drawn: a self-loop is one double-headed arc."""
        return sum(len(t.pre | t.post) for t in self.transitions)

    def place(self, name):
        try:
            return self._place_index[name]
        except KeyError:
            raise KpnError("unknown place", name) from None

    def agent(self, name):
        try:
            return self._agent_index[name]
        except KeyError:
            raise KpnError("unknown agent", name) from None

    def transition(self, name):
        for i, t in enumerate(self.transitions):
            if t.name == name:
                return i
        raise KpnError("unknown transition", name)

    @property
    def _place_index(self):
        idx = self.__dict__.get("_pidx")
        if idx is None:
            idx = {n: i for i, n in enumerate(self.places)}
            object.__setattr__(self, "_pidx", idx)
        return idx

    @property
    def _agent_index(self):
        idx = self.__dict__.get("_aidx")
        if idx is None:
            idx = {n: i for i, n in enumerate(self.agents)}
            object.__setattr__(self, "_aidx", idx)
        return idx

    def marking(self, names):
        """Marking with exactly the named places marked."""
        m = [0] * self.num_places
        for n in names:
            m[self.place(n)] = 1
        return tuple(m)

    def marked_names(self, m):
        return {self.places[i] for i, v in enumerate(m) if v}


class KpnBuilder:
    """Incremental construction of a ``Kpn`` by name."""

    def __init__(self, agents=()):
        self._places = []
        self._kinds = {}
        self._labels = {}
        self._init = {}
        self._agents = list(agents)
        self._trans = []

    def agent(self, name):
        if name not in self._agents:
            self._agents.append(name)
        return self

    def state(self, name, init=0):
        return self._add(name, "state", None, init)

    def knowledge(self, name, agents, init=0):
        return self._add(name, "knowledge", tuple(agents), init)

    def _add(self, name, kind, agents, init):
        if name in self._kinds:
            raise KpnError("duplicate place", name)
        self._places.append(name)
        self._kinds[name] = kind
        if agents is not None:
            self._labels[name] = agents
        self._init[name] = init
        return self

    def set_initial(self, name, value):
        self._init[name] = value
        return self

    def trans(self, name, pre=(), post=(), loops=()):
        """Add a transition; ``loops`` places are both consumed and produced."""
        self._trans.append((name, list(pre) + list(loops), list(post) + list(loops)))
        return self

    def add_arcs(self, name, pre=(), post=()):
        for i, (n, p, q) in enumerate(self._trans):
            if n == name:
                self._trans[i] = (n, p + list(pre), q + list(post))
                return self
        raise KpnError("unknown transition", name)

    def build(self, check=True):
        pidx = {n: i for i, n in enumerate(self._places)}
        aidx = {n: i for i, n in enumerate(self._agents)}

        def resolve(names, what):
            out = set()
            for n in names:
                if n not in pidx:
                    raise KpnError("dangling arc reference", f"{what} -> {n}")
                out.add(pidx[n])
            return frozenset(out)

        labels = {}
        for name, agents in self._labels.items():
            ids = set()
            for a in agents:
                if a not in aidx:
                    raise KpnError("unknown agent", a)
                ids.add(aidx[a])
            labels[pidx[name]] = frozenset(ids)
        net = Kpn(
            places=tuple(self._places),
            state_places=frozenset(pidx[n] for n, k in self._kinds.items() if k == "state"),
            knowledge_places=frozenset(pidx[n] for n, k in self._kinds.items() if k == "knowledge"),
            transitions=tuple(
                Transition(n, resolve(p, n), resolve(q, n)) for n, p, q in self._trans
            ),
            initial=tuple(self._init[n] for n in self._places),
            agents=tuple(self._agents),
            labels=labels,
        )
        if check:
            validate(net)
        return net


def validate(net: Kpn) -> None:
    """Raise ``KpnError`` unless ``net`` satisfies the KPN side conditions."""
    n = net.num_places
    overlap = net.state_places & net.knowledge_places
    if overlap:
        raise KpnError("overlapping state/knowledge places", net.places[min(overlap)])
    if (net.state_places | net.knowledge_places) != frozenset(range(n)):
        missing = frozenset(range(n)) - (net.state_places | net.knowledge_places)
        raise KpnError("unclassified place", net.places[min(missing)])
    for p, ags in net.labels.items():
        if p in net.state_places:
            raise KpnError("labeled state place", net.places[p])
        if not ags:
            raise KpnError("unlabeled knowledge place", net.places[p])
        if any(not 0 <= a < len(net.agents) for a in ags):
            raise KpnError("unknown agent", net.places[p])
    for p in net.knowledge_places:
        if p not in net.labels:
            raise KpnError("unlabeled knowledge place", net.places[p])
    for t in net.transitions:
        if any(not 0 <= p < n for p in t.pre | t.post):
            raise KpnError("dangling arc reference", t.name)
        if not (t.pre or t.post):
            raise KpnError("isolated transition", t.name)
    if len(net.initial) != n or any(v not in (0, 1) for v in net.initial):
        raise KpnError("non-binary initial marking")
    if len(set(net.places)) != n:
        raise KpnError("duplicate place")
    if len(set(net.agents)) != len(net.agents):
        raise KpnError("duplicate agent")
    if len({t.name for t in net.transitions}) != len(net.transitions):
        raise KpnError("duplicate transition")


def enabled(net: Kpn, m, t) -> bool:
    return all(m[p] for p in net.transitions[t].pre)


def fire(net: Kpn, m, t):
    """Successor of ``m`` under transition index ``t``; the net must stay safe."""
    tr = net.transitions[t]
    if not all(m[p] for p in tr.pre):
        raise KpnError("transition not enabled", tr.name)
    out = list(m)
    for p in tr.produced:
        if out[p]:
            raise KpnError("one-safeness violation", f"{tr.name} puts a second token on {net.places[p]}")
        out[p] = 1
    for p in tr.consumed:
        out[p] = 0
    return tuple(out)


def successors(net: Kpn, m):
    """Yield ``(t, m')`` for every transition enabled at ``m``."""
    for i, tr in enumerate(net.transitions):
        if all(m[p] for p in tr.pre):
            yield i, fire(net, m, i)


def projection(m, places) -> frozenset[int]:
    return frozenset(p for p in places if m[p])


def agent_places(net: Kpn, group) -> frozenset[int]:
    """Knowledge places labelled with at least one agent of ``group``.

    ``group`` may hold agent indices or names.
    """
    ids = {net.agent(a) if isinstance(a, str) else a for a in group}
    for a in ids:
        if not 0 <= a < len(net.agents):
            raise KpnError("unknown agent", str(a))
    return frozenset(p for p in net.knowledge_places if net.labels[p] & ids)
