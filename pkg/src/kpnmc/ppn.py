"""Reading and writing the ``.ppn`` text format.

One declaration per line, ``#`` starts a comment::

    agents: a1, a2
    place p11 kind=state init=1
    place p18 kind=knowledge agents=a1
    trans t11 in=p11 out=p12,p18
    formula phi1 = AG((p17 & p27) -> E{a1,a2}(p18 & p2_11))

A self-loop lists the same place under both ``in`` and ``out``.
"""

from __future__ import annotations

import re
from pathlib import Path

from .ctlk import FormulaError, parse_formula, resolve, to_text
from .net import Kpn, KpnBuilder, KpnError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class PpnError(ValueError):
    """Syntax error in a model file, with 1-based ``line`` and ``col``."""

    def __init__(self, msg, line, col=1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {msg}")


def _fields(body, lineno, offset, allowed):
    """Parse ``key=value`` tokens; returns a dict and each key's column."""
    out = {}
    for m in re.finditer(r"\S+", body):
        col = offset + m.start() + 1
        key, eq, value = m.group().partition("=")
        if not eq:
            raise PpnError(f"expected key=value, found {m.group()!r}", lineno, col)
        if key not in allowed:
            raise PpnError(f"unknown attribute {key!r}", lineno, col)
        if key in out:
            raise PpnError(f"repeated attribute {key!r}", lineno, col)
        out[key] = (value, col)
    return out


def _names(value, lineno, col):
    if not value:
        return []
    names = value.split(",")
    for n in names:
        if not _NAME.match(n):
            raise PpnError(f"bad name {n!r}", lineno, col)
    return names


def loads(text) -> tuple[Kpn, dict]:
    """Parse a model; returns the net and an ordered ``{name: Formula}`` map."""
    b = KpnBuilder()
    formulas = {}
    pending = []
    refs = []  # (kind, name, line, col) checked once everything is declared
    places = set()
    agent_names = set()
    trans_names = set()
    seen_agents = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        word = stripped.split(None, 1)[0]
        rest_at = indent + len(word)
        rest = line[rest_at:]
        if stripped.startswith("agents:"):
            if seen_agents:
                raise PpnError("repeated agents line", lineno, indent + 1)
            seen_agents = True
            body = stripped[len("agents:"):]
            for m in re.finditer(r"[^,\s][^,]*", body):
                name = m.group().strip()
                col = indent + len("agents:") + m.start() + 1
                if not _NAME.match(name):
                    raise PpnError(f"bad agent name {name!r}", lineno, col)
                b.agent(name)
                agent_names.add(name)
        elif word == "place":
            parts = rest.split(None, 1)
            if not parts:
                raise PpnError("place needs a name", lineno, rest_at + 1)
            name = parts[0]
            if not _NAME.match(name):
                raise PpnError(f"bad place name {name!r}", lineno, line.index(name, rest_at) + 1)
            attrs_at = line.index(name, rest_at) + len(name)
            places.add(name)
            attrs = _fields(line[attrs_at:], lineno, attrs_at, {"kind", "agents", "init"})
            kind, kcol = attrs.get("kind", (None, rest_at + 1))
            init, icol = attrs.get("init", ("0", 0))
            if init not in ("0", "1"):
                raise PpnError(f"init must be 0 or 1, found {init!r}", lineno, icol)
            try:
                if kind == "state":
                    if "agents" in attrs:
                        raise KpnError("labeled state place", name)
                    b.state(name, init=int(init))
                elif kind == "knowledge":
                    value, acol = attrs.get("agents", ("", kcol))
                    agents = _names(value, lineno, acol)
                    refs.extend(("agent", a, lineno, acol) for a in agents)
                    if not agents:
                        raise KpnError("unlabeled knowledge place", name)
                    b.knowledge(name, agents, init=int(init))
                else:
                    raise PpnError("kind must be state or knowledge", lineno, kcol)
            except KpnError as exc:
                raise PpnError(str(exc), lineno, indent + 1) from None
        elif word == "trans":
            parts = rest.split(None, 1)
            if not parts:
                raise PpnError("trans needs a name", lineno, rest_at + 1)
            name = parts[0]
            if not _NAME.match(name):
                raise PpnError(f"bad transition name {name!r}", lineno, line.index(name, rest_at) + 1)
            if name in trans_names:
                raise PpnError(f"duplicate transition {name!r}", lineno, line.index(name, rest_at) + 1)
            trans_names.add(name)
            attrs_at = line.index(name, rest_at) + len(name)
            attrs = _fields(line[attrs_at:], lineno, attrs_at, {"in", "out"})
            v, c = attrs.get("in", ("", attrs_at + 1))
            pre = _names(v, lineno, c)
            refs.extend(("place", p, lineno, c) for p in pre)
            v, c = attrs.get("out", ("", attrs_at + 1))
            post = _names(v, lineno, c)
            refs.extend(("place", p, lineno, c) for p in post)
            b.trans(name, pre, post)
        elif word == "formula":
            head, eq, expr = rest.partition("=")
            name = head.strip()
            if not eq or not _NAME.match(name):
                raise PpnError("expected 'formula NAME = expr'", lineno, rest_at + 1)
            if name in dict(pending):
                col = rest_at + len(head) - len(head.lstrip()) + 1
                raise PpnError(f"duplicate formula {name!r}", lineno, col)
            expr_at = rest_at + len(head) + 1
            try:
                f = parse_formula(expr)
            except FormulaError as exc:
                col = expr_at + (exc.pos or 0) + 1
                raise PpnError(str(exc).split(" at position")[0], lineno, col) from None
            pending.append((name, (f, lineno)))
        else:
            raise PpnError(f"unknown declaration {word!r}", lineno, indent + 1)
    for kind, name, lineno, col in refs:
        if name not in (places if kind == "place" else agent_names):
            raise PpnError(f"unknown {kind} {name!r}", lineno, col)
    try:
        net = b.build()
    except KpnError as exc:
        raise PpnError(str(exc), len(text.splitlines()) or 1) from None
    for name, (f, lineno) in pending:
        try:
            resolve(f, net)
        except FormulaError as exc:
            raise PpnError(str(exc), lineno) from None
        formulas[name] = f
    return net, formulas


def load(path) -> tuple[Kpn, dict]:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(net: Kpn, formulas=None) -> str:
    """Render ``net`` and optional ``{name: Formula}`` in the ``.ppn`` format."""
    out = [f"agents: {', '.join(net.agents)}"]
    for p, name in enumerate(net.places):
        line = f"place {name}"
        if p in net.knowledge_places:
            agents = ",".join(net.agents[a] for a in sorted(net.labels[p]))
            line += f" kind=knowledge agents={agents}"
        else:
            line += " kind=state"
        if net.initial[p]:
            line += " init=1"
        out.append(line)
    for t in net.transitions:
        pre = ",".join(net.places[p] for p in sorted(t.pre))
        post = ",".join(net.places[p] for p in sorted(t.post))
        out.append(f"trans {t.name} in={pre} out={post}")
    for name, f in (formulas or {}).items():
        out.append(f"formula {name} = {to_text(f)}")
    return "\n".join(out) + "\n"


def dump(path, net: Kpn, formulas=None) -> None:
    Path(path).write_text(dumps(net, formulas), encoding="utf-8")
