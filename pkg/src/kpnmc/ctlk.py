"""CTLK formulas: syntax tree, parser, printer and ENF rewriting.

Grammar (``&`` binds tighter than ``|``, which binds tighter than the
right-associative ``->``; prefix operators bind tightest)::

    imp   := or ('->' imp)?
    or    := and ('|' and)*
    and   := unary ('&' unary)*
    unary := '!' unary | EX unary | EG unary | EF unary
           | AX unary | AG unary | AF unary
           | 'K{' agent '}' unary | ('E'|'D'|'C') '{' agents '}' unary
           | ('E'|'A') '[' imp 'U' imp ']'
           | '(' imp ')' | 'true' | 'false' | 'deadlock' | place
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class FormulaError(ValueError):
    """Syntax or name-resolution error; ``pos`` is a character offset or None."""

    def __init__(self, msg, pos=None):
        self.pos = pos
        super().__init__(f"{msg} at position {pos}" if pos is not None else msg)


# -- syntax tree --------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Deadlock:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Temporal:
    """Unary path operator; ``op`` is one of EX EG EF AX AG AF."""

    op: str
    f: "Formula"


@dataclass(frozen=True)
class Until:
    """``E[left U right]`` when ``exists`` else ``A[left U right]``."""

    exists: bool
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Epistemic:
    """Knowledge operator; ``op`` is K, E, D or C and ``group`` holds agent names."""

    op: str
    group: tuple
    f: "Formula"


Formula = Union[Const, Deadlock, Atom, Not, And, Or, Implies, Temporal, Until, Epistemic]

TRUE = Const(True)
FALSE = Const(False)
TEMPORAL_OPS = ("EX", "EG", "EF", "AX", "AG", "AF")


def Know(agent, f):
    return Epistemic("K", (agent,), f)


def Everyone(group, f):
    return Epistemic("E", tuple(group), f)


def Dist(group, f):
    return Epistemic("D", tuple(group), f)


def Common(group, f):
    return Epistemic("C", tuple(group), f)


def ex(f):
    return Temporal("EX", f)


def eg(f):
    return Temporal("EG", f)


def ef(f):
    return Temporal("EF", f)


def ax(f):
    return Temporal("AX", f)


def ag(f):
    return Temporal("AG", f)


def af(f):
    return Temporal("AF", f)


def eu(f, g):
    return Until(True, f, g)


def au(f, g):
    return Until(False, f, g)


def conj(fs):
    """Left-nested conjunction; ``true`` when empty."""
    fs = list(fs)
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(fs):
    fs = list(fs)
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_]*)|([!&|()\[\]{},]))")
_KEYWORDS = {"true", "false", "deadlock", "U"} | set(TEMPORAL_OPS)


def _tokenize(text):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise FormulaError(f"expected {expected!r}, found {shown}", pos)
        if tok:
            self.i += 1
        return tok

    def parse(self):
        f = self.imp()
        if self.peek():
            raise FormulaError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def imp(self):
        left = self.or_()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def or_(self):
        f = self.and_()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.and_())
        return f

    def and_(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def group(self):
        self.take("{")
        names = [self.ident()]
        while self.peek() == ",":
            self.take()
            names.append(self.ident())
        self.take("}")
        return tuple(names)

    def ident(self):
        tok, pos = self.toks[self.i]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok or "-"):
            raise FormulaError("expected a name", pos)
        self.i += 1
        return tok

    def unary(self):
        tok, pos = self.toks[self.i]
        nxt = self.peek(1)
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in TEMPORAL_OPS:
            self.take()
            return Temporal(tok, self.unary())
        if tok in ("E", "A") and nxt == "[":
            self.take()
            self.take("[")
            left = self.imp()
            self.take("U")
            right = self.imp()
            self.take("]")
            return Until(tok == "E", left, right)
        if tok in ("K", "E", "D", "C") and nxt == "{":
            self.take()
            group = self.group()
            if tok == "K" and len(group) != 1:
                raise FormulaError("K takes exactly one agent", pos)
            return Epistemic(tok, group, self.unary())
        if tok == "(":
            self.take()
            f = self.imp()
            self.take(")")
            return f
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok == "deadlock":
            self.take()
            return Deadlock()
        if tok and tok not in _KEYWORDS and re.fullmatch(r"[A-Za-z_]\w*", tok):
            self.take()
            return Atom(tok)
        raise FormulaError(f"unexpected {tok!r}" if tok else "unexpected end of input", pos)


def parse_formula(text, net=None) -> Formula:
    """Parse ``text``; when ``net`` is given, check place and agent names."""
    f = _Parser(text).parse()
    if net is not None:
        resolve(f, net)
    return f


def resolve(f, net):
    """Raise ``FormulaError`` if ``f`` names an unknown place or agent."""
    places = set(net.places)
    agents = set(net.agents)
    for node in walk(f):
        if isinstance(node, Atom) and node.name not in places:
            raise FormulaError(f"unknown place {node.name!r}")
        if isinstance(node, Epistemic):
            if not node.group:
                raise FormulaError("empty agent group")
            for a in node.group:
                if a not in agents:
                    raise FormulaError(f"unknown agent {a!r}")


def walk(f):
    """Yield every node of ``f`` in pre-order."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def children(f):
    if isinstance(f, (Not, Temporal, Epistemic)):
        return (f.f,)
    if isinstance(f, (And, Or, Implies, Until)):
        return (f.left, f.right)
    return ()


# -- printing ------------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}


def to_text(f) -> str:
    """Render ``f`` in the concrete syntax accepted by ``parse_formula``."""
    return _show(f, 0)


def _show(f, ctx):
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Deadlock):
        return "deadlock"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + _show(f.f, 4)
    if isinstance(f, Temporal):
        return f"{f.op} " + _show(f.f, 4)
    if isinstance(f, Epistemic):
        return f"{f.op}{{{','.join(f.group)}}} " + _show(f.f, 4)
    if isinstance(f, Until):
        q = "E" if f.exists else "A"
        return f"{q}[{_show(f.left, 0)} U {_show(f.right, 0)}]"
    prec = _PREC[type(f)]
    if isinstance(f, Implies):
        s = f"{_show(f.left, prec + 1)} -> {_show(f.right, prec)}"
    else:
        sym = " & " if isinstance(f, And) else " | "
        s = _show(f.left, prec) + sym + _show(f.right, prec + 1)
    return f"({s})" if prec < ctx else s


# -- normal form ---------------------------------------------------------------

def to_enf(f) -> Formula:
    """Rewrite into true/atom/not/and/EX/EG/EU and the epistemic operators.

    ``A[f U g]`` uses the standard rewrite ``!E[!g U (!f & !g)] & !EG !g``.
    """
    if isinstance(f, Const):
        return TRUE if f.value else Not(TRUE)
    if isinstance(f, Deadlock):
        return Not(ex(TRUE))
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(to_enf(f.f))
    if isinstance(f, And):
        return And(to_enf(f.left), to_enf(f.right))
    if isinstance(f, Or):
        return Not(And(Not(to_enf(f.left)), Not(to_enf(f.right))))
    if isinstance(f, Implies):
        return to_enf(Or(Not(f.left), f.right))
    if isinstance(f, Epistemic):
        return Epistemic(f.op, f.group, to_enf(f.f))
    if isinstance(f, Until):
        if f.exists:
            return eu(to_enf(f.left), to_enf(f.right))
        a, b = to_enf(f.left), to_enf(f.right)
        na, nb = Not(a), Not(b)
        return And(Not(eu(nb, And(na, nb))), Not(eg(nb)))
    op, g = f.op, f.f
    if op == "EX":
        return ex(to_enf(g))
    if op == "EG":
        return eg(to_enf(g))
    if op == "EF":
        return eu(TRUE, to_enf(g))
    if op == "AX":
        return And(Not(ex(Not(to_enf(g)))), Not(to_enf(Deadlock())))
    if op == "AG":
        return Not(to_enf(ef(Not(g))))
    if op == "AF":
        return to_enf(au(TRUE, g))
    raise FormulaError(f"unknown operator {op!r}")


def au_as_printed(f, g) -> Formula:
    """The alternative ``A[f U g]`` rewrite guarding with ``!f`` instead of ``!g``.

    Kept for comparison against the path semantics; it is not used by
    ``to_enf``.
    """
    nf, ng = Not(f), Not(g)
    return And(Not(eu(nf, And(nf, ng))), Not(eg(nf)))


def is_enf(f) -> bool:
    for node in walk(f):
        if isinstance(node, (Or, Implies, Deadlock)):
            return False
        if isinstance(node, Const) and not node.value:
            return False
        if isinstance(node, Temporal) and node.op not in ("EX", "EG"):
            return False
        if isinstance(node, Until) and not node.exists:
            return False
    return True


# -- size statistics -------------------------------------------------------------

def count_atoms(f) -> int:
    """Atomic-proposition occurrences."""
    return sum(isinstance(n, Atom) for n in walk(f))


def count_operators(f) -> int:
    """Operator occurrences, with each binary connective counted once per use."""
    return sum(not isinstance(n, (Atom, Const, Deadlock)) for n in walk(f))


def depth(f) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)
