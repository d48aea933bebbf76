"""Benchmark and fixture nets.

Alice-Bob password exchange (with and without an intercepting attacker),
the dining cryptographers ring in parallel and sequential layouts, and a few
small nets used to exercise ordering and backward images.
"""

from __future__ import annotations

from .ctlk import (
    And, Atom, Common, Implies, Not, Or, Know, ag, conj, disj,
)
from .net import Kpn, KpnBuilder


# -- Alice-Bob --------------------------------------------------------------

def _agent_places(b, i, agent, first_knowledge=8, last=11):
    for k in range(1, first_knowledge):
        b.state(f"p{i}{k}", init=int(k == 1))
    for k in range(first_knowledge, last + 1):
        b.knowledge(_pname(i, k), [agent])


def _pname(i, k):
    return f"p{i}{k}" if k < 10 else f"p{i}_{k}"


def gen_alice_bob(with_attacker=False) -> Kpn:
    """Alice (``a1``) sends a password to Bob (``a2``) under Bob's public key.

    Knowledge places per agent hold, in order: request sent/received,
    key sent/received, password sent/received, acknowledgement. With
    ``with_attacker`` a third agent ``a3`` competes with Bob for Alice's
    request, answers with its own key and ends up decrypting the password.
    """
    agents = ["a1", "a2"] + (["a3"] if with_attacker else [])
    b = KpnBuilder(agents)
    _agent_places(b, 1, "a1")
    _agent_places(b, 2, "a2")
    if with_attacker:
        _agent_places(b, 3, "a3")
    for c in ("c1", "c2", "c3", "c4"):
        b.state(c)
    # Alice
    b.trans("t11", ["p11"], ["p12", "p18"])
    b.trans("t12", ["p12"], ["p13", "c1"])
    b.trans("t13", ["p13", "c2"], ["p14", "p19"])
    b.trans("t14", ["p14"], ["p15", "p1_10"], loops=["p18"])
    b.trans("t15", ["p15"], ["p16", "c3"])
    b.trans("t16", ["p16", "c4"], ["p17", "p1_11"])
    # Bob
    b.trans("t21", ["p21"], ["p22", "p28", "p29"])
    b.trans("t22", ["p22", "c1"], ["p23"])
    b.trans("t23", ["p23"], ["p24", "c2"], loops=["p29"])
    b.trans("t24", ["p24", "c3"], ["p25", "p2_10"])
    b.trans("t25", ["p25"], ["p26", "p2_11"], loops=["p2_10", "p28"])
    b.trans("t26", ["p26"], ["p27", "c4"])
    if with_attacker:
        b.trans("t31", ["p31"], ["p32", "p38", "p39"])
        b.trans("t32", ["p32", "c1"], ["p33"])
        b.trans("t33", ["p33"], ["p34", "c2"])
        b.trans("t34", ["p34", "c3"], ["p35", "p3_10"])
        b.trans("t35", ["p35"], ["p36", "p3_11"])
        b.trans("t36", ["p36"], ["p37", "c4"])
    return b.build()


PHI1 = "AG((p17 & p27) -> E{a1,a2}(p18 & p2_11))"
PHI2 = "AG((p17 & p27) -> C{a1,a2}(p18 & p2_11))"
PHI3 = "EF p3_11 & !EF K{a1} p3_11 & !EF K{a2} p3_11"


# -- dining cryptographers ----------------------------------------------------

PATTERNS = ("parallel", "sequential")


def dcp_place_names(i):
    """Names of the eleven places owned by cryptographer ``i`` and its coin."""
    return [f"u{i}", f"h{i}", f"t{i}", f"r{i}", f"pd{i}", f"np{i}",
            f"lie{i}", f"tell{i}", f"ss{i}", f"sd{i}", f"said{i}"]


def gen_dcp(n, pattern="parallel", honest=()) -> Kpn:
    """Ring of ``n`` cryptographers sharing one coin with each neighbour.

    Coin ``i`` sits between cryptographers ``i`` and ``i+1`` (cyclically) and
    is visible to exactly those two. Cryptographer ``i`` first decides whether
    to pay (taking the single employer token ``paid``), then announces whether
    coins ``i-1`` and ``i`` agree, lying if it paid. ``said{i}`` marks that the
    announcement is out; ``ss{i}``/``sd{i}`` carry it to everybody.

    The sequential layout chains the steps as: coin n, coin 1, cryptographer 1,
    coin 2, cryptographer 2, ..., coin n-1, cryptographer n-1, cryptographer n.

    ``honest`` lists cryptographers whose payer branch tells the truth; it is
    a deliberately broken variant used as a negative control.
    """
    if n < 3:
        raise ValueError("dcp needs at least 3 cryptographers")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    seq = pattern == "sequential"
    agents = [f"c{i}" for i in range(1, n + 1)]
    b = KpnBuilder(agents)
    b.state("paid", init=1)
    for i in range(1, n + 1):
        right = agents[i % n]
        if seq:
            u_init = int(i != 1)
            r_init = int(i == n)
        else:
            u_init = r_init = 1
        b.state(f"u{i}", init=u_init)
        b.knowledge(f"h{i}", [agents[i - 1], right])
        b.knowledge(f"t{i}", [agents[i - 1], right])
        b.state(f"r{i}", init=r_init)
        b.knowledge(f"pd{i}", [agents[i - 1]])
        b.knowledge(f"np{i}", [agents[i - 1]])
        b.state(f"lie{i}")
        b.state(f"tell{i}")
        b.knowledge(f"ss{i}", agents)
        b.knowledge(f"sd{i}", agents)
        b.state(f"said{i}")

    for i in range(1, n + 1):
        b.trans(f"toss_h{i}", [f"u{i}"], [f"h{i}"])
        b.trans(f"toss_t{i}", [f"u{i}"], [f"t{i}"])
        b.trans(f"pay{i}", [f"r{i}", "paid"], [f"pd{i}", f"lie{i}"])
        b.trans(f"npay{i}", [f"r{i}"], [f"np{i}", f"tell{i}"])
        left = n if i == 1 else i - 1
        for mode in ("tell", "lie"):
            for cl in "ht":
                for cr in "ht":
                    differ = cl != cr
                    if mode == "lie" and i not in honest:
                        differ = not differ
                    ann = f"sd{i}" if differ else f"ss{i}"
                    b.trans(f"{mode}_{cl}{cr}{i}", [f"{mode}{i}"], [ann, f"said{i}"],
                            loops=[f"{cl}{left}", f"{cr}{i}"])

    if seq:
        b.add_arcs(f"toss_h{n}", post=["u1"])
        b.add_arcs(f"toss_t{n}", post=["u1"])
        for i in range(1, n):
            b.add_arcs(f"toss_h{i}", post=[f"r{i}"])
            b.add_arcs(f"toss_t{i}", post=[f"r{i}"])
        for i in range(1, n - 1):
            for t in (f"toss_h{i + 1}", f"toss_t{i + 1}"):
                b.add_arcs(t, pre=[f"said{i}"], post=[f"said{i}"])
        for t in (f"pay{n}", f"npay{n}"):
            b.add_arcs(t, pre=[f"said{n - 1}"], post=[f"said{n - 1}"])
    return b.build()


def gen_dcp_formulas(n):
    """The anonymity and common-knowledge properties from cryptographer 1's view.

    The first says that once everyone has spoken and cryptographer 1 did not
    pay, it either knows the employer paid, or knows some other cryptographer
    paid without knowing which one. The second says that if the employer paid
    this is common knowledge once everyone has spoken.
    """
    said = conj([Atom(f"said{i}") for i in range(1, n + 1)])
    others = range(2, n + 1)
    some_other = disj([Atom(f"pd{i}") for i in others])
    nobody_known = conj([Not(Know("c1", Atom(f"pd{i}"))) for i in others])
    phi4 = ag(Implies(
        And(said, Not(Atom("pd1"))),
        Or(Know("c1", Atom("paid")), And(Know("c1", some_other), nobody_known)),
    ))
    everyone = tuple(f"c{i}" for i in range(1, n + 1))
    phi5 = ag(Implies(And(said, Atom("paid")), Common(everyone, Atom("paid"))))
    return phi4, phi5


# -- small fixtures -------------------------------------------------------------

def gen_simple() -> Kpn:
    """Two transitions into one place; only one of them is ever enabled."""
    b = KpnBuilder(["a"])
    b.state("p1", init=1).state("p2").state("p3")
    b.trans("t1", ["p1"], ["p3"])
    b.trans("t2", ["p1", "p2"], ["p3"])
    return b.build()


def gen_toy3() -> Kpn:
    """Three independent one-step processes."""
    b = KpnBuilder(["a"])
    for i in (1, 2, 3):
        b.state(f"p{i}1", init=1).state(f"p{i}2")
    for i in (1, 2, 3):
        b.trans(f"t{i}", [f"p{i}1"], [f"p{i}2"])
    return b.build()


def gen_toy3s() -> Kpn:
    """The same three processes forced to run in the order 3, 2, 1."""
    b = KpnBuilder(["a"])
    for i in (1, 2, 3):
        b.state(f"p{i}1", init=1).state(f"p{i}2")
    b.trans("t1", ["p11"], ["p12"], loops=["p22"])
    b.trans("t2", ["p21"], ["p22"], loops=["p32"])
    b.trans("t3", ["p31"], ["p32"])
    return b.build()


def gen_dfix() -> Kpn:
    """Three markings where each agent alone confuses the start with a different one.

    From the start marking agent ``a`` cannot tell the ``s1`` branch apart
    and agent ``b`` cannot tell the ``s2`` branch apart, but together they
    can tell the start from both. ``D{a,b} s0`` therefore holds at the start,
    while intersecting the per-agent images wrongly rejects it.
    """
    b = KpnBuilder(["a", "b"])
    b.state("s0", init=1).state("s1").state("s2")
    b.knowledge("ka", ["a"]).knowledge("kb", ["b"])
    b.trans("t1", ["s0"], ["s1", "kb"])
    b.trans("t2", ["s0"], ["s2", "ka"])
    return b.build()
