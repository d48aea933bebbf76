import random

import pytest

from kpnmc.checker import Checker
from kpnmc.ctlk import Atom, Not, Until, au, au_as_printed, parse_formula, to_enf
from kpnmc.models import PHI1, PHI2, PHI3, gen_alice_bob, gen_dfix, gen_simple
from kpnmc.net import KpnBuilder, KpnError
from kpnmc.oracle import (
    PALETTE, ExplicitChecker, build_rger, cross_check, sat_explicit, to_dot,
)
from kpnmc.symbolic import SymContext

from randgen import corpus, random_formula, safe_net


def related(rger, agents, i, j):
    return any(rger.classes[a][i] == rger.classes[a][j] for a in agents)


def closure_related(rger, agents, i, j):
    seen, stack = {i}, [i]
    while stack:
        k = stack.pop()
        for m in range(len(rger)):
            if m not in seen and related(rger, agents, k, m):
                seen.add(m)
                stack.append(m)
    return j in seen


class TestRger:
    def test_alice_bob(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        assert len(rger) == 15
        assert rger.deadlocks == {14}
        assert net.marked_names(rger.markings[14]) >= {"p17", "p27"}

    def test_attacker(self):
        assert len(build_rger(gen_alice_bob(True))) == 48

    def test_simple(self):
        rger = build_rger(gen_simple())
        assert len(rger) == 2
        assert sum(len(e) for e in rger.edges) == 1

    def test_edges_follow_firing(self):
        net = gen_alice_bob(True)
        rger = build_rger(net)
        from kpnmc.net import fire
        for i, out in enumerate(rger.edges):
            for t, j in out:
                assert fire(net, rger.markings[i], t) == rger.markings[j]

    def test_state_cap(self):
        with pytest.raises(KpnError, match="state cap"):
            build_rger(gen_alice_bob(True), state_cap=10)

    def test_unsafe(self):
        b = KpnBuilder(["a"])
        b.state("p", init=1).state("q", init=1)
        b.trans("t", ["p"], ["q"])
        with pytest.raises(KpnError, match="one-safeness"):
            build_rger(b.build())

    def test_partitions(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        for a in range(len(net.agents)):
            blocks = rger.partition(a)
            assert sorted(i for blk in blocks for i in blk) == list(range(len(rger)))

    def test_union_is_not_transitive(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        idx = {frozenset(net.marked_names(m)): i for i, m in enumerate(rger.markings)}
        m0 = idx[frozenset({"p11", "p21"})]
        m1 = idx[frozenset({"p12", "p18", "p21"})]
        m2 = idx[frozenset({"p11", "p22", "p28", "p29"})]
        m3 = idx[frozenset({"p13", "p18", "p21", "c1"})]
        m4 = idx[frozenset({"p12", "p18", "p22", "p28", "p29"})]
        assert (m0, m1, m2, m3, m4) == (0, 1, 2, 3, 4)
        both = [0, 1]
        assert related(rger, both, 0, 2) and related(rger, both, 2, 4)
        assert not related(rger, both, 0, 4)
        assert closure_related(rger, both, 0, 4)
        # and the intersection relates M1 with M3
        assert all(rger.classes[a][1] == rger.classes[a][3] for a in both)


class TestExplicitSemantics:
    def test_alice_bob_sets(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        assert sat_explicit(rger, net, parse_formula("p17 & p27")) == {14}
        assert sat_explicit(rger, net, parse_formula("true")) == set(range(15))
        assert 0 in sat_explicit(rger, net, parse_formula(PHI1))
        assert 0 not in sat_explicit(rger, net, parse_formula(PHI2))

    def test_attacker_sets(self):
        net = gen_alice_bob(True)
        rger = build_rger(net)
        assert len(sat_explicit(rger, net, parse_formula("EF p3_11"))) == 30
        assert 0 in sat_explicit(rger, net, parse_formula(PHI3))

    def test_au_direct_vs_rewrites(self):
        net = gen_simple()
        rger = build_rger(net)
        t, q = parse_formula("true"), Atom("p2")
        ex = ExplicitChecker(rger, net)
        assert ex.sat(au(t, q)) == frozenset()
        assert ex.sat(to_enf(au(t, q))) == frozenset()
        assert ex.sat(au_as_printed(t, q)) == {0, 1}

    def test_c_uses_closure(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        # everything is connected through the two agents' classes
        s = sat_explicit(rger, net, parse_formula("C{a1,a2} !p17"))
        assert s == frozenset()


class TestCrossCheck:
    @pytest.mark.parametrize("make,texts", [
        (lambda: gen_alice_bob(False), [PHI1, PHI2]),
        (lambda: gen_alice_bob(True), [PHI3, PHI1]),
    ])
    def test_case_study_models_match(self, make, texts):
        report = cross_check(make(), [parse_formula(t) for t in texts])
        assert report.ok, str(report)
        assert str(report) == f"all match ({len(texts)} formulas)"

    def test_alg11_divergence_is_reported(self):
        net = gen_dfix()
        report = cross_check(net, [parse_formula("D{a,b} s0")], d_semantics="alg11")
        assert len(report.divergences) == 1
        d = report.divergences[0]
        assert d.marking == net.initial
        assert (d.symbolic, d.explicit) == (False, True)

    def test_random_corpus(self):
        for net, rger, fs in corpus(seed=11, nets=40, formulas_per_net=4):
            report = cross_check(net, fs, rger=rger)
            assert report.ok, str(report)

    def test_random_corpus_reversed_order(self):
        for net, rger, fs in corpus(seed=12, nets=20, formulas_per_net=3):
            order = list(range(net.num_places))[::-1]
            assert cross_check(net, fs, order=order, rger=rger).ok

    def test_au_variants_against_oracle(self):
        """The standard rewrite always agrees; the alternative one does not."""
        rng = random.Random(5)
        printed_diverged = 0
        for _ in range(60):
            net, rger = safe_net(rng)
            f, g = random_formula(rng, net, 2), random_formula(rng, net, 2)
            want = sat_explicit(rger, net, au(f, g))
            ctx = SymContext(net)
            ch = Checker(ctx)
            std = {rger.index[m] for m in ctx.decode(ch.sat(to_enf(au(f, g))))}
            alt = {rger.index[m] for m in ctx.decode(ch.sat(to_enf(au_as_printed(f, g))))}
            assert std == want
            printed_diverged += alt != want
        assert printed_diverged > 0


class TestDot:
    def test_alice_bob(self):
        net = gen_alice_bob()
        dot = to_dot(build_rger(net), net)
        assert dot.startswith("digraph rger {")
        assert dot.count("[label=\"M") == 15
        assert dot.count("->") == sum(len(e) for e in build_rger(net).edges)
        assert PALETTE[0] in dot

    def test_simple(self):
        net = gen_simple()
        dot = to_dot(build_rger(net), net)
        assert dot.count("fillcolor") == 2
        assert dot.count("->") == 1
        assert 'label="t1"' in dot

    def test_agent_choice_changes_colours(self):
        net = gen_alice_bob()
        rger = build_rger(net)
        assert to_dot(rger, net, "a1") != to_dot(rger, net, "a2")
        assert to_dot(rger, net, 1) == to_dot(rger, net, "a2")

    def test_explicit_not_negated_atom(self):
        net = gen_simple()
        rger = build_rger(net)
        assert sat_explicit(rger, net, Not(Atom("p1"))) == {1}
        assert sat_explicit(rger, net, Until(True, Atom("p1"), Atom("p3"))) == {0, 1}
