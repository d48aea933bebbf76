import pytest

from kpnmc.net import KpnBuilder, KpnError, successors
from kpnmc.models import gen_alice_bob, gen_dcp, gen_simple
from kpnmc.oracle import build_rger
from kpnmc.ordering import structural_order
from kpnmc.symbolic import SymContext


def markings(ctx, s):
    return set(ctx.decode(s))


def consumer_net():
    """A single token that can be thrown away."""
    b = KpnBuilder(["x"])
    b.state("a", init=1)
    b.trans("drop", ["a"], [])
    return b.build()


class TestReachability:
    @pytest.mark.parametrize("make,count", [
        (lambda: gen_alice_bob(False), 15),
        (lambda: gen_alice_bob(True), 48),
        (gen_simple, 2),
    ])
    def test_matches_explicit(self, make, count):
        net = make()
        ctx = SymContext(net, structural_order(net))
        reached = ctx.mark()
        assert ctx.count(reached) == count
        assert markings(ctx, reached) == set(build_rger(net).markings)

    def test_order_does_not_change_the_set(self):
        net = gen_dcp(3, "parallel")
        a = SymContext(net)
        b = SymContext(net, structural_order(net))
        assert markings(a, a.mark()) == markings(b, b.mark())

    def test_mark_is_cached(self):
        ctx = SymContext(gen_simple())
        assert ctx.mark() is ctx.mark()
        assert ctx.iterations == 2

    def test_safety_violation(self):
        b = KpnBuilder(["a"])
        b.state("p", init=1).state("q", init=1)
        b.trans("t", ["p"], ["q"])
        with pytest.raises(KpnError, match="one-safeness"):
            SymContext(b.build()).mark()

    def test_img_single_transition(self):
        net = gen_simple()
        ctx = SymContext(net)
        m0 = ctx.encode(net.initial)
        out = ctx.img(net.transition("t1"), m0)
        assert markings(ctx, out) == {net.marking(["p3"])}
        assert ctx.img(net.transition("t2"), m0).is_false


class TestBackward:
    def test_exact_pre_matches_successor_relation(self):
        net = gen_alice_bob(True)
        ctx = SymContext(net, structural_order(net))
        rger = build_rger(net)
        for target in rger.markings[::5]:
            want = {m for m in rger.markings
                    if any(s == target for _, s in successors(net, m))}
            assert markings(ctx, ctx.pre(ctx.encode(target))) == want

    def test_verbatim_pre_admits_non_predecessor(self):
        # the looser image does not require consumed places to be empty in the
        # target, so a transition producing nothing looks like a self-loop
        net = consumer_net()
        target = net.marking(["a"])
        exact = SymContext(net)
        loose = SymContext(net, pre_mode="verbatim")
        assert exact.pre(exact.encode(target)).is_false
        assert markings(loose, loose.pre(loose.encode(target))) == {target}

    def test_bad_pre_mode(self):
        with pytest.raises(ValueError):
            SymContext(gen_simple(), pre_mode="fast")


class TestEquivalence:
    def test_eq_matches_projection(self):
        net = gen_alice_bob()
        ctx = SymContext(net)
        rger = build_rger(net)
        a = net.agent("a2")
        for i in (0, 3, 9):
            got = markings(ctx, ctx.eq(ctx.encode(rger.markings[i]), ["a2"]))
            want = {m for j, m in enumerate(rger.markings) if rger.classes[a][j] == rger.classes[a][i]}
            assert got == want

    def test_empty_group(self):
        ctx = SymContext(gen_simple())
        with pytest.raises(KpnError):
            ctx.eq(ctx.reached, [])
