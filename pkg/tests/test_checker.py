import pytest

from kpnmc.checker import Checker, check, check_formula
from kpnmc.ctlk import Atom, FormulaError, Temporal, au, au_as_printed, parse_formula, to_enf
from kpnmc.models import PHI1, PHI2, PHI3, gen_alice_bob, gen_dfix, gen_simple
from kpnmc.oracle import build_rger, sat_explicit
from kpnmc.ordering import structural_order
from kpnmc.symbolic import SymContext


def sat_size(net, text, **kw):
    ctx = SymContext(net, structural_order(net))
    return ctx.count(Checker(ctx, **kw).sat(to_enf(parse_formula(text, net))))


class TestVerdicts:
    def test_alice_bob(self):
        net = gen_alice_bob()
        assert check(net, parse_formula(PHI1))
        assert not check(net, parse_formula(PHI2))

    def test_attacker(self):
        net = gen_alice_bob(True)
        assert check(net, parse_formula(PHI3))
        assert not check(net, parse_formula(PHI1))

    def test_orders_agree(self):
        net = gen_alice_bob(True)
        f = parse_formula(PHI3)
        assert check(net, f) == check(net, f, order=list(range(net.num_places))[::-1])


class TestSatSets:
    def test_alice_bob_sets(self):
        net = gen_alice_bob()
        assert sat_size(net, "p17 & p27") == 1
        assert sat_size(net, "!(p18 & p2_11)") == 12
        assert sat_size(net, "true") == 15
        assert sat_size(net, "deadlock") == 1

    def test_attacker_trace(self):
        net = gen_alice_bob(True)
        assert sat_size(net, "p3_11") == 6
        assert sat_size(net, "EF p3_11") == 30
        assert sat_size(net, "K{a1} p3_11") == 0
        assert sat_size(net, "K{a2} p3_11") == 0

    def test_deadlock_semantics(self):
        net = gen_simple()
        # the only computation from the final marking is that marking alone
        assert sat_size(net, "EG p3") == 1
        assert sat_size(net, "AX p3") == 1
        assert sat_size(net, "EX true") == 1

    def test_sat_is_within_reached(self):
        net = gen_alice_bob()
        ctx = SymContext(net)
        ch = Checker(ctx)
        s = ch.sat(to_enf(parse_formula("!p11")))
        assert (s - ctx.reached).is_false
        assert ctx.count(s) == len(sat_explicit(build_rger(net), net, parse_formula("!p11")))


class TestDistributedKnowledge:
    def test_def4_and_alg11_differ_on_fixture(self):
        net = gen_dfix()
        f = parse_formula("D{a,b} s0")
        assert check(net, f, d_semantics="def4")
        assert not check(net, f, d_semantics="alg11")

    def test_def4_matches_oracle(self):
        net = gen_dfix()
        rger = build_rger(net)
        f = parse_formula("D{a,b} s0")
        assert 0 in sat_explicit(rger, net, f)
        assert 0 not in sat_explicit(rger, net, f, d_semantics="alg11")

    def test_unknown_semantics(self):
        with pytest.raises(ValueError):
            Checker(SymContext(gen_dfix()), d_semantics="other")


class TestUntilRewrite:
    def test_as_printed_variant_is_unsound(self):
        # every computation stays in p1 -> p3 and never reaches p2
        net = gen_simple()
        p, q = Atom("p1"), Atom("p2")
        ctx = SymContext(net)
        ch = Checker(ctx)
        assert not check_formula(ctx, au(parse_formula("true"), q), ch)
        assert check_formula(ctx, au_as_printed(parse_formula("true"), q), ch)
        del p

    def test_af_on_final_marking(self):
        net = gen_simple()
        assert check(net, Temporal("AF", Atom("p3")))
        assert not check(net, Temporal("AF", Atom("p2")))


class TestErrors:
    def test_unknown_place(self):
        with pytest.raises(FormulaError):
            check(gen_simple(), Atom("zz"))

    def test_raw_false_rejected_by_sat(self):
        ctx = SymContext(gen_simple())
        with pytest.raises(FormulaError):
            Checker(ctx).sat(parse_formula("false"))
        assert not check_formula(ctx, parse_formula("false"))
