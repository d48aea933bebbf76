import pytest

from kpnmc.net import KpnError
from kpnmc.models import gen_dcp, gen_toy3, gen_toy3s
from kpnmc.ordering import (
    noack_order, noack_weights, order_names, read_order, structural_order, write_order,
)
from kpnmc.symbolic import SymContext


class TestStructural:
    def test_toy3(self):
        net = gen_toy3()
        assert order_names(net, structural_order(net)) == ["p11", "p12", "p21", "p22", "p31", "p32"]

    def test_toy3s(self):
        net = gen_toy3s()
        assert order_names(net, structural_order(net)) == ["p11", "p21", "p31", "p32", "p22", "p12"]

    @pytest.mark.parametrize("pattern", ["parallel", "sequential"])
    def test_is_permutation(self, pattern):
        net = gen_dcp(5, pattern)
        assert sorted(structural_order(net)) == list(range(net.num_places))

    def test_unreachable_places_go_last(self):
        from kpnmc.net import KpnBuilder
        b = KpnBuilder(["a"])
        b.state("z").state("p", init=1).state("q")
        b.trans("t", ["p"], ["q"])
        net = b.build()
        assert order_names(net, structural_order(net)) == ["p", "q", "z"]


class TestNoack:
    def test_toy3(self):
        net = gen_toy3()
        assert order_names(net, noack_order(net)) == ["p32", "p22", "p12", "p31", "p21", "p11"]

    def test_toy3s(self):
        net = gen_toy3s()
        assert order_names(net, noack_order(net)) == ["p12", "p11", "p22", "p21", "p32", "p31"]

    def test_weights_are_exact_fractions(self):
        net = gen_toy3()
        w = noack_weights(net, [])
        # an input place of a 1-in/1-out transition: (0+1)/1 + (1/5)/1
        assert w[net.place("p11")] == pytest.approx(1.2)
        assert str(w[net.place("p11")]) == "6/5"


class TestOrderQuality:
    def test_structural_beats_noack_on_parallel_dcp(self):
        net = gen_dcp(5, "parallel")
        sizes = {}
        for name, fn in (("structural", structural_order), ("noack", noack_order)):
            ctx = SymContext(net, fn(net))
            sizes[name] = ctx.mgr.node_count(ctx.mark())
        assert sizes["structural"] * 10 < sizes["noack"]

    def test_noack_slightly_smaller_on_sequential_dcp(self):
        net = gen_dcp(7, "sequential")
        sizes = {}
        for name, fn in (("structural", structural_order), ("noack", noack_order)):
            ctx = SymContext(net, fn(net))
            sizes[name] = ctx.mgr.node_count(ctx.mark())
        assert sizes["noack"] < sizes["structural"] < 1.2 * sizes["noack"]


class TestOrderFiles:
    def test_round_trip(self, tmp_path):
        net = gen_toy3s()
        path = tmp_path / "o.txt"
        order = noack_order(net)
        write_order(path, net, order)
        assert read_order(path, net) == order

    def test_comments_and_blanks(self, tmp_path):
        net = gen_toy3()
        path = tmp_path / "o.txt"
        path.write_text("# top first\np11\n\np12\np21\np22\np31\np32\n")
        assert read_order(path, net) == [0, 1, 2, 3, 4, 5]

    @pytest.mark.parametrize("body", ["p11\np12\n", "p11\np11\np21\np22\np31\np32\n"])
    def test_must_be_permutation(self, tmp_path, body):
        path = tmp_path / "o.txt"
        path.write_text(body)
        with pytest.raises(KpnError):
            read_order(path, gen_toy3())

    def test_unknown_place(self, tmp_path):
        path = tmp_path / "o.txt"
        path.write_text("nope\n")
        with pytest.raises(KpnError):
            read_order(path, gen_toy3())
