from fractions import Fraction as F

import pytest

import oracles
from conftest import steps, uniform
from mixedmms import (
    Instance,
    SizeGuards,
    TooLargeError,
    approx_mms,
    discretize_instance,
    exact_mms,
    generate_random,
    indivisible_maxmin,
    waterfill,
)
from mixedmms.mms import discretization_size, equal_value_cuts


class TestWaterfill:
    def test_symmetric(self):
        assert waterfill([0, 0], 2) == (1, [1, 1])

    def test_breakpoint(self):
        assert waterfill([1, 3], 2) == (3, [2, 0])

    def test_no_budget(self):
        assert waterfill([5], 0) == (5, [0])

    def test_matches_oracle(self):
        vals = [F(1, 3), F(2), F(5, 4), 0]
        for budget in (0, F(1, 7), 1, F(9, 2), 20):
            assert waterfill(vals, budget)[0] == oracles.level(vals, F(budget))


class TestExactMMS:
    def test_single_agent_takes_everything(self):
        inst = Instance.create([[2, F(1, 3)]], [uniform(F(3, 2))])
        assert exact_mms(inst, 0, 1).floor == F(23, 6)

    def test_goods_and_cake(self):
        inst = Instance.create([[3, 1]], [uniform(2)])
        cert = exact_mms(inst, 0, 2)
        assert cert.floor == 3
        shares = dict(zip(map(frozenset, cert.good_partition), cert.cake_shares))
        assert shares == {frozenset({0}): 0, frozenset({1}): 2}

    def test_more_bundles_than_goods(self):
        assert exact_mms(Instance.create([[1, 1]]), 0, 3).floor == 0

    def test_certificate_honest(self):
        inst = generate_random(11, 3, 6, cake_segments=3)
        for i in range(3):
            cert = exact_mms(inst, i)
            assert cert.check(inst)
            assert min(cert.bundle_values(inst)) == cert.floor

    def test_size_guard(self):
        inst = Instance.create([[1] * 6])
        with pytest.raises(TooLargeError):
            exact_mms(inst, 0, 2, SizeGuards(max_goods=5))

    def test_node_limit(self):
        inst = generate_random(5, 1, 16, value_cap=50)
        with pytest.raises(TooLargeError):
            exact_mms(inst, 0, 4, SizeGuards(node_limit=10))

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        inst = generate_random(seed, 3, seed % 8, cake_segments=seed % 4)
        for i in range(3):
            assert exact_mms(inst, i).floor == oracles.instance_mms(inst, i)

    def test_identical_goods_larger_than_enumeration(self):
        # 20 identical goods, k = 3: optimum floor(20/3) = 6
        inst = Instance.create([[1] * 20])
        assert exact_mms(inst, 0, 3).floor == 6


class TestIndivisibleMaxmin:
    def test_singletons(self):
        assert indivisible_maxmin([1, 1, 1], 3, F(1, 2))[0] == 1

    def test_two_bundles(self):
        floor, parts = indivisible_maxmin([2, 1, 1], 2, F(1, 10))
        assert floor == 2
        assert sorted(map(sorted, parts)) == [[0], [1, 2]]

    def test_empty(self):
        assert indivisible_maxmin([], 2, F(1, 2))[0] == 0

    def test_relaxed_path_keeps_contract(self):
        vals = [F(v, 7) for v in (13, 11, 10, 9, 9, 8, 7, 7, 6, 5, 5, 4, 3, 3, 2, 1)]
        delta = F(1, 4)
        guards = SizeGuards(exact_goods=4, exact_assignments=10)
        floor, parts = indivisible_maxmin(vals, 4, delta, guards)
        exact, _ = indivisible_maxmin(vals, 4, F(0))
        assert floor >= (1 - delta) * exact
        assert min(sum(vals[g] for g in p) for p in parts) == floor


class TestApproxMMS:
    def test_goods_only(self):
        inst = Instance.create([[1, 1, 1]])
        v = approx_mms(inst, 0, 3, F(1, 10))
        assert F(9, 10) <= v <= 1
        assert exact_mms(inst, 0, 3).floor == 1

    def test_cake_only(self):
        inst = Instance.create([[]], [uniform(1)])
        assert F(1, 4) <= approx_mms(inst, 0, 2, F(1, 2)) <= F(1, 2)

    def test_empty(self):
        assert approx_mms(Instance.create([[]]), 0, 2, F(1, 2)) == 0

    def test_zero_value_cake(self):
        inst = Instance.create([[2, 1, 1]], [steps((0, 1, 0))])
        assert approx_mms(inst, 0, 2, F(1, 3)) == 2

    def test_equal_value_cuts(self):
        inst = Instance.create([[]], [steps((0, F(1, 2), 0), (F(1, 2), 1, 2))])
        assert equal_value_cuts(inst, 0, 4) == [F(5, 8), F(3, 4), F(7, 8)]

    def test_discretization_size(self):
        assert discretization_size(3, F(1, 10)) == 60
        assert discretization_size(2, F(1, 3)) == 12


class TestDiscretize:
    def test_no_cake_identity(self):
        inst = Instance.create([[1, 2]])
        out, pieces = discretize_instance(inst, F(1, 2))
        assert out == inst and pieces == []

    def test_pieces_tile_and_values_bounded(self):
        inst = generate_random(3, 3, 2, cake_segments=3)
        eps = F(1, 2)
        out, pieces = discretize_instance(inst, eps)
        assert out.m == inst.m + len(pieces)
        assert sum(p.length for p in pieces) == 1
        for i in range(inst.n):
            bound = eps * inst.cake_value(i) / (2 * inst.n)
            assert all(out.utilities[i][inst.m + t] <= bound for t in range(len(pieces)))
            assert out.goods_value(i) == inst.goods_value(i) + inst.cake_value(i)
