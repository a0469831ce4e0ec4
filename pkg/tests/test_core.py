from fractions import Fraction as F

import pytest

from conftest import steps, uniform
from mixedmms import (
    Allocation,
    CakePiece,
    DomainError,
    Instance,
    InsufficientValueError,
    ValidationError,
    bundle_value,
    count_queries,
    cut,
    evaluate,
    parse_rational,
    validate_allocation,
    validate_instance,
)
from mixedmms.core import concatenate_cakes


def cake_only(*densities):
    return Instance.create([[] for _ in densities], list(densities))


class TestRationals:
    def test_accepts_fraction_strings(self):
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational(2) == 2

    @pytest.mark.parametrize("bad", ["0.5", "1e-3", 0.5, True, "abc", "1/0"])
    def test_rejects_inexact(self, bad):
        with pytest.raises(DomainError):
            parse_rational(bad)


class TestEval:
    def test_uniform_half(self):
        assert evaluate(cake_only(uniform(1)), 0, (0, F(1, 2))) == F(1, 2)

    def test_empty_piece(self):
        assert evaluate(cake_only(steps((0, F(1, 3), 5), (F(1, 3), 1, 1))), 0, CakePiece()) == 0

    def test_step_density(self):
        inst = cake_only(steps((0, F(1, 2), 2), (F(1, 2), 1, 0)))
        assert evaluate(inst, 0, (F(1, 4), F(3, 4))) == F(1, 2)

    def test_outside_cake_is_domain_error(self):
        with pytest.raises(DomainError):
            evaluate(cake_only(uniform(1)), 0, (F(1, 2), F(3, 2)))

    def test_one_query_per_interval(self):
        inst = cake_only(uniform(1))
        with count_queries() as c:
            evaluate(inst, 0, CakePiece.of([(0, F(1, 4)), (F(1, 2), 1)]))
        assert c.total(kind="eval") == 2


class TestCut:
    def test_uniform_half(self):
        assert cut(cake_only(uniform(1)), 0, 0, F(1, 2)) == F(1, 2)

    def test_zero_beta_returns_x(self):
        inst = cake_only(steps((0, F(1, 2), 0), (F(1, 2), 1, 2)))
        assert cut(inst, 0, F(1, 5), 0) == F(1, 5)

    def test_skips_leading_zero_stretch(self):
        inst = cake_only(steps((0, F(1, 2), 0), (F(1, 2), 1, 2)))
        assert cut(inst, 0, 0, F(1, 2)) == F(3, 4)

    def test_stops_before_trailing_zero_stretch(self):
        inst = cake_only(steps((0, F(1, 2), 2), (F(1, 2), 1, 0)))
        assert cut(inst, 0, 0, 1) == F(1, 2)

    def test_insufficient_value_carries_shortfall(self):
        with pytest.raises(InsufficientValueError) as info:
            cut(cake_only(uniform(1)), 0, F(1, 2), 1)
        assert info.value.shortfall == F(1, 2)


class TestBundles:
    def test_additivity(self):
        inst = Instance.create([[3]], [uniform(2)])
        assert bundle_value(inst, 0, {0}, CakePiece.interval(0, 1)) == 5

    def test_empty_bundle(self):
        inst = Instance.create([[3]], [uniform(2)])
        assert bundle_value(inst, 0, set()) == 0

    def test_goods_plus_quarter_cake(self):
        inst = Instance.create([[2, 1]], [uniform(4)])
        assert bundle_value(inst, 0, {0, 1}, CakePiece.interval(0, F(1, 4))) == 4

    def test_bad_good_index(self):
        inst = Instance.create([[2, 1]])
        with pytest.raises(DomainError):
            bundle_value(inst, 0, {5})


class TestPieces:
    def test_canonical_merge(self):
        p = CakePiece.of([(F(1, 2), 1), (0, F(1, 2)), (F(1, 3), F(1, 3))])
        assert p.intervals == ((0, 1),)

    def test_overlap_rejected(self):
        with pytest.raises(DomainError):
            CakePiece.of([(0, F(1, 2)), (F(1, 4), 1)])


def raw(density_a, density_b=None, utilities=(1,)):
    agents = [{"name": "a", "utilities": list(utilities), "density": density_a}]
    if density_b is not None:
        agents.append({"name": "b", "utilities": list(utilities), "density": density_b})
    return {"agents": agents, "goods": [f"g{i}" for i in range(len(utilities))]}


class TestValidateInstance:
    def test_tiling_segments_accepted(self):
        inst = validate_instance(raw([["0", "1/2", "1"], ["1/2", "1", "2"]]))
        assert inst.cake_value(0) == F(3, 2)

    def test_gap_rejected(self):
        with pytest.raises(ValidationError) as info:
            validate_instance(raw([["0", "1/2", "1"], ["3/4", "1", "2"]]))
        assert any("gap" in msg for _, msg in info.value.issues)

    def test_negative_utility_rejected(self):
        with pytest.raises(ValidationError) as info:
            validate_instance(raw([["0", "1", "1"]], utilities=("-1",)))
        assert any("negative" in msg for _, msg in info.value.issues)

    def test_collects_several_issues(self):
        bad = raw([["0", "1/2", "1"], ["3/4", "1", "2"]], [["0", "1", "1"]], utilities=("-1",))
        with pytest.raises(ValidationError) as info:
            validate_instance(bad)
        assert len(info.value.issues) >= 3

    def test_multiple_cakes_concatenate(self):
        a, b = uniform(1), uniform(3)
        joined = concatenate_cakes([a, b])
        assert joined.total == 4
        assert joined.integral(F(0), F(1, 2)) == 1


class TestValidateAllocation:
    def test_goods_must_partition(self):
        inst = Instance.create([[1, 1], [1, 1]])
        with pytest.raises(ValidationError):
            validate_allocation(inst, Allocation.from_parts([{0}, {0}]))

    def test_cake_must_tile(self, identical_pair):
        alloc = Allocation.from_parts([{0}, {1}], [CakePiece.interval(0, F(1, 2)), CakePiece()])
        with pytest.raises(ValidationError):
            validate_allocation(identical_pair, alloc)


def test_nested_counters_report_upwards():
    inst = cake_only(uniform(1))
    with count_queries() as outer:
        evaluate(inst, 0, (0, 1))
        with count_queries() as inner:
            cut(inst, 0, 0, F(1, 2))
    assert inner.total() == 1
    assert outer.total(kind="eval") == 1 and outer.total(kind="cut") == 1


def test_scaled_density_total():
    assert uniform(F(3, 7)).scaled(F(14, 3)).total == 2
