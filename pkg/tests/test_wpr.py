from fractions import Fraction as F

import pytest

from conftest import steps, uniform
from mixedmms import CakePiece, DomainError, Instance, WeightProfile, evaluate, verify_wpr, wpr_alloc


def cake_only(*densities):
    return Instance.create([[] for _ in densities], list(densities))


def test_uniform_proportional_lengths():
    pieces = wpr_alloc(cake_only(uniform(1), uniform(1)), [F(1, 3), F(2, 3)])
    assert [p.length for p in pieces] == [F(1, 3), F(2, 3)]


def test_degenerate_weights():
    pieces = wpr_alloc(cake_only(uniform(1), uniform(2), uniform(3)), [1, 0, 0])
    assert pieces[0] == CakePiece.interval(0, 1)
    assert pieces[1].is_empty and pieces[2].is_empty


def test_concentrated_agent():
    inst = cake_only(uniform(1), steps((0, F(1, 2), 2), (F(1, 2), 1, 0)))
    pieces = wpr_alloc(inst, [F(1, 2), F(1, 2)])
    for i in range(2):
        assert evaluate(inst, i, pieces[i]) >= F(1, 2)
    assert verify_wpr(inst, pieces, [F(1, 2), F(1, 2)]).ok()


def test_agent_split_across_halves():
    # odd clone counts force one agent to straddle the midpoint
    inst = cake_only(uniform(1), steps((0, F(1, 4), 4), (F(1, 4), 1, 0)), steps((0, F(3, 4), 0), (F(3, 4), 1, 4)))
    w = [F(3, 7), F(2, 7), F(2, 7)]
    pieces = wpr_alloc(inst, w)
    assert verify_wpr(inst, pieces, w).ok()


@pytest.mark.parametrize("weights", [[F(1, 2), F(1, 3)], [F(3, 2), F(-1, 2)]])
def test_invalid_weights(weights):
    with pytest.raises(DomainError):
        WeightProfile.of(weights)


def test_clone_counts():
    assert WeightProfile.of(["1/6", "1/3", "1/2"]).clone_counts() == [1, 2, 3]


def test_equal_split_is_exact_and_envy_free():
    from mixedmms import Allocation, equal_split, verify_ef

    inst = cake_only(uniform(1), steps((0, F(1, 4), 4), (F(1, 4), 1, 0)), steps((0, F(2, 3), 0), (F(2, 3), 1, 3)))
    w = [F(1, 3)] * 3
    pieces = equal_split(inst, w)
    for i in range(3):
        for j in range(3):
            assert evaluate(inst, i, pieces[j]) == inst.cake_value(i) / 3
    assert verify_ef(inst, Allocation.from_parts([set()] * 3, pieces)).ok()


def test_equal_split_weighted():
    from mixedmms import equal_split

    inst = cake_only(uniform(2), steps((0, F(1, 2), 0), (F(1, 2), 1, 2)))
    pieces = equal_split(inst, [F(1, 4), F(3, 4)])
    assert verify_wpr(inst, pieces, [F(1, 4), F(3, 4)])["wpr"].slack == [0, 0]
