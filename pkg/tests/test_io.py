import json
from fractions import Fraction as F

import pytest

from conftest import uniform
from mixedmms import APPROXIMATE, Instance, ValidationError, exact_mms, generate_random, mixed_mms, verify_all
from mixedmms import io


def test_instance_round_trip(tmp_path):
    inst = generate_random(5, 3, 4, cake_segments=3)
    path = tmp_path / "i.json"
    io.save_instance(path, inst)
    assert io.load_instance(path) == inst


def test_allocation_round_trip():
    inst = generate_random(6, 3, 5, cake_segments=2)
    report = mixed_mms(inst)
    raw = io.allocation_to_dict(inst, report.allocation)
    assert io.allocation_from_dict(raw) == report.allocation


def test_report_round_trip():
    inst = generate_random(6, 3, 5, cake_segments=2)
    report = mixed_mms(inst, F(1, 3), APPROXIMATE)
    again = io.report_from_dict(json.loads(io.dumps(io.report_to_dict(inst, report))))
    assert again == report


def test_rationals_are_strings():
    inst = Instance.create([[F(1, 3)]], [uniform(F(2, 7))])
    raw = io.instance_to_dict(inst)
    assert raw["agents"][0]["utilities"] == ["1/3"]
    assert raw["agents"][0]["density"][0]["height"] == "2/7"


def test_zero_mms_ratio_marked_satisfied():
    inst = Instance.create([[1], [1]])
    raw = io.report_to_dict(inst, mixed_mms(inst))
    assert raw["ratios"] == ["satisfied", "satisfied"]


def test_certificate_has_cake_shares():
    inst = Instance.create([[3, 1]], [uniform(2)])
    raw = io.certificate_to_dict(inst, exact_mms(inst, 0, 2))
    assert raw["mms"] == "3" and sorted(raw["cake_shares"]) == ["0", "2"]


def test_fairness_report_serializes():
    inst = generate_random(2, 2, 3)
    raw = io.fairness_to_dict(verify_all(inst, mixed_mms(inst).allocation))
    assert set(raw["checks"]) == {"prop", "ef", "ef1", "efm"}


def test_decimal_rejected_in_allocation():
    with pytest.raises(ValidationError):
        io.allocation_from_dict({"agents": [{"goods": [], "cake": [["0", "0.5"]]}]})
