import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from conftest import steps, uniform
from mixedmms import Instance
from mixedmms import io
from mixedmms.cli import RunConfig, main


@pytest.fixture
def pair_file(tmp_path, identical_pair):
    path = tmp_path / "pair.json"
    io.save_instance(path, identical_pair)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_alloc_identical_pair(capsys, pair_file):
    code, out = run(capsys, "alloc", pair_file, "--mode", "exact")
    assert code == 0
    report = json.loads(out.out)
    assert report["alpha"] == "1"
    assert all(F(r) >= 1 for r in report["ratios"])


def test_verify_report(capsys, tmp_path, pair_file):
    report = tmp_path / "r.json"
    assert run(capsys, "alloc", pair_file, "-o", report)[0] == 0
    code, out = run(capsys, "verify", pair_file, report, "--alpha", "1/2")
    assert code == 0
    assert json.loads(out.out)["checks"]["alpha-mms"]["ok"]


def test_verify_failure_exit_code(capsys, tmp_path):
    inst = tmp_path / "i.json"
    io.save_instance(inst, Instance.create([[1, 1], [1, 1]]))
    alloc = tmp_path / "a.json"
    alloc.write_text(json.dumps({"agents": [{"goods": [0, 1], "cake": []}, {"goods": [], "cake": []}]}))
    assert run(capsys, "verify", inst, alloc, "--alpha", "1")[0] == 4


def test_verify_bad_allocation(capsys, tmp_path, pair_file):
    alloc = tmp_path / "a.json"
    alloc.write_text(json.dumps({"agents": [{"goods": [0], "cake": []}, {"goods": [], "cake": []}]}))
    assert run(capsys, "verify", pair_file, alloc)[0] == 2


def test_gamma_heterogeneous_unsupported(capsys, tmp_path):
    path = tmp_path / "h.json"
    io.save_instance(path, Instance.create([[1], [1]], [uniform(1), steps((0, F(1, 2), 2), (F(1, 2), 1, 0))]))
    code, out = run(capsys, "gamma", path)
    assert code == 3
    assert "homogeneous" in out.err


def test_size_guard_exit(capsys, tmp_path, monkeypatch):
    path = tmp_path / "big.json"
    io.save_instance(path, Instance.create([[1] * 6, [1] * 6]))
    monkeypatch.setenv("MIXEDMMS_MAX_GOODS", "5")
    assert run(capsys, "mms", path)[0] == 3


def test_invalid_instance(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"agents": [{"utilities": ["-1"]}], "goods": ["g"]}))
    code, out = run(capsys, "alloc", path)
    assert code == 2
    assert "negative" in out.err


def test_decimal_epsilon_rejected(capsys, pair_file):
    with pytest.raises(SystemExit) as info:
        main(["alloc", str(pair_file), "--mode", "approximate", "--epsilon", "0.1"])
    assert info.value.code == 2


def test_approximate_needs_epsilon():
    with pytest.raises(ValueError):
        RunConfig("alloc", mode="approximate")


def test_mms_certificates(capsys, pair_file):
    code, out = run(capsys, "mms", pair_file, "--count-queries")
    data = json.loads(out.out)
    assert code == 0
    assert [a["mms"] for a in data["agents"]] == ["2", "2"]
    assert data["query_totals"]["eval"] == 2


def test_reduce_and_discretize(capsys, pair_file):
    code, out = run(capsys, "reduce", pair_file)
    assert code == 0 and len(json.loads(out.out)["goods"]) == 4
    code, out = run(capsys, "discretize", pair_file, "--epsilon", "1/2", "--agent", "0")
    assert code == 0 and len(json.loads(out.out)["goods"]) == 2 + 8


def test_boost(capsys, pair_file):
    code, out = run(capsys, "boost", pair_file, "--epsilon", "1/10")
    assert code == 0 and json.loads(out.out)["branch"] == "mixed"


def test_counterexample_sidecar(capsys, tmp_path):
    side = tmp_path / "side.json"
    code, out = run(capsys, "gen-counterexample", "--n", "6", "--epsilon", "1/100", "--sidecar", side)
    assert code == 0
    assert len(json.loads(out.out)["goods"]) == 36
    data = json.loads(side.read_text())
    assert data["all_ok"] and data["base_checks"]["unit_sums"]


def test_generate_deterministic(capsys):
    a = run(capsys, "generate", "--seed", "9")[1].out
    b = run(capsys, "generate", "--seed", "9")[1].out
    assert a == b


def test_cli_deterministic(capsys, tmp_path):
    path = tmp_path / "g.json"
    assert run(capsys, "generate", "--seed", "4", "-o", path)[0] == 0
    first = run(capsys, "alloc", path)[1].out
    assert run(capsys, "alloc", path)[1].out == first


def test_module_entry_point(pair_file):
    proc = subprocess.run([sys.executable, "-m", "mixedmms.cli", "gamma", str(pair_file)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"gamma": "1"}
