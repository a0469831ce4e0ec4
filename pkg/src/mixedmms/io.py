"""JSON serialization for instances, allocations, reports and certificates.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers).  Readers
accept those strings and bare JSON integers, nothing else.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .alloc import AllocationReport
from .core import Allocation, Bundle, CakePiece, Instance, parse_rational, validate_instance
from .counterexample import BaseMatrixCheck
from .errors import ValidationError
from .mms import MMSCertificate
from .verify import FairnessReport


def rat(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def _to_jsonable(obj: Any) -> Any:
    """Recursively convert Fractions (and tuples/sets) into JSON-friendly values."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Mapping):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_to_jsonable(v) for v in obj)
    return obj


def instance_to_dict(instance: Instance) -> dict:
    agents = []
    for i in range(instance.n):
        entry: dict[str, Any] = {"name": instance.agents[i], "utilities": [rat(u) for u in instance.utilities[i]]}
        if instance.has_cake:
            entry["density"] = [
                {"left": rat(s.left), "right": rat(s.right), "height": rat(s.height)}
                for s in instance.density(i).segments
            ]
        agents.append(entry)
    return {"agents": agents, "goods": list(instance.goods)}


def instance_from_dict(raw: Mapping) -> Instance:
    return validate_instance(raw)


def piece_to_list(piece: CakePiece) -> list[list[str]]:
    return [[rat(a), rat(b)] for a, b in piece.intervals]


def allocation_to_dict(instance: Instance, allocation: Allocation) -> dict:
    return {
        "agents": [
            {"name": instance.agents[i], "goods": sorted(b.goods), "cake": piece_to_list(b.cake)}
            for i, b in enumerate(allocation.bundles)
        ]
    }


def allocation_from_dict(raw: Mapping) -> Allocation:
    agents = raw.get("agents") if isinstance(raw, Mapping) else None
    if not isinstance(agents, list):
        raise ValidationError([("agents", "expected a list of bundles")])
    bundles = []
    issues = []
    for i, a in enumerate(agents):
        try:
            goods = frozenset(int(g) for g in a.get("goods", []))
            cake = CakePiece.of((parse_rational(x), parse_rational(y)) for x, y in a.get("cake", []))
        except (TypeError, ValueError) as exc:
            issues.append((f"agents[{i}]", str(exc)))
            continue
        bundles.append(Bundle(goods, cake))
    if issues:
        raise ValidationError(issues)
    return Allocation(tuple(bundles))


def report_to_dict(instance: Instance, report: AllocationReport) -> dict:
    out = allocation_to_dict(instance, report.allocation)
    out.update(
        alpha=rat(report.alpha),
        mms=[rat(v) for v in report.mms_values],
        values=[rat(v) for v in report.values],
        ratios=[rat(r) if r is not None else "satisfied" for r in report.ratios],
        mode=report.mode,
        branch=report.branch,
    )
    if report.epsilon is not None:
        out["epsilon"] = rat(report.epsilon)
    if report.weights is not None:
        out["weights"] = [rat(w) for w in report.weights]
    if report.queries:
        out["queries"] = report.queries
    return out


def report_fields_from_dict(raw: Mapping) -> tuple[Fraction | None, list[Fraction] | None]:
    """``(alpha, mms)`` from a serialized report, ``None`` where absent."""
    alpha = parse_rational(raw["alpha"], "alpha") if "alpha" in raw else None
    mms = [parse_rational(v, "mms") for v in raw["mms"]] if "mms" in raw else None
    return alpha, mms


def report_from_dict(raw: Mapping) -> AllocationReport:
    """Inverse of :func:`report_to_dict`; ``ratios`` are derived, so they are not read back."""
    try:
        if not (isinstance(raw["mms"], list) and isinstance(raw["values"], list)):
            raise ValidationError([("report", "mms and values must be lists")])
        weights = raw.get("weights")
        return AllocationReport(
            allocation=allocation_from_dict(raw),
            alpha=parse_rational(raw["alpha"], "alpha"),
            mms_values=[parse_rational(v, "mms") for v in raw["mms"]],
            values=[parse_rational(v, "values") for v in raw["values"]],
            mode=raw.get("mode", "exact"),
            epsilon=parse_rational(raw["epsilon"], "epsilon") if "epsilon" in raw else None,
            weights=[parse_rational(w, "weights") for w in weights] if weights is not None else None,
            queries=raw.get("queries", {}),
            branch=raw.get("branch", "mixed"),
        )
    except KeyError as exc:
        raise ValidationError([(str(exc.args[0]), "missing field")]) from exc


def certificate_to_dict(instance: Instance, cert: MMSCertificate) -> dict:
    return {
        "agent": instance.agents[cert.agent],
        "k": cert.k,
        "mms": rat(cert.floor),
        "bundles": [{"goods": sorted(p), "cake_share": rat(s)} for p, s in zip(cert.good_partition, cert.cake_shares)],
        "cake_shares": [rat(s) for s in cert.cake_shares],
    }


def fairness_to_dict(report: FairnessReport) -> dict:
    return {
        "ok": report.ok(),
        "checks": {
            name: {
                "ok": c.ok,
                "passed": c.passed,
                "slack": [rat(s) for s in c.slack],
                **({"worst_pair": list(c.worst_pair)} if c.worst_pair is not None else {}),
            }
            for name, c in report.checks.items()
        },
        "flags": list(report.flags),
    }


def base_check_to_dict(check: BaseMatrixCheck) -> dict:
    return {
        "nonnegative": check.nonnegative,
        "positivity": check.positivity,
        "unit_sums": check.unit_sums,
        "rigidity": check.rigidity,
        "failures": check.failures,
    }


def jsonable(obj: Any) -> Any:
    return _to_jsonable(obj)


def dumps(data: Any) -> str:
    return json.dumps(_to_jsonable(data), indent=2, sort_keys=False) + "\n"


def write_json(path: str | Path | None, data: Any) -> str:
    text = dumps(data)
    if path is not None and str(path) != "-":
        Path(path).write_text(text)
    return text


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(read_json(path))


def save_instance(path: str | Path, instance: Instance) -> str:
    return write_json(path, instance_to_dict(instance))
