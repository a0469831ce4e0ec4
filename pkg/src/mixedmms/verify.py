"""Exact fairness checkers and the round-robin EF1 generator."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .config import SizeGuards
from .core import (
    ZERO,
    Allocation,
    Bundle,
    CakePiece,
    Instance,
    RationalLike,
    agent_values,
    bundle_value,
    evaluate,
    parse_rational,
    tiling_issues,
    validate_allocation,
    WHOLE_CAKE,
)
from .errors import ContractViolation, DomainError, ValidationError
from .mms import exact_mms


@dataclass
class NotionCheck:
    """Per-agent outcome of one fairness notion; ``passed[i]`` iff ``slack[i] >= 0``."""

    notion: str
    passed: list[bool]
    slack: list[Fraction]
    worst_pair: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return all(self.passed)


@dataclass
class FairnessReport:
    checks: dict[str, NotionCheck] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def add(self, check: NotionCheck) -> "FairnessReport":
        self.checks[check.notion] = check
        return self

    def merge(self, other: "FairnessReport") -> "FairnessReport":
        self.checks.update(other.checks)
        self.flags.extend(other.flags)
        return self

    def ok(self, notion: str | None = None) -> bool:
        if notion is not None:
            return self.checks[notion].ok
        return all(c.ok for c in self.checks.values())

    def __getitem__(self, notion: str) -> NotionCheck:
        return self.checks[notion]


def _threshold_check(notion: str, values: Sequence[Fraction], thresholds: Sequence[Fraction]) -> NotionCheck:
    slack = [v - t for v, t in zip(values, thresholds)]
    return NotionCheck(notion, [s >= 0 for s in slack], slack)


def _values(instance: Instance, allocation: Allocation) -> list[Fraction]:
    validate_allocation(instance, allocation)
    return agent_values(instance, allocation)


def verify_alpha_mms(instance: Instance, allocation: Allocation, alpha: RationalLike,
                     mms_values: Sequence[RationalLike]) -> FairnessReport:
    """u_i(A_i) >= alpha * MMS_i for every agent (MMS_i = 0 passes vacuously)."""
    alpha = parse_rational(alpha, "alpha")
    mms = [parse_rational(v) for v in mms_values]
    if len(mms) != instance.n:
        raise DomainError(f"expected {instance.n} MMS values, got {len(mms)}")
    values = _values(instance, allocation)
    return FairnessReport().add(_threshold_check("alpha-mms", values, [alpha * v for v in mms]))


def verify_prop(instance: Instance, allocation: Allocation) -> FairnessReport:
    values = _values(instance, allocation)
    totals = [instance.goods_value(i) + instance.cake_value(i) for i in range(instance.n)]
    return FairnessReport().add(_threshold_check("prop", values, [t / instance.n for t in totals]))


def verify_wpr(instance: Instance, pieces: Sequence[CakePiece], weights: Sequence[RationalLike]) -> FairnessReport:
    """u_i(C_i) >= w_i u_i(C) and the pieces tile the cake."""
    ws = [parse_rational(w) for w in weights]
    issues = tiling_issues(pieces)
    if len(pieces) != instance.n:
        issues.append(("agents", f"expected {instance.n} pieces, got {len(pieces)}"))
    if issues:
        raise ValidationError(issues)
    values = [evaluate(instance, i, p) for i, p in enumerate(pieces)]
    totals = [evaluate(instance, i, WHOLE_CAKE) for i in range(instance.n)]
    return FairnessReport().add(_threshold_check("wpr", values, [w * t for w, t in zip(ws, totals)]))


def _pair_table(instance: Instance, allocation: Allocation) -> tuple[list[Fraction], list[list[Fraction]]]:
    own = _values(instance, allocation)
    other = [
        [bundle_value(instance, i, b.goods, b.cake) for b in allocation.bundles] for i in range(instance.n)
    ]
    return own, other


def _best_good(instance: Instance, agent: int, bundle: Bundle) -> Fraction:
    return max((instance.utilities[agent][g] for g in bundle.goods), default=ZERO)


def _pairwise(notion: str, n: int, pair_slack) -> NotionCheck:
    slack = []
    worst, worst_pair = None, None
    for i in range(n):
        s_i = ZERO
        first = True
        for j in range(n):
            if i == j:
                continue
            s = pair_slack(i, j)
            if first or s < s_i:
                s_i, first = s, False
            if worst is None or s < worst:
                worst, worst_pair = s, (i, j)
        slack.append(s_i)
    return NotionCheck(notion, [s >= 0 for s in slack], slack, worst_pair)


def verify_ef(instance: Instance, allocation: Allocation) -> FairnessReport:
    own, other = _pair_table(instance, allocation)
    return FairnessReport().add(_pairwise("ef", instance.n, lambda i, j: own[i] - other[i][j]))


def verify_ef1(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Envy towards j vanishes after removing j's single best good (in i's eyes)."""
    own, other = _pair_table(instance, allocation)
    b = allocation.bundles
    return FairnessReport().add(
        _pairwise("ef1", instance.n, lambda i, j: own[i] - other[i][j] + _best_good(instance, i, b[j]))
    )


def verify_efm(instance: Instance, allocation: Allocation) -> FairnessReport:
    """EF towards bundles holding cake, EF1 towards goods-only bundles.

    A bundle "holds cake" when its piece has positive length.  Pairs where
    the verdict would change if zero-value cake counted as no cake are
    listed in ``flags``.
    """
    own, other = _pair_table(instance, allocation)
    b = allocation.bundles
    worthless = [
        not b[j].cake.is_empty and all(evaluate(instance, k, b[j].cake) == 0 for k in range(instance.n))
        for j in range(instance.n)
    ]

    def slack(i: int, j: int, by_value: bool = False) -> Fraction:
        has_cake = not b[j].cake.is_empty and not (by_value and worthless[j])
        base = own[i] - other[i][j]
        return base if has_cake else base + _best_good(instance, i, b[j])

    report = FairnessReport().add(_pairwise("efm", instance.n, slack))
    for i in range(instance.n):
        for j in range(instance.n):
            if i != j and worthless[j] and (slack(i, j) >= 0) != (slack(i, j, True) >= 0):
                report.flags.append(f"efm({i},{j}): verdict depends on whether zero-value cake counts as cake")
    return report


def efm_mms_bound(instance: Instance, allocation: Allocation, guards: SizeGuards | None = None) -> FairnessReport:
    """u_i(A_i) >= (MMS_i(n, M) + u_i(C)) / n >= MMS_i(n, M u C) / n for an EFM allocation."""
    if not verify_efm(instance, allocation).ok("efm"):
        raise ContractViolation("allocation is not EFM")
    n = instance.n
    values = agent_values(instance, allocation)
    goods_only = instance.without_cake()
    strong, weak = [], []
    for i in range(n):
        mms_goods = exact_mms(goods_only, i, n, guards).floor
        mms_all = exact_mms(instance, i, n, guards).floor
        strong.append((mms_goods + instance.cake_value(i)) / n)
        weak.append(mms_all / n)
    report = FairnessReport()
    report.add(_threshold_check("efm-mms-bound", values, strong))
    report.add(_threshold_check("efm-mms-weak", values, weak))
    return report


def verify_all(instance: Instance, allocation: Allocation, alpha: RationalLike | None = None,
               mms_values: Sequence[RationalLike] | None = None) -> FairnessReport:
    """Every notion that needs no extra input, plus alpha-MMS when alpha and MMS values are given."""
    report = FairnessReport()
    if alpha is not None and mms_values is not None:
        report.merge(verify_alpha_mms(instance, allocation, alpha, mms_values))
    for fn in (verify_prop, verify_ef, verify_ef1, verify_efm):
        report.merge(fn(instance, allocation))
    return report


def round_robin(instance: Instance) -> Allocation:
    """Agents take turns picking their favourite remaining good (lowest index on ties)."""
    if instance.has_cake:
        raise DomainError("round robin needs an indivisible-only instance")
    left = list(range(instance.m))
    goods: list[set[int]] = [set() for _ in range(instance.n)]
    turn = 0
    while left:
        row = instance.utilities[turn]
        g = max(left, key=lambda g: (row[g], -g))
        goods[turn].add(g)
        left.remove(g)
        turn = (turn + 1) % instance.n
    return Allocation.from_parts(goods)
