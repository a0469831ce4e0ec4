"""Instances where adding cake lowers the best achievable MMS ratio.

Starting from an n x n base matrix whose rows and columns sum to one, two
perturbations P+ and P- (one the transpose of the other) are added.  Half the
agents value the n^2 entries as M + P+, the rest as M + P-.  Rows and
columns are then the only near-balanced partitions; the builder records the
bundle values each partition yields for every agent, with and without a
homogeneous cake worth epsilon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import CakeDensity, Instance, RationalLike, parse_rational
from .errors import DomainError
from .mms import waterfill

Matrix = list[list[Fraction]]

POSITIVE_ENTRY_CAP = 20


@dataclass
class BaseMatrixCheck:
    matrix: Matrix
    nonnegative: bool
    positivity: bool
    unit_sums: bool
    rigidity: str = "skipped"  # "pass" | "fail" | "skipped" | "too-large"
    failures: list[str] = field(default_factory=list)

    @property
    def basic_ok(self) -> bool:
        return self.nonnegative and self.positivity and self.unit_sums


def _as_matrix(matrix: Sequence[Sequence[RationalLike]]) -> Matrix:
    rows = [[parse_rational(v) for v in row] for row in matrix]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DomainError("base matrix must be square and non-empty")
    return rows


def _unit_partitions(entries: list[tuple[Fraction, tuple[int, int]]], n: int):
    """Yield every partition of ``entries`` into n groups each summing to exactly 1."""
    order = sorted(range(len(entries)), key=lambda t: -entries[t][0])
    sums = [Fraction(0)] * n
    groups: list[list[tuple[int, int]]] = [[] for _ in range(n)]

    def rec(t: int):
        if t == len(order):
            if all(s == 1 for s in sums):
                yield frozenset(frozenset(g) for g in groups)
            return
        v, pos = entries[order[t]]
        tried_empty = False
        for j in range(n):
            if sums[j] + v > 1:
                continue
            if not groups[j]:
                if tried_empty:
                    continue
                tried_empty = True
            sums[j] += v
            groups[j].append(pos)
            yield from rec(t + 1)
            groups[j].pop()
            sums[j] -= v

    yield from rec(0)


def check_base_matrix(matrix: Sequence[Sequence[RationalLike]], exhaustive: bool = False) -> BaseMatrixCheck:
    """Check the four base-matrix properties; rigidity only when ``exhaustive``."""
    M = _as_matrix(matrix)
    n = len(M)
    failures = []
    nonneg = all(v >= 0 for row in M for v in row)
    if not nonneg:
        failures.append("property 1: negative entry")
    positive = all(M[i][n - 1] > 0 and M[n - 1][i] > 0 for i in range(n)) and M[0][0] > 0
    if not positive:
        failures.append("property 2: last row/column or top-left entry not positive")
    row_sums = [sum(row) for row in M]
    col_sums = [sum(M[r][c] for r in range(n)) for c in range(n)]
    unit = all(s == 1 for s in row_sums + col_sums)
    if not unit:
        bad_r = [r for r, s in enumerate(row_sums) if s != 1]
        bad_c = [c for c, s in enumerate(col_sums) if s != 1]
        failures.append(f"property 3: rows {bad_r} / columns {bad_c} do not sum to 1")
    check = BaseMatrixCheck(M, nonneg, positive, unit, failures=failures)
    if exhaustive:
        entries = [(M[r][c], (r, c)) for r in range(n) for c in range(n) if M[r][c] > 0]
        if len(entries) > POSITIVE_ENTRY_CAP:
            check.rigidity = "too-large"
        else:
            rows = frozenset(frozenset((r, c) for c in range(n) if M[r][c] > 0) for r in range(n))
            cols = frozenset(frozenset((r, c) for r in range(n) if M[r][c] > 0) for c in range(n))
            check.rigidity = "pass"
            for part in _unit_partitions(entries, n):
                if part not in (rows, cols):
                    check.rigidity = "fail"
                    failures.append("property 4: a unit-sum partition is neither rows nor columns")
                    break
    return check


def perturbations(n: int, epsilon: Fraction) -> tuple[Matrix, Matrix]:
    """P+ and P- (P- is the transpose of P+)."""
    z = Fraction(0)
    plus = [[z] * n for _ in range(n)]
    plus[0][0] = -epsilon
    plus[n - 1][0] = -epsilon
    plus[n - 1][n - 1] = (2 * n - 3) * epsilon
    for c in range(1, n - 1):
        plus[n - 1][c] = -2 * epsilon
    minus = [[plus[c][r] for c in range(n)] for r in range(n)]
    return plus, minus


def _row_values(V: Matrix) -> list[Fraction]:
    return [sum(row) for row in V]


def _col_values(V: Matrix) -> list[Fraction]:
    n = len(V)
    return [sum(V[r][c] for r in range(n)) for c in range(n)]


@dataclass
class UselessCakeConstruction:
    instance: Instance
    plus: Matrix
    minus: Matrix
    sidecar: dict


def build_useless_cake_instance(
    matrix: Sequence[Sequence[RationalLike]],
    epsilon: RationalLike,
    with_cake: bool = True,
) -> UselessCakeConstruction:
    """Perturbed base-matrix instance plus a sidecar of expected bundle values.

    Good r*n + c is matrix entry (r, c).  The first floor(n/2) agents use
    M + P+, the others M + P-.  With ``with_cake`` every agent also values a
    homogeneous cake at epsilon.
    """
    M = _as_matrix(matrix)
    n = len(M)
    eps = parse_rational(epsilon, "epsilon")
    if n < 6:
        raise DomainError("the construction needs n >= 6")
    if not 0 < eps < Fraction(1, 4):
        raise DomainError("epsilon must lie in (0, 1/4)")
    base = check_base_matrix(M)
    if not base.basic_ok:
        raise DomainError("base matrix fails: " + "; ".join(base.failures))
    plus, minus = perturbations(n, eps)
    vp = [[M[r][c] + plus[r][c] for c in range(n)] for r in range(n)]
    vm = [[M[r][c] + minus[r][c] for c in range(n)] for r in range(n)]
    if any(v < 0 for row in vp + vm for v in row):
        raise DomainError(f"epsilon {eps} too large: a perturbed entry is negative")

    n_plus = n // 2
    kinds = ["plus"] * n_plus + ["minus"] * (n - n_plus)
    utilities = [[v for row in (vp if k == "plus" else vm) for v in row] for k in kinds]
    densities = [CakeDensity.uniform(eps)] * n if with_cake else None
    goods = [f"m[{r},{c}]" for r, c in itertools.product(range(n), repeat=2)]
    instance = Instance.create(utilities, densities, goods)

    one = Fraction(1)
    big = one + (2 * n - 3) * eps
    expected = {
        "plus": {
            "rows": [one - eps] + [one] * (n - 1),
            "columns": [one - 2 * eps] * (n - 1) + [big],
        },
        "minus": {
            "rows": [one - 2 * eps] * (n - 1) + [big],
            "columns": [one - eps] + [one] * (n - 1),
        },
    }
    sidecar: dict = {
        "n": n,
        "epsilon": eps,
        "with_cake": with_cake,
        "perturbation_sums": {
            "plus_rows": {"computed": _row_values(plus), "expected": [-eps] + [Fraction(0)] * (n - 1)},
            "plus_columns": {"computed": _col_values(plus), "expected": [-2 * eps] * (n - 1) + [(2 * n - 3) * eps]},
            "minus_rows": {"computed": _row_values(minus), "expected": [-2 * eps] * (n - 1) + [(2 * n - 3) * eps]},
            "minus_columns": {"computed": _col_values(minus), "expected": [-eps] + [Fraction(0)] * (n - 1)},
        },
        "agents": [],
        "claimed_mms_without_cake": one - eps,
        "claimed_mms_with_cake": one,
        "claimed_gamma_without_cake": (1 - 2 * eps) / (1 - eps),
        "claimed_gamma_with_cake_at_most": one - Fraction(3, 2) * eps,
        "gamma_verified": False,
        "gamma_note": "gamma at n >= 6 exceeds the exhaustive guard; recorded, not recomputed",
    }
    ok = all(
        s["computed"] == s["expected"] for s in sidecar["perturbation_sums"].values()
    )
    for i, kind in enumerate(kinds):
        V = vp if kind == "plus" else vm
        rows, cols = _row_values(V), _col_values(V)
        row_floor, col_floor = min(rows), min(cols)
        row_cake, _ = waterfill(rows, eps)
        col_cake, _ = waterfill(cols, eps)
        entry = {
            "agent": i,
            "kind": kind,
            "rows": {"computed": rows, "expected": expected[kind]["rows"]},
            "columns": {"computed": cols, "expected": expected[kind]["columns"]},
            "row_floor": row_floor,
            "column_floor": col_floor,
            "rigid_floor": max(row_floor, col_floor),
            "row_floor_with_cake": row_cake,
            "column_floor_with_cake": col_cake,
            "rigid_floor_with_cake": max(row_cake, col_cake),
        }
        entry["rigid_floor_gain"] = entry["rigid_floor_with_cake"] - entry["rigid_floor"]
        entry["ok"] = (
            rows == expected[kind]["rows"]
            and cols == expected[kind]["columns"]
            and entry["rigid_floor"] == one - eps
            and entry["rigid_floor_gain"] == eps
        )
        ok = ok and entry["ok"]
        sidecar["agents"].append(entry)
    sidecar["all_ok"] = ok
    return UselessCakeConstruction(instance, plus, minus, sidecar)


def uniform_base_matrix(n: int) -> Matrix:
    """Every entry 1/n (passes properties 1-3, not rigidity)."""
    return [[Fraction(1, n)] * n for _ in range(n)]


def diagonal_base_matrix(n: int) -> Matrix:
    """(I + J/n) / 2: strictly positive and doubly stochastic."""
    return [[Fraction(1, 2 * n) + (Fraction(1, 2) if r == c else 0) for c in range(n)] for r in range(n)]
