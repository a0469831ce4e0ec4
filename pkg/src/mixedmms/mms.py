"""Exact and approximate k-maximin shares for mixed goods."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._search import maxmin_partition
from .config import SizeGuards
from .core import (
    ONE,
    ZERO,
    CakePiece,
    Instance,
    RationalLike,
    cut,
    evaluate,
    parse_rational,
    WHOLE_CAKE,
)
from .errors import DomainError, TooLargeError


def waterfill(values: Sequence[RationalLike], budget: RationalLike) -> tuple[Fraction, list[Fraction]]:
    """Spread ``budget`` over bundles worth ``values`` to maximize the minimum.

    Returns ``(level, shares)``.  With a positive budget, ``level`` is the
    unique w >= min(values) with sum(max(0, w - v)) == budget; otherwise it is
    min(values) and every share is zero.
    """
    vals = [parse_rational(v) for v in values]
    budget = parse_rational(budget)
    if not vals:
        raise DomainError("waterfill needs at least one bundle")
    if budget < 0:
        raise DomainError("budget must be non-negative")
    if budget == 0:
        return min(vals), [ZERO] * len(vals)
    s = sorted(vals)
    k = len(s)
    acc = budget
    level = None
    for j in range(1, k + 1):
        acc += s[j - 1]
        w = acc / j
        if j == k or w <= s[j]:
            level = w
            break
    shares = [max(ZERO, level - v) for v in vals]
    return level, shares


@dataclass(frozen=True)
class MMSCertificate:
    """A k-partition of the goods plus cake-value shares witnessing an MMS lower bound."""

    agent: int
    k: int
    good_partition: tuple[frozenset[int], ...]
    cake_shares: tuple[Fraction, ...]
    floor: Fraction

    def bundle_values(self, instance: Instance) -> list[Fraction]:
        return [
            instance.goods_value(self.agent, goods) + share
            for goods, share in zip(self.good_partition, self.cake_shares)
        ]

    def check(self, instance: Instance) -> bool:
        """Recompute from scratch: partition covers M, shares sum to u(C), floor is the minimum."""
        covered = sorted(g for p in self.good_partition for g in p)
        return (
            len(self.good_partition) == self.k
            and covered == list(range(instance.m))
            and all(s >= 0 for s in self.cake_shares)
            and sum(self.cake_shares, ZERO) == instance.cake_value(self.agent)
            and min(self.bundle_values(instance)) == self.floor
        )


def _agent_cake_value(instance: Instance, agent: int) -> Fraction:
    if not instance.has_cake:
        return ZERO
    return evaluate(instance, agent, WHOLE_CAKE)


def exact_mms(instance: Instance, agent: int, k: int | None = None, guards: SizeGuards | None = None) -> MMSCertificate:
    """MMS_agent(k, M u C) with a certifying partition.

    The cake enters only through its total value, water-filled onto the
    bundles of each candidate partition of the goods.
    """
    guards = guards or SizeGuards.from_env()
    k = instance.n if k is None else k
    if k < 1:
        raise DomainError("k must be at least 1")
    if not 0 <= agent < instance.n:
        raise DomainError(f"agent index {agent} out of range")
    if instance.m > guards.max_goods:
        raise TooLargeError(f"exact MMS limited to {guards.max_goods} goods, instance has {instance.m}")
    cake = _agent_cake_value(instance, agent)
    values = instance.utilities[agent]
    floor, bundles = maxmin_partition(values, k, cake, node_limit=guards.node_limit)
    sums = [sum((values[g] for g in b), ZERO) for b in bundles]
    level, shares = waterfill(sums, cake)
    assert level == floor
    return MMSCertificate(agent, k, tuple(frozenset(b) for b in bundles), tuple(shares), floor)


def indivisible_maxmin(
    values: Sequence[RationalLike],
    k: int,
    delta: RationalLike = Fraction(1, 2),
    guards: SizeGuards | None = None,
) -> tuple[Fraction, list[frozenset[int]]]:
    """Max-min k-partition of indivisible goods, at least ``(1 - delta)`` of optimal.

    Small inputs (few goods, or few labelled assignments) are solved exactly;
    larger ones run the same branch and bound with relative-gap pruning.
    Identical values in bulk are not counted towards the size test, since
    they are dealt greedily and add no branching.
    """
    guards = guards or SizeGuards.from_env()
    vals = [parse_rational(v) for v in values]
    delta = parse_rational(delta)
    if k < 1:
        raise DomainError("k must be at least 1")
    if not 0 <= delta < 1:
        raise DomainError("delta must lie in [0, 1)")
    if any(v < 0 for v in vals):
        raise DomainError("values must be non-negative")
    branching = _branching_goods(vals)
    exact = branching <= guards.exact_goods or k**branching <= guards.exact_assignments
    floor, bundles = maxmin_partition(
        vals, k, ZERO, tolerance=ZERO if exact else delta, node_limit=guards.node_limit
    )
    return floor, [frozenset(b) for b in bundles]


def _branching_goods(vals: Sequence[Fraction]) -> int:
    positive = [v for v in vals if v > 0]
    if not positive:
        return 0
    counts: dict[Fraction, int] = {}
    for v in positive:
        counts[v] = counts.get(v, 0) + 1
    biggest = max(counts.values())
    return len(positive) - (biggest if biggest >= 3 else 0)


def equal_value_cuts(instance: Instance, agent: int, pieces: int) -> list[Fraction]:
    """Cut points splitting the cake into ``pieces`` intervals of equal value to ``agent``.

    Returns the ``pieces - 1`` interior cut points issued by left-to-right cut
    queries (duplicates possible only when the density vanishes).
    """
    total = evaluate(instance, agent, WHOLE_CAKE)
    step = total / pieces
    points = []
    x = ZERO
    for _ in range(pieces - 1):
        x = cut(instance, agent, x, step)
        points.append(x)
    return points


def discretization_size(k: int, epsilon: Fraction) -> int:
    """ceil(2k / epsilon)."""
    return math.ceil(Fraction(2 * k) / epsilon)


def discretize_for_agent(instance: Instance, agent: int, k: int, epsilon: RationalLike) -> list[CakePiece]:
    """Consecutive intervals each worth at most epsilon * u(C) / (2k) to ``agent``."""
    epsilon = parse_rational(epsilon, "epsilon")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    points = equal_value_cuts(instance, agent, discretization_size(k, epsilon))
    bounds = [ZERO] + points + [ONE]
    return [CakePiece.interval(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]


def approx_mms(instance: Instance, agent: int, k: int | None = None, epsilon: RationalLike = Fraction(1, 10),
               guards: SizeGuards | None = None) -> Fraction:
    """A value V with (1 - epsilon) MMS <= V <= MMS for ``agent``.

    The agent's cake is cut into ceil(2k/epsilon) intervals of equal value,
    which join the goods as indivisible items; the resulting max-min problem
    is solved to within a factor 1 - epsilon/2.
    """
    epsilon = parse_rational(epsilon, "epsilon")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    k = instance.n if k is None else k
    values = list(instance.utilities[agent])
    cake = _agent_cake_value(instance, agent)
    if cake > 0:
        pieces = discretize_for_agent(instance, agent, k, epsilon)
        values += [evaluate(instance, agent, p) for p in pieces]
    floor, _ = indivisible_maxmin(values, k, epsilon / 2, guards)
    return floor


def discretize_instance(instance: Instance, epsilon: RationalLike, agents: Sequence[int] | None = None,
                        k: int | None = None) -> tuple[Instance, list[CakePiece]]:
    """Replace the cake by indivisible intervals.

    Every listed agent (all by default) cuts the cake into ceil(2k/epsilon)
    pieces of equal value to her; the pooled cut points delimit the new
    intervals, so each one is worth at most epsilon * u_i(C) / (2k) to every
    listed agent.  Returns the indivisible instance (goods first, then
    intervals left to right) and the intervals themselves.
    """
    epsilon = parse_rational(epsilon, "epsilon")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    k = instance.n if k is None else k
    if not instance.has_cake:
        return instance, []
    agents = range(instance.n) if agents is None else agents
    points: set[Fraction] = set()
    for i in agents:
        if evaluate(instance, i, WHOLE_CAKE) > 0:
            points.update(equal_value_cuts(instance, i, discretization_size(k, epsilon)))
    bounds = [ZERO] + sorted(p for p in points if 0 < p < 1) + [ONE]
    pieces = [CakePiece.interval(a, b) for a, b in zip(bounds, bounds[1:])]
    utilities = [
        list(instance.utilities[i]) + [evaluate(instance, i, p) for p in pieces] for i in range(instance.n)
    ]
    labels = list(instance.goods) + [f"cake[{a},{b}]" for a, b in zip(bounds, bounds[1:])]
    return Instance.create(utilities, None, labels, instance.agents), pieces
