"""Branch-and-bound max-min partitioning over exact integers.

Goods are assigned largest first.  A node is pruned when the water-filling
level of the current bundle sums, with every unassigned good and the cake
budget treated as divisible, cannot beat the incumbent.  Values are scaled by
a common denominator times lcm(1..k), so every water-filling level is an
integer and the whole search runs on Python ints.

Without a cake budget, the largest class of identical values is held back and
dealt out at the leaves greedily (each copy to the currently poorest bundle),
which is optimal for identical items and keeps discretized cakes cheap.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from fractions import Fraction
from typing import Sequence

from .errors import TooLargeError


def level_int(sums: Sequence[int], extra: int) -> int:
    """Water-filling level of ``sums`` topped up by ``extra`` (caller guarantees divisibility)."""
    s = sorted(sums)
    k = len(s)
    acc = extra
    for j in range(1, k + 1):
        acc += s[j - 1]
        if j == k or acc <= s[j] * j:
            return acc // j
    raise AssertionError("unreachable")


def _greedy_fill(sums: list[int], value: int, count: int) -> list[int]:
    """Deal ``count`` copies of ``value`` to the poorest bundle each time; return per-bundle counts."""
    heap = [(s, j) for j, s in enumerate(sums)]
    heapq.heapify(heap)
    taken = [0] * len(sums)
    for _ in range(count):
        s, j = heapq.heappop(heap)
        taken[j] += 1
        heapq.heappush(heap, (s + value, j))
    return taken


class _Done(Exception):
    pass


def maxmin_partition(
    values: Sequence[Fraction],
    k: int,
    budget: Fraction = Fraction(0),
    tolerance: Fraction = Fraction(0),
    node_limit: int = 5_000_000,
) -> tuple[Fraction, list[list[int]]]:
    """Partition ``values`` into ``k`` bundles maximizing the water-filled minimum.

    Returns ``(floor, bundles)`` where ``floor`` is the water-filling level of
    the bundle sums with ``budget`` spread on top.  With ``tolerance = d > 0``
    the result is only guaranteed to be at least ``(1 - d)`` times optimal.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    m = len(values)
    denom = 1
    for v in list(values) + [budget]:
        denom = math.lcm(denom, v.denominator)
    scale = denom * math.lcm(*range(1, k + 1))
    ivals = [int(v * scale) for v in values]
    ibudget = int(budget * scale)

    zeros = [g for g in range(m) if ivals[g] == 0]
    positive = [g for g in range(m) if ivals[g] > 0]

    group_value, group_items = 0, []
    if ibudget == 0 and positive:
        counts = Counter(ivals[g] for g in positive)
        val, cnt = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
        if cnt >= 3:
            group_value = val
            group_items = [g for g in positive if ivals[g] == val]
    group_total = group_value * len(group_items)

    others = [g for g in positive if not (group_items and ivals[g] == group_value)]
    others.sort(key=lambda g: (-ivals[g], g))
    ov = [ivals[g] for g in others]
    suffix = [0] * (len(ov) + 1)
    for t in range(len(ov) - 1, -1, -1):
        suffix[t] = suffix[t + 1] + ov[t]

    num, den = tolerance.numerator, tolerance.denominator

    def leaf_value(sums: list[int]) -> tuple[int, list[int] | None]:
        if group_items:
            taken = _greedy_fill(sums, group_value, len(group_items))
            return min(s + group_value * t for s, t in zip(sums, taken)), taken
        return level_int(sums, ibudget), None

    # greedy incumbent: largest first into the poorest bundle
    sums = [0] * k
    assign = [0] * len(others)
    for t, v in enumerate(ov):
        j = min(range(k), key=lambda b: (sums[b], b))
        assign[t] = j
        sums[j] += v
    best, best_taken = leaf_value(sums)
    best_assign = list(assign)
    root_bound = level_int([0] * k, suffix[0] + group_total + ibudget)

    sums = [0] * k
    nodes = 0

    def rec(t: int) -> None:
        nonlocal best, best_assign, best_taken, nodes
        nodes += 1
        if nodes > node_limit:
            raise TooLargeError(f"max-min search exceeded {node_limit} nodes (m={m}, k={k})")
        if t == len(ov):
            val, taken = leaf_value(sums)
            if val > best:
                best, best_assign, best_taken = val, list(assign), taken
                if best >= root_bound:
                    raise _Done
            return
        bound = level_int(sums, suffix[t] + group_total + ibudget)
        if bound * (den - num) <= best * den:
            return
        v = ov[t]
        tried = set()
        for j in sorted(range(k), key=lambda b: (sums[b], b)):
            if sums[j] in tried:
                continue
            tried.add(sums[j])
            sums[j] += v
            assign[t] = j
            rec(t + 1)
            sums[j] -= v

    if best < root_bound:
        try:
            rec(0)
        except _Done:
            pass

    bundles: list[list[int]] = [[] for _ in range(k)]
    for t, g in enumerate(others):
        bundles[best_assign[t]].append(g)
    if best_taken is not None:
        it = iter(group_items)
        for j, c in enumerate(best_taken):
            for _ in range(c):
                bundles[j].append(next(it))
    bundles[0].extend(zeros)
    for b in bundles:
        b.sort()
    return Fraction(best, scale), bundles
