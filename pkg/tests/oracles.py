"""Brute-force reference implementations, written independently of the package."""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def integrate(triples, x, y):
    """Integral of a piecewise-constant density given as (left, right, height) triples."""
    total = Fraction(0)
    for a, b, h in triples:
        lo, hi = max(a, x), min(b, y)
        if hi > lo:
            total += (hi - lo) * h
    return total


def leftmost_cut(triples, x, beta):
    """Smallest y >= x with integral(x, y) >= beta, by walking segments."""
    if beta <= 0:
        return x
    acc = Fraction(0)
    for a, b, h in sorted(triples):
        if b <= x:
            continue
        lo = max(a, x)
        seg = (b - lo) * h
        if acc + seg >= beta and h > 0:
            return lo + (beta - acc) / h
        acc += seg
    return None


def level(values, budget):
    """Max t with sum(max(0, t - v)) <= budget."""
    vs = sorted(values)
    if not vs:
        return Fraction(0)
    if budget == 0:
        return vs[0]
    prefix = Fraction(0)
    for j, v in enumerate(vs, start=1):
        prefix += v
        t = (budget + prefix) / j
        if j == len(vs) or t <= vs[j]:
            return t
    raise AssertionError("unreachable")


def set_partitions(m, k):
    """Restricted-growth strings of length m with at most k blocks."""
    if m == 0:
        yield ()
        return

    def rec(prefix, top):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for b in range(min(top + 2, k)):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([0], 0)


def mms(values, k, cake=Fraction(0)):
    """Maximin share over every k-partition of the goods with a divisible cake of value ``cake``."""
    values = [Fraction(v) for v in values]
    best = None
    for rgs in set_partitions(len(values), k):
        sums = [Fraction(0)] * k
        for g, b in enumerate(rgs):
            sums[b] += values[g]
        t = level(sums, Fraction(cake))
        if best is None or t > best:
            best = t
    return best if best is not None else Fraction(0)


def instance_mms(instance, agent, k=None):
    k = instance.n if k is None else k
    cake = instance.cake_value(agent) if instance.has_cake else Fraction(0)
    return mms(instance.utilities[agent], k, cake)


def all_assignments(n, m):
    return product(range(n), repeat=m)
