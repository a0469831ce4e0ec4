"""Brute-force MMS approximation guarantee gamma(I) for small instances.

Supported: indivisible-only instances and instances whose cake is
homogeneous.  For each assignment of goods the best achievable minimum ratio
is found exactly; with a homogeneous cake this is the largest t such that the
cake fractions max(0, (t MMS_i - u_i(M_i)) / u_i(C)) fit into one cake, found
by scanning the breakpoints u_i(M_i) / MMS_i.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .config import SizeGuards
from .core import ONE, ZERO, Instance
from .errors import TooLargeError, UnsupportedError
from .mms import exact_mms


def _best_t(values, mms, cakes, relevant) -> Fraction:
    cap = ONE
    active = []
    for i in relevant:
        b = values[i] / mms[i]
        if cakes[i] == 0:
            cap = min(cap, b)
        else:
            active.append((b, i))
    if not active:
        return cap
    active.sort()
    slope = ZERO
    offset = ZERO
    t = None
    for j, (b, i) in enumerate(active):
        slope += mms[i] / cakes[i]
        offset += values[i] / cakes[i]
        cand = (1 + offset) / slope
        if j + 1 == len(active) or cand <= active[j + 1][0]:
            t = cand
            break
    return min(cap, t)


def gamma(instance: Instance, guards: SizeGuards | None = None) -> Fraction:
    """The largest alpha for which ``instance`` admits an alpha-MMS allocation (alpha <= 1)."""
    guards = guards or SizeGuards.from_env()
    if instance.has_cake and not instance.is_homogeneous():
        raise UnsupportedError("gamma is only supported without cake or with a homogeneous cake")
    if instance.n > guards.gamma_max_agents or instance.m > guards.gamma_max_goods:
        raise TooLargeError(
            f"gamma enumeration limited to {guards.gamma_max_agents} agents and "
            f"{guards.gamma_max_goods} goods, got n={instance.n}, m={instance.m}"
        )
    n, m = instance.n, instance.m
    mms = [exact_mms(instance, i, n, guards).floor for i in range(n)]
    relevant = [i for i in range(n) if mms[i] > 0]
    if not relevant:
        return ONE
    cakes = [instance.cake_value(i) for i in range(n)]
    u = instance.utilities
    best = ZERO
    for owners in itertools.product(range(n), repeat=m):
        values = [ZERO] * n
        for g, i in enumerate(owners):
            values[i] += u[i][g]
        t = _best_t(values, mms, cakes, relevant)
        if t > best:
            best = t
            if best == ONE:
                break
    return best
