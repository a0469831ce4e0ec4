"""Seeded random instance generators for test corpora and experiments."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import CakeDensity, DensitySegment, Instance


def _rational(rng: random.Random, top: int, cap: int) -> Fraction:
    return Fraction(rng.randint(0, top), rng.randint(1, cap))


def random_density(rng: random.Random, segments: int, value_cap: int) -> CakeDensity:
    """At most ``segments`` pieces with breakpoints of denominator <= value_cap."""
    grid = sorted({Fraction(rng.randint(1, value_cap - 1), value_cap) for _ in range(segments - 1)}) if value_cap > 1 else []
    bounds = [Fraction(0)] + grid + [Fraction(1)]
    segs = []
    for a, b in zip(bounds, bounds[1:]):
        segs.append(DensitySegment(a, b, _rational(rng, 2 * value_cap, value_cap)))
    return CakeDensity(tuple(segs))


def generate_random(seed: int, n: int, m: int, cake_segments: int = 0, value_cap: int = 6) -> Instance:
    """Deterministic random instance.

    Utilities are p/q with q <= value_cap; ``cake_segments == 0`` gives an
    indivisible-only instance.
    """
    if n < 1 or m < 0 or cake_segments < 0 or value_cap < 1:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    utilities = [[_rational(rng, 2 * value_cap, value_cap) for _ in range(m)] for _ in range(n)]
    densities = None
    if cake_segments > 0:
        densities = [random_density(rng, rng.randint(1, cake_segments), value_cap) for _ in range(n)]
    return Instance.create(utilities, densities)


def random_corpus(count: int, seed: int = 0, agents=(2, 3, 4), max_goods: int = 8, cake_segments: int = 4,
                  value_cap: int = 6, cake_probability: float = 0.8) -> list[Instance]:
    """``count`` instances with n drawn from ``agents`` and m <= ``max_goods``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.choice(agents)
        m = rng.randint(0, max_goods)
        segs = cake_segments if rng.random() < cake_probability else 0
        out.append(generate_random(rng.randrange(2**32), n, m, segs, value_cap))
    return out
