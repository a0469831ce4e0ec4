"""Weighted proportional cake division by cloning agents into an Even-Paz recursion.

With weights over a common denominator D, agent i becomes D * w_i clones of
equal entitlement.  Each recursion step halves the clone count: every clone
marks the point splitting the current interval in the ratio of the two
halves, the clones with the leftmost marks take the left part, and the rest
take the right.  Every clone ends with at least 1/D of her agent's value, so
agent i receives at least w_i * u_i(C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ONE, ZERO, CakePiece, Instance, RationalLike, cut, evaluate, parse_rational
from .errors import DomainError


@dataclass(frozen=True)
class WeightProfile:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise DomainError("weights must be non-negative")
        if sum(self.weights, ZERO) != 1:
            raise DomainError(f"weights sum to {sum(self.weights, ZERO)}, not 1")

    @classmethod
    def of(cls, weights: Sequence[RationalLike]) -> "WeightProfile":
        return cls(tuple(parse_rational(w, "weight") for w in weights))

    @property
    def common_denominator(self) -> int:
        return math.lcm(*(w.denominator for w in self.weights))

    def clone_counts(self) -> list[int]:
        d = self.common_denominator
        return [int(w * d) for w in self.weights]


def wpr_alloc(instance: Instance, weights: WeightProfile | Sequence[RationalLike]) -> list[CakePiece]:
    """Pieces C_1..C_n tiling [0, 1] with u_i(C_i) >= w_i * u_i(C) for every agent."""
    if not isinstance(weights, WeightProfile):
        weights = WeightProfile.of(weights)
    if len(weights.weights) != instance.n:
        raise DomainError(f"expected {instance.n} weights, got {len(weights.weights)}")
    counts = weights.clone_counts()
    parts: list[list[tuple[Fraction, Fraction]]] = [[] for _ in range(instance.n)]
    clones = [(i, c) for i, c in enumerate(counts) if c > 0]
    _divide(instance, ZERO, ONE, clones, parts)
    return [CakePiece.of(p) for p in parts]


def _divide(instance: Instance, a: Fraction, b: Fraction, clones: list[tuple[int, int]],
            parts: list[list[tuple[Fraction, Fraction]]]) -> None:
    # iterative to keep deep halvings of large denominators off the call stack
    stack = [(a, b, clones)]
    while stack:
        a, b, clones = stack.pop()
        if len(clones) == 1:
            if a < b:
                parts[clones[0][0]].append((a, b))
            continue
        total = sum(c for _, c in clones)
        left_count = total // 2
        marks = []
        for agent, c in clones:
            whole = evaluate(instance, agent, (a, b))
            marks.append((cut(instance, agent, a, whole * left_count / total), agent, c))
        marks.sort()
        left: list[tuple[int, int]] = []
        right: list[tuple[int, int]] = []
        need = left_count
        z = a
        for mark, agent, c in marks:
            if need > 0:
                take = min(c, need)
                left.append((agent, take))
                need -= take
                z = mark
                if c > take:
                    right.append((agent, c - take))
            else:
                right.append((agent, c))
        stack.append((z, b, right))
        stack.append((a, z, left))


def equal_split(instance: Instance, weights: WeightProfile | Sequence[RationalLike]) -> list[CakePiece]:
    """Split every constant stretch of every density by length in proportion to the weights.

    Each agent then holds exactly w_j of every agent's value, so the split is
    weighted-proportional with equality and, for equal weights, envy-free.
    Unlike :func:`wpr_alloc` it reads the density breakpoints directly
    instead of going through cut queries.
    """
    if not isinstance(weights, WeightProfile):
        weights = WeightProfile.of(weights)
    if len(weights.weights) != instance.n:
        raise DomainError(f"expected {instance.n} weights, got {len(weights.weights)}")
    points = {ZERO, ONE}
    for i in range(instance.n):
        for seg in instance.density(i).segments:
            points.update((seg.left, seg.right))
    bounds = sorted(points)
    parts: list[list[tuple[Fraction, Fraction]]] = [[] for _ in range(instance.n)]
    for a, b in zip(bounds, bounds[1:]):
        x = a
        for i, w in enumerate(weights.weights):
            y = x + w * (b - a)
            if y > x:
                parts[i].append((x, y))
            x = y
    return [CakePiece.of(p) for p in parts]
