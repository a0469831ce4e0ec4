"""Frozen-pieces reduction from mixed goods to indivisible goods.

Each agent lays out the cake shares of her MMS certificate as consecutive
intervals from the left, using her own cut queries.  All agents' cut points
together split the cake into at most n(n-1)+1 intervals; each becomes an
indivisible good.  Every agent keeps her MMS (her own certificate survives
the extra cuts) and any allocation of the new goods thaws back into an
allocation of the original resources with identical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import SizeGuards
from .core import ONE, ZERO, Allocation, Bundle, CakePiece, Instance, cut, evaluate
from .mms import MMSCertificate, exact_mms


@dataclass(frozen=True)
class FrozenRecord:
    """How the frozen instance maps back onto the original one."""

    original_goods: int
    pieces: tuple[CakePiece, ...]
    cuts: tuple[tuple[Fraction, ...], ...]
    certificates: tuple[MMSCertificate, ...] = ()
    had_cake: bool = True

    def thaw(self, allocation: Allocation) -> Allocation:
        """Turn frozen goods back into cake intervals."""
        m = self.original_goods
        bundles = []
        for b in allocation.bundles:
            goods = frozenset(g for g in b.goods if g < m)
            cake = CakePiece.of(iv for g in b.goods if g >= m for iv in self.pieces[g - m].intervals)
            bundles.append(Bundle(goods, cake.union(b.cake)))
        return Allocation(tuple(bundles))


def certificate_cuts(instance: Instance, cert: MMSCertificate) -> list[Fraction]:
    """Interior points laying the certificate's shares left to right (at most k - 1 cuts)."""
    points = []
    x = ZERO
    for share in cert.cake_shares[:-1]:
        if share == 0:
            continue
        x = cut(instance, cert.agent, x, share)
        points.append(x)
    return points


def reduce_to_indivisible(instance: Instance, guards: SizeGuards | None = None) -> tuple[Instance, FrozenRecord]:
    """Indivisible instance whose goods are M plus the frozen cake intervals."""
    if not instance.has_cake:
        return instance, FrozenRecord(instance.m, (), (), (), had_cake=False)
    n = instance.n
    certs = tuple(exact_mms(instance, i, n, guards) for i in range(n))
    cuts = tuple(tuple(certificate_cuts(instance, c)) for c in certs)
    pooled = sorted({p for cs in cuts for p in cs if 0 < p < 1})
    bounds = [ZERO] + pooled + [ONE]
    pieces = tuple(CakePiece.interval(a, b) for a, b in zip(bounds, bounds[1:]))
    utilities = [
        list(instance.utilities[i]) + [evaluate(instance, i, p) for p in pieces] for i in range(n)
    ]
    labels = list(instance.goods) + [f"frozen[{a},{b}]" for a, b in zip(bounds, bounds[1:])]
    frozen = Instance.create(utilities, None, labels, instance.agents)
    return frozen, FrozenRecord(instance.m, pieces, cuts, certs)
