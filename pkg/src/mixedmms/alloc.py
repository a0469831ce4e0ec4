"""Constructive alpha-MMS allocation for mixed goods.

Pipeline: compute (exact or approximate) MMS values, derive the guarantee
alpha, run the two-phase bag-filling algorithm on a homogeneous stand-in
cake, convert the stand-in cake lengths into weights, and divide the real
cake weighted-proportionally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol, Sequence

from .config import SizeGuards
from .core import (
    EMPTY_PIECE,
    ONE,
    ZERO,
    Allocation,
    Bundle,
    CakeDensity,
    CakePiece,
    Instance,
    RationalLike,
    agent_values,
    count_queries,
    cut,
    evaluate,
    parse_rational,
    query_section,
    WHOLE_CAKE,
)
from .errors import ContractViolation, DomainError, InsufficientValueError, PluginError
from .mms import approx_mms, discretize_instance, exact_mms, indivisible_maxmin
from .wpr import WeightProfile, wpr_alloc

EXACT = "exact"
APPROXIMATE = "approximate"


def alpha_ratio(n: int, cake_values: Sequence[RationalLike], mms_values: Sequence[RationalLike]) -> Fraction:
    """min{1, 1/2 + min_i u_i(C) / (2 (n-1) MMS_i)}, skipping agents with MMS_i = 0."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if n == 1:
        return ONE
    terms = [
        parse_rational(c) / (2 * (n - 1) * parse_rational(v))
        for c, v in zip(cake_values, mms_values, strict=True)
        if parse_rational(v) > 0
    ]
    if not terms:
        return ONE
    return min(ONE, Fraction(1, 2) + min(terms))


@dataclass
class AllocationReport:
    allocation: Allocation
    alpha: Fraction
    mms_values: list[Fraction]
    values: list[Fraction]
    mode: str = EXACT
    epsilon: Fraction | None = None
    weights: list[Fraction] | None = None
    queries: dict[str, dict[str, int]] = field(default_factory=dict)
    branch: str = "mixed"

    @property
    def ratios(self) -> list[Fraction | None]:
        """Bundle value over MMS; ``None`` marks an agent with MMS 0 (trivially satisfied)."""
        return [v / m if m > 0 else None for v, m in zip(self.values, self.mms_values)]

    @property
    def guarantee(self) -> Fraction:
        """Ratio every agent is promised against the MMS values stored in the report."""
        return self.alpha

    def satisfied(self) -> list[bool]:
        return [v >= self.alpha * m for v, m in zip(self.values, self.mms_values)]


@dataclass
class Phase2Round:
    """Instrumentation record of one bag-filling round."""

    agent: int
    goods: tuple[int, ...]
    interval: tuple[Fraction, Fraction]
    remaining: tuple[int, ...]
    unmarked: tuple[int, ...] = ()


def mixed_mms_homogeneous(
    instance: Instance,
    mms_values: Sequence[RationalLike],
    alpha: RationalLike,
    trace: list[Phase2Round] | None = None,
) -> Allocation:
    """Two-phase bag filling on an instance whose cake is homogeneous.

    Phase 1 hands out single goods worth at least alpha * MMS_i.  Phase 2
    grows a bag of goods in index order until some remaining agent values
    it at (1 - alpha) * MMS_j, lets every remaining agent mark the leftmost
    cake point completing her share, and gives bag plus cake prefix to the
    lowest mark.  The last agent takes whatever is left.

    An agent for whom bag plus all remaining cake falls short of
    alpha * MMS_i places no mark that round.  The agent whose threshold
    stopped the bag can always mark, so :class:`ContractViolation` is raised
    only if nobody can, which means the cake-sufficiency condition failed.
    """
    if not instance.is_homogeneous():
        raise DomainError("cake must be homogeneous (uniform density for every agent)")
    mms = [parse_rational(v) for v in mms_values]
    alpha = parse_rational(alpha)
    n, m = instance.n, instance.m
    u = instance.utilities
    need = [alpha * mms[i] for i in range(n)]
    bag_stop = [(1 - alpha) * mms[i] for i in range(n)]

    goods: list[set[int]] = [set() for _ in range(n)]
    cake: list[CakePiece] = [EMPTY_PIECE] * n
    agents = list(range(n))
    left = list(range(m))
    last = None

    # phase 1: big goods
    while True:
        pick = next(((i, g) for i in agents for g in left if u[i][g] >= need[i]), None)
        if pick is None:
            break
        i, g = pick
        goods[i].add(g)
        agents.remove(i)
        left.remove(g)
        last = i

    # phase 2: bag filling
    a = ZERO
    while len(agents) >= 2:
        bag: list[int] = []
        bag_value = {j: ZERO for j in agents}
        for g in left:
            if any(bag_value[j] >= bag_stop[j] for j in agents):
                break
            bag.append(g)
            for j in agents:
                bag_value[j] += u[j][g]
        marks = []
        unmarked: list[tuple[int, Fraction]] = []
        for i in agents:
            try:
                x = cut(instance, i, a, max(ZERO, need[i] - bag_value[i]))
            except InsufficientValueError as exc:
                # bag plus all remaining cake is short of alpha * MMS_i: i cannot claim this round
                unmarked.append((i, exc.shortfall))
                continue
            marks.append((x, i))
        if not marks:
            raise ContractViolation(
                "no remaining agent can complete alpha * MMS from the bag and the remaining cake: "
                + ", ".join(f"agent {i} short by {s}" for i, s in unmarked)
            )
        x, winner = min(marks)
        if trace is not None:
            trace.append(Phase2Round(winner, tuple(bag), (a, x), tuple(agents), tuple(i for i, _ in unmarked)))
        goods[winner].update(bag)
        cake[winner] = CakePiece.interval(a, x)
        agents.remove(winner)
        left = [g for g in left if g not in bag]
        a = x
        last = winner

    heir = agents[0] if agents else last
    goods[heir].update(left)
    cake[heir] = cake[heir].union(CakePiece.interval(a, ONE))
    if not instance.has_cake:
        cake = [EMPTY_PIECE] * n
    return Allocation(tuple(Bundle(frozenset(goods[i]), cake[i]) for i in range(n)))


def homogeneous_standin(instance: Instance, cake_values: Sequence[Fraction]) -> Instance:
    """Same goods; each agent's cake replaced by a uniform one of equal total value."""
    if not instance.has_cake:
        return instance
    return instance.with_densities([CakeDensity.uniform(c) for c in cake_values])


def compute_mms_values(instance: Instance, mode: str = EXACT, epsilon: RationalLike | None = None,
                       guards: SizeGuards | None = None) -> list[Fraction]:
    if mode == EXACT:
        return [exact_mms(instance, i, instance.n, guards).floor for i in range(instance.n)]
    if mode == APPROXIMATE:
        if epsilon is None:
            raise DomainError("approximate mode needs epsilon")
        return [approx_mms(instance, i, instance.n, epsilon, guards) for i in range(instance.n)]
    raise DomainError(f"unknown mode {mode!r}")


def mixed_mms(
    instance: Instance,
    epsilon: RationalLike | None = None,
    mode: str = EXACT,
    mms_values: Sequence[RationalLike] | None = None,
    guards: SizeGuards | None = None,
    trace: list[Phase2Round] | None = None,
) -> AllocationReport:
    """alpha-MMS allocation (exact mode) or (1 - eps) alpha'-MMS allocation (approximate mode).

    Query counts are reported per stage: ``mms`` (share computation),
    ``alloc`` (everything the algorithm itself asks) and ``wpr``.
    """
    if mode == APPROXIMATE:
        if epsilon is None:
            raise DomainError("approximate mode needs epsilon")
        epsilon = parse_rational(epsilon, "epsilon")
        if not 0 < epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)")
    n = instance.n
    with count_queries() as counter:
        with query_section("mms"):
            if mms_values is None:
                mms = compute_mms_values(instance, mode, epsilon, guards)
            else:
                mms = [parse_rational(v) for v in mms_values]
        with query_section("alloc"):
            if instance.has_cake:
                cake_values = [evaluate(instance, i, WHOLE_CAKE) for i in range(n)]
            else:
                cake_values = [ZERO] * n
            alpha = alpha_ratio(n, cake_values, mms)
            standin = homogeneous_standin(instance, cake_values)
            hat = mixed_mms_homogeneous(standin, mms, alpha, trace)
            weights = None
            if instance.has_cake:
                weights = [
                    evaluate(standin, i, hat[i].cake) / cake_values[i] if cake_values[i] > 0 else ZERO
                    for i in range(n)
                ]
                weights[-1] += ONE - sum(weights, ZERO)
        with query_section("wpr"):
            if instance.has_cake:
                pieces = wpr_alloc(instance, WeightProfile(tuple(weights)))
            else:
                pieces = [EMPTY_PIECE] * n
        allocation = Allocation(tuple(Bundle(hat[i].goods, pieces[i]) for i in range(n)))
        with query_section("report"):
            values = agent_values(instance, allocation)
    return AllocationReport(
        allocation=allocation,
        alpha=alpha,
        mms_values=mms,
        values=values,
        mode=mode,
        epsilon=epsilon if mode == APPROXIMATE else None,
        weights=weights,
        queries=counter.by_section(),
    )


# ---------------------------------------------------------------------------
# boosting with an indivisible-goods algorithm
# ---------------------------------------------------------------------------


class IndivisibleAllocator(Protocol):
    """Plug-in: a beta-MMS algorithm for indivisible goods.

    Called with the agent-by-good utility matrix and n; returns one set of
    good indices per agent.
    """

    beta: Fraction

    def __call__(self, utilities: Sequence[Sequence[Fraction]], n: int) -> Sequence[Sequence[int]]: ...


class HalfMMSPlugin:
    """Default plug-in: bag filling with no cake at alpha = 1/2."""

    beta = Fraction(1, 2)

    def __init__(self, guards: SizeGuards | None = None):
        self.guards = guards

    def __call__(self, utilities, n):
        inst = Instance.create(utilities)
        mms = [indivisible_maxmin(inst.utilities[i], n, Fraction(0), self.guards)[0] for i in range(n)]
        alloc = mixed_mms_homogeneous(inst, mms, self.beta)
        return [sorted(b.goods) for b in alloc]


class FunctionPlugin:
    """Wrap a plain function as a plug-in with a declared guarantee."""

    def __init__(self, fn: Callable[[Sequence[Sequence[Fraction]], int], Sequence[Sequence[int]]], beta: RationalLike):
        self.fn = fn
        self.beta = parse_rational(beta, "beta")

    def __call__(self, utilities, n):
        return self.fn(utilities, n)


def boost(
    instance: Instance,
    epsilon: RationalLike,
    plugin: IndivisibleAllocator | None = None,
    guards: SizeGuards | None = None,
) -> AllocationReport:
    """(1 - eps) max{alpha', beta}-MMS allocation using a beta-MMS plug-in when it is stronger.

    When alpha' >= beta the mixed pipeline runs in approximate mode.
    Otherwise the cake is cut into intervals worth at most
    eps * u_i(C) / (2n) to every agent and the plug-in allocates the
    resulting indivisible instance; its output is checked against beta times
    the exact MMS of that instance before being accepted.
    """
    plugin = plugin or HalfMMSPlugin(guards)
    epsilon = parse_rational(epsilon, "epsilon")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    beta = parse_rational(plugin.beta, "beta")
    if not 0 < beta <= 1:
        raise DomainError("plug-in beta must lie in (0, 1]")
    n = instance.n
    mms_approx = compute_mms_values(instance, APPROXIMATE, epsilon, guards)
    cake_values = [instance.cake_value(i) for i in range(n)]
    alpha_p = alpha_ratio(n, cake_values, mms_approx)
    if alpha_p >= beta:
        report = mixed_mms(instance, epsilon, APPROXIMATE, mms_values=mms_approx, guards=guards)
        report.branch = "mixed"
        return report

    with count_queries() as counter:
        disc, pieces = discretize_instance(instance, epsilon)
        partition = [set(b) for b in plugin(disc.utilities, n)]
        covered = sorted(g for b in partition for g in b)
        if len(partition) != n or covered != list(range(disc.m)):
            raise PluginError("plug-in output is not a partition of the goods")
        disc_mms = [exact_mms(disc, i, n, guards).floor for i in range(n)]
        disc_values = [disc.goods_value(i, partition[i]) for i in range(n)]
        failing = [i for i in range(n) if disc_values[i] < beta * disc_mms[i]]
        if failing:
            raise PluginError(f"plug-in output misses beta = {beta} for agents {failing}")
        m = instance.m
        bundles = []
        for b in partition:
            cake = CakePiece.of(iv for g in b if g >= m for iv in pieces[g - m].intervals)
            bundles.append(Bundle(frozenset(g for g in b if g < m), cake if instance.has_cake else EMPTY_PIECE))
        allocation = Allocation(tuple(bundles))
        values = agent_values(instance, allocation)
    return AllocationReport(
        allocation=allocation,
        alpha=beta,
        mms_values=disc_mms,
        values=values,
        mode=APPROXIMATE,
        epsilon=epsilon,
        queries=counter.by_section(),
        branch="indivisible",
    )
