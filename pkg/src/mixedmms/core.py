"""Exact data model for mixed-goods instances and the Robertson-Webb query engine.

All quantities are :class:`fractions.Fraction`; floats are rejected at every
entry point.  Cake densities are piecewise constant with rational breakpoints,
which makes both query types exactly computable:

* ``evaluate`` integrates an agent's density over a piece of cake;
* ``cut`` returns the leftmost point where the integral from ``x`` reaches a
  target value.

Queries issued through :func:`evaluate` and :func:`cut` are tallied by the
innermost active :func:`count_queries` context, bucketed by the label of the
innermost :func:`query_section`.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DomainError, InsufficientValueError, ValidationError

RationalLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value: RationalLike, where: str = "value") -> Fraction:
    """Parse an exact rational from an int, Fraction or ``"p/q"`` string.

    Floats, booleans and decimal strings are rejected.
    """
    if isinstance(value, bool):
        raise DomainError(f"{where}: booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if "." in s or "e" in s.lower():
            raise DomainError(f"{where}: decimal notation {value!r} is not accepted, use p/q")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{where}: cannot parse rational {value!r}") from exc
    raise DomainError(f"{where}: expected int or 'p/q' string, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# query accounting
# ---------------------------------------------------------------------------


@dataclass
class QueryCounter:
    """Tally of Robertson-Webb queries keyed by ``(section, kind)``."""

    counts: Counter = field(default_factory=Counter)

    def record(self, kind: str, section: str) -> None:
        self.counts[(section, kind)] += 1

    def total(self, section: str | None = None, kind: str | None = None) -> int:
        return sum(
            c
            for (s, k), c in self.counts.items()
            if (section is None or s == section) and (kind is None or k == kind)
        )

    def by_section(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for (s, k), c in sorted(self.counts.items()):
            out.setdefault(s, {})[k] = c
        return out


_active_counter: ContextVar[QueryCounter | None] = ContextVar("_active_counter", default=None)
_active_section: ContextVar[str] = ContextVar("_active_section", default="main")


@contextmanager
def count_queries() -> Iterator[QueryCounter]:
    """Collect queries issued inside the block; nested blocks also report to the enclosing one."""
    counter = QueryCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)
        parent = _active_counter.get()
        if parent is not None:
            parent.counts.update(counter.counts)


@contextmanager
def query_section(name: str) -> Iterator[None]:
    token = _active_section.set(name)
    try:
        yield
    finally:
        _active_section.reset(token)


def _record(kind: str) -> None:
    counter = _active_counter.get()
    if counter is not None:
        counter.record(kind, _active_section.get())


# ---------------------------------------------------------------------------
# cake geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensitySegment:
    left: Fraction
    right: Fraction
    height: Fraction

    def __post_init__(self):
        if not self.left < self.right:
            raise DomainError(f"density segment [{self.left}, {self.right}] has non-positive length")
        if self.height < 0:
            raise DomainError(f"density segment height {self.height} is negative")

    @property
    def value(self) -> Fraction:
        return (self.right - self.left) * self.height


@dataclass(frozen=True)
class CakeDensity:
    """Piecewise-constant density tiling [0, 1].

    Neighbouring segments of equal height are merged, so a uniform density is
    always a single segment.
    """

    segments: tuple[DensitySegment, ...]

    def __post_init__(self):
        segs = self.segments
        if not segs:
            raise DomainError("density has no segments")
        if segs[0].left != 0 or segs[-1].right != 1:
            raise DomainError("density segments must cover exactly [0, 1]")
        for a, b in zip(segs, segs[1:]):
            if a.right != b.left:
                raise DomainError(f"density segments [{a.left},{a.right}] and [{b.left},{b.right}] do not abut")
        merged: list[DensitySegment] = []
        for s in segs:
            if merged and merged[-1].height == s.height:
                merged[-1] = DensitySegment(merged[-1].left, s.right, s.height)
            else:
                merged.append(s)
        object.__setattr__(self, "segments", tuple(merged))

    @classmethod
    def uniform(cls, total: RationalLike) -> "CakeDensity":
        return cls((DensitySegment(ZERO, ONE, parse_rational(total)),))

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[RationalLike]]) -> "CakeDensity":
        return cls(tuple(DensitySegment(*(parse_rational(v) for v in t)) for t in triples))

    @property
    def total(self) -> Fraction:
        return sum((s.value for s in self.segments), ZERO)

    @property
    def is_uniform(self) -> bool:
        return len(self.segments) == 1

    def scaled(self, factor: Fraction) -> "CakeDensity":
        return CakeDensity(tuple(DensitySegment(s.left, s.right, s.height * factor) for s in self.segments))

    def integral(self, x: Fraction, y: Fraction) -> Fraction:
        """Integral over [x, y] with 0 <= x <= y <= 1 (unchecked)."""
        total = ZERO
        for s in self.segments:
            if s.right <= x:
                continue
            if s.left >= y:
                break
            lo = x if x > s.left else s.left
            hi = y if y < s.right else s.right
            total += (hi - lo) * s.height
        return total

    def invert(self, x: Fraction, beta: Fraction) -> Fraction | None:
        """Leftmost ``y >= x`` with ``integral(x, y) == beta``, or ``None`` if unreachable."""
        if beta == 0:
            return x
        remaining = beta
        for s in self.segments:
            if s.right <= x:
                continue
            lo = x if x > s.left else s.left
            v = (s.right - lo) * s.height
            if v >= remaining:
                # v >= remaining > 0 forces height > 0
                return lo + remaining / s.height
            remaining -= v
        return None


@dataclass(frozen=True)
class CakePiece:
    """Finite union of subintervals in canonical form.

    Intervals are sorted, have positive length, and any two sharing an
    endpoint are merged.  Construct through :meth:`of` to canonicalize.
    """

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, intervals: Iterable[Sequence[RationalLike]]) -> "CakePiece":
        pairs = []
        for iv in intervals:
            a, b = (parse_rational(v, "interval endpoint") for v in iv)
            if a > b:
                raise DomainError(f"interval [{a}, {b}] is reversed")
            if a < b:
                pairs.append((a, b))
        pairs.sort()
        out: list[tuple[Fraction, Fraction]] = []
        for a, b in pairs:
            if out and a < out[-1][1]:
                raise DomainError(f"intervals overlap near [{a}, {b}]")
            if out and a == out[-1][1]:
                out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
        return cls(tuple(out))

    @classmethod
    def interval(cls, a: RationalLike, b: RationalLike) -> "CakePiece":
        return cls.of([(a, b)])

    @property
    def length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), ZERO)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "CakePiece") -> "CakePiece":
        return CakePiece.of(self.intervals + other.intervals)

    def __iter__(self):
        return iter(self.intervals)


EMPTY_PIECE = CakePiece()
WHOLE_CAKE = CakePiece(((ZERO, ONE),))


# ---------------------------------------------------------------------------
# instances and allocations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """n agents with additive utilities over m indivisible goods and a cake [0, 1].

    ``densities is None`` means the instance has no cake at all.
    """

    utilities: tuple[tuple[Fraction, ...], ...]
    densities: tuple[CakeDensity, ...] | None = None
    goods: tuple[str, ...] = ()
    agents: tuple[str, ...] = ()

    def __post_init__(self):
        issues: list[tuple[str, str]] = []
        n = len(self.utilities)
        if n < 1:
            issues.append(("agents", "at least one agent is required"))
        m = len(self.utilities[0]) if n else 0
        for i, row in enumerate(self.utilities):
            if len(row) != m:
                issues.append((f"agents[{i}].utilities", f"expected {m} entries, got {len(row)}"))
            for g, u in enumerate(row):
                if not isinstance(u, Fraction):
                    issues.append((f"agents[{i}].utilities[{g}]", "not an exact rational"))
                elif u < 0:
                    issues.append((f"agents[{i}].utilities[{g}]", f"negative utility {u}"))
        if self.densities is not None and len(self.densities) != n:
            issues.append(("density", f"expected {n} densities, got {len(self.densities)}"))
        goods = self.goods or tuple(f"g{g}" for g in range(m))
        if len(goods) != m:
            issues.append(("goods", f"expected {m} labels, got {len(goods)}"))
        agents = self.agents or tuple(f"agent{i}" for i in range(n))
        if len(agents) != n:
            issues.append(("agents", f"expected {n} names, got {len(agents)}"))
        if issues:
            raise ValidationError(issues)
        object.__setattr__(self, "goods", tuple(goods))
        object.__setattr__(self, "agents", tuple(agents))

    @classmethod
    def create(
        cls,
        utilities: Sequence[Sequence[RationalLike]],
        densities: Sequence[CakeDensity] | None = None,
        goods: Sequence[str] | None = None,
        agents: Sequence[str] | None = None,
    ) -> "Instance":
        """Build from loosely typed data (ints, Fractions, ``"p/q"`` strings)."""
        utils = tuple(
            tuple(parse_rational(u, f"agents[{i}].utilities[{g}]") for g, u in enumerate(row))
            for i, row in enumerate(utilities)
        )
        return cls(
            utils,
            tuple(densities) if densities is not None else None,
            tuple(goods or ()),
            tuple(agents or ()),
        )

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return len(self.goods)

    @property
    def has_cake(self) -> bool:
        return self.densities is not None

    def density(self, agent: int) -> CakeDensity:
        if self.densities is None:
            return _ZERO_DENSITY
        return self.densities[agent]

    def cake_value(self, agent: int) -> Fraction:
        """u_i(C) without issuing a query (bookkeeping use only)."""
        return self.density(agent).total

    def goods_value(self, agent: int, goods: Iterable[int] | None = None) -> Fraction:
        row = self.utilities[agent]
        if goods is None:
            return sum(row, ZERO)
        return sum((row[g] for g in goods), ZERO)

    def is_homogeneous(self) -> bool:
        return self.densities is None or all(d.is_uniform for d in self.densities)

    def without_good(self, good: int) -> "Instance":
        keep = [g for g in range(self.m) if g != good]
        return Instance(
            tuple(tuple(row[g] for g in keep) for row in self.utilities),
            self.densities,
            tuple(self.goods[g] for g in keep),
            self.agents,
        )

    def without_cake(self) -> "Instance":
        return Instance(self.utilities, None, self.goods, self.agents)

    def with_densities(self, densities: Sequence[CakeDensity] | None) -> "Instance":
        return Instance(self.utilities, tuple(densities) if densities is not None else None, self.goods, self.agents)


_ZERO_DENSITY = CakeDensity((DensitySegment(ZERO, ONE, ZERO),))


@dataclass(frozen=True)
class Bundle:
    goods: frozenset[int] = frozenset()
    cake: CakePiece = EMPTY_PIECE


@dataclass(frozen=True)
class Allocation:
    bundles: tuple[Bundle, ...]

    @classmethod
    def from_parts(cls, goods: Sequence[Iterable[int]], cakes: Sequence[CakePiece] | None = None) -> "Allocation":
        cakes = cakes if cakes is not None else [EMPTY_PIECE] * len(goods)
        return cls(tuple(Bundle(frozenset(g), c) for g, c in zip(goods, cakes, strict=True)))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def __getitem__(self, i: int) -> Bundle:
        return self.bundles[i]

    def __iter__(self):
        return iter(self.bundles)


def validate_allocation(instance: Instance, allocation: Allocation) -> None:
    """Raise :class:`ValidationError` unless ``allocation`` fully partitions the resources."""
    issues: list[tuple[str, str]] = []
    if allocation.n != instance.n:
        issues.append(("agents", f"expected {instance.n} bundles, got {allocation.n}"))
    seen: dict[int, int] = {}
    for i, b in enumerate(allocation.bundles):
        for g in b.goods:
            if not 0 <= g < instance.m:
                issues.append((f"agents[{i}].goods", f"good index {g} out of range"))
            elif g in seen:
                issues.append((f"agents[{i}].goods", f"good {g} also held by agent {seen[g]}"))
            else:
                seen[g] = i
    missing = sorted(set(range(instance.m)) - set(seen))
    if missing:
        issues.append(("goods", f"unallocated goods {missing}"))

    pieces = [b.cake for b in allocation.bundles]
    if instance.has_cake or any(not p.is_empty for p in pieces):
        issues.extend(tiling_issues(pieces))
    if issues:
        raise ValidationError(issues)


def tiling_issues(pieces: Iterable[CakePiece]) -> list[tuple[str, str]]:
    """Problems preventing ``pieces`` from tiling [0, 1] (empty list when they do)."""
    issues = []
    pos = ZERO
    for a, b in sorted(iv for p in pieces for iv in p.intervals):
        if a < pos:
            issues.append(("cake", f"interval [{a}, {b}] overlaps another piece"))
        elif a > pos:
            issues.append(("cake", f"gap [{pos}, {a}] is not allocated"))
        pos = max(pos, b)
    if pos != 1:
        issues.append(("cake", f"cake [{pos}, 1] is not allocated"))
    return issues


# ---------------------------------------------------------------------------
# Robertson-Webb queries
# ---------------------------------------------------------------------------


def _check_agent(instance: Instance, agent: int) -> None:
    if not 0 <= agent < instance.n:
        raise DomainError(f"agent index {agent} out of range 0..{instance.n - 1}")


def evaluate(instance: Instance, agent: int, piece: CakePiece | Sequence[RationalLike]) -> Fraction:
    """Eval query: the agent's value for a piece of cake.

    ``piece`` may be a :class:`CakePiece` or a single ``(x, y)`` pair.  One
    query is recorded per interval.
    """
    _check_agent(instance, agent)
    if not isinstance(piece, CakePiece):
        piece = CakePiece.interval(*piece)
    density = instance.density(agent)
    total = ZERO
    for a, b in piece.intervals:
        if a < 0 or b > 1:
            raise DomainError(f"interval [{a}, {b}] is outside [0, 1]")
        _record("eval")
        total += density.integral(a, b)
    return total


def cut(instance: Instance, agent: int, x: RationalLike, beta: RationalLike) -> Fraction:
    """Cut query: leftmost ``y >= x`` with ``evaluate([x, y]) == beta``."""
    _check_agent(instance, agent)
    x = parse_rational(x, "x")
    beta = parse_rational(beta, "beta")
    if not 0 <= x <= 1:
        raise DomainError(f"cut start {x} is outside [0, 1]")
    if beta < 0:
        raise DomainError(f"cut target {beta} is negative")
    _record("cut")
    density = instance.density(agent)
    y = density.invert(x, beta)
    if y is None:
        available = density.integral(x, ONE)
        raise InsufficientValueError(agent, x, beta, beta - available)
    return y


def bundle_value(instance: Instance, agent: int, goods: Iterable[int], cake: CakePiece = EMPTY_PIECE) -> Fraction:
    """u_i(goods) + u_i(cake)."""
    _check_agent(instance, agent)
    row = instance.utilities[agent]
    total = ZERO
    for g in goods:
        if not 0 <= g < instance.m:
            raise DomainError(f"good index {g} out of range 0..{instance.m - 1}")
        total += row[g]
    if cake.intervals:
        total += evaluate(instance, agent, cake)
    return total


def agent_values(instance: Instance, allocation: Allocation) -> list[Fraction]:
    """Each agent's value for her own bundle."""
    return [bundle_value(instance, i, b.goods, b.cake) for i, b in enumerate(allocation.bundles)]


# ---------------------------------------------------------------------------
# raw-data validation
# ---------------------------------------------------------------------------


def _parse_density(raw, where: str, issues: list[tuple[str, str]]) -> CakeDensity | None:
    segs: list[tuple[Fraction, Fraction, Fraction]] = []
    for k, seg in enumerate(raw):
        loc = f"{where}[{k}]"
        try:
            if isinstance(seg, Mapping):
                triple = (seg["left"], seg["right"], seg["height"])
            else:
                triple = tuple(seg)
            l, r, h = (parse_rational(v, loc) for v in triple)
        except (KeyError, TypeError, ValueError) as exc:
            issues.append((loc, f"malformed segment ({exc})"))
            return None
        if not l < r:
            issues.append((loc, f"segment [{l}, {r}] has non-positive length"))
        if h < 0:
            issues.append((loc, f"negative height {h}"))
        segs.append((l, r, h))
    if not segs:
        issues.append((where, "empty density"))
        return None
    segs.sort(key=lambda s: s[0])
    if segs[0][0] != 0:
        issues.append((where, f"gap [0, {segs[0][0]}]"))
    if segs[-1][1] != 1:
        issues.append((where, f"gap [{segs[-1][1]}, 1]"))
    for (l1, r1, _), (l2, r2, _) in zip(segs, segs[1:]):
        if l2 > r1:
            issues.append((where, f"gap [{r1}, {l2}]"))
        elif l2 < r1:
            issues.append((where, f"overlap between [{l1}, {r1}] and [{l2}, {r2}]"))
    if any(loc.startswith(where) for loc, _ in issues):
        return None
    return CakeDensity(tuple(DensitySegment(l, r, h) for l, r, h in segs))


def concatenate_cakes(densities: Sequence[CakeDensity]) -> CakeDensity:
    """Lay ``l`` cakes side by side on [0, 1]; cake k occupies [k/l, (k+1)/l]."""
    ell = len(densities)
    segs = []
    for k, d in enumerate(densities):
        for s in d.segments:
            segs.append(DensitySegment((k + s.left) / ell, (k + s.right) / ell, s.height * ell))
    return CakeDensity(tuple(segs))


def validate_instance(raw: Mapping) -> Instance:
    """Parse and validate JSON-shaped instance data.

    Every violated invariant is collected and reported together in one
    :class:`ValidationError`.  Agents may carry either ``density`` (one cake)
    or ``cakes`` (several cakes, concatenated onto [0, 1]).
    """
    issues: list[tuple[str, str]] = []
    agents_raw = raw.get("agents") if isinstance(raw, Mapping) else None
    if not isinstance(agents_raw, list) or not agents_raw:
        raise ValidationError([("agents", "expected a non-empty list of agents")])
    goods = raw.get("goods")
    utilities: list[list[Fraction]] = []
    names: list[str] = []
    densities: list[CakeDensity | None] = []
    with_cake = []
    for i, a in enumerate(agents_raw):
        loc = f"agents[{i}]"
        if not isinstance(a, Mapping):
            issues.append((loc, "expected an object"))
            continue
        names.append(str(a.get("name", f"agent{i}")))
        row = []
        for g, u in enumerate(a.get("utilities", [])):
            try:
                q = parse_rational(u, f"{loc}.utilities[{g}]")
            except DomainError as exc:
                issues.append((f"{loc}.utilities[{g}]", str(exc)))
                continue
            if q < 0:
                issues.append((f"{loc}.utilities[{g}]", f"negative utility {q}"))
            row.append(q)
        utilities.append(row)
        if "density" in a and a["density"] is not None:
            with_cake.append(True)
            densities.append(_parse_density(a["density"], f"{loc}.density", issues))
        elif "cakes" in a and a["cakes"] is not None:
            with_cake.append(True)
            parts = [_parse_density(d, f"{loc}.cakes[{k}]", issues) for k, d in enumerate(a["cakes"])]
            densities.append(concatenate_cakes(parts) if parts and all(parts) else None)
        else:
            with_cake.append(False)
            densities.append(None)
    if goods is None:
        goods = [f"g{g}" for g in range(len(utilities[0]) if utilities else 0)]
    if not isinstance(goods, list):
        issues.append(("goods", "expected a list of labels"))
        goods = []
    m = len(goods)
    for i, row in enumerate(utilities):
        if len(row) != m and not any(loc.startswith(f"agents[{i}].utilities") for loc, _ in issues):
            issues.append((f"agents[{i}].utilities", f"expected {m} entries, got {len(row)}"))
    if any(with_cake) and not all(with_cake):
        issues.append(("density", "either every agent or no agent must have a cake density"))
    if issues:
        raise ValidationError(issues)
    return Instance(
        tuple(tuple(r) for r in utilities),
        tuple(densities) if any(with_cake) else None,  # type: ignore[arg-type]
        tuple(str(g) for g in goods),
        tuple(names),
    )
