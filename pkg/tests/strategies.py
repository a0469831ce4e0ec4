from fractions import Fraction

from hypothesis import strategies as st

from mixedmms import CakeDensity, DensitySegment, Instance

small = st.fractions(min_value=0, max_value=4, max_denominator=6)
unit = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def densities(draw, max_segments=4):
    cuts = sorted(set(draw(st.lists(unit.filter(lambda x: 0 < x < 1), max_size=max_segments - 1))))
    bounds = [Fraction(0)] + cuts + [Fraction(1)]
    heights = draw(st.lists(small, min_size=len(bounds) - 1, max_size=len(bounds) - 1))
    return CakeDensity(tuple(DensitySegment(a, b, h) for a, b, h in zip(bounds, bounds[1:], heights)))


@st.composite
def instances(draw, agents=(1, 4), goods=(0, 5), cake=None):
    n = draw(st.integers(*agents))
    m = draw(st.integers(*goods))
    utilities = [draw(st.lists(small, min_size=m, max_size=m)) for _ in range(n)]
    with_cake = draw(st.booleans()) if cake is None else cake
    ds = [draw(densities()) for _ in range(n)] if with_cake else None
    return Instance.create(utilities, ds)
