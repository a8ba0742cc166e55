from fractions import Fraction
from itertools import combinations

from hypothesis import assume, given, strategies as st

from causalspaces.measure import (
    Measure,
    condition_on_event,
    delta,
    independent,
    marginal,
    mutually_abs_continuous_on,
)
from causalspaces.scores import F1, F2, scale_f2
from causalspaces.space import Coordinate, ProductSpace, coordinate_subalgebra, generated_algebra

F = Fraction

SPACE = ProductSpace(
    (
        Coordinate("a", ("0", "1")),
        Coordinate("b", ("0", "1")),
        Coordinate("c", ("0", "1", "2")),
    )
)
OUTCOMES = list(SPACE.outcomes)


@st.composite
def measures(draw):
    raw = draw(st.lists(st.integers(0, 12), min_size=len(OUTCOMES), max_size=len(OUTCOMES)))
    assume(any(raw))
    total = sum(raw)
    return Measure(SPACE, {o: F(w, total) for o, w in zip(OUTCOMES, raw) if w})


events = st.sets(st.sampled_from(OUTCOMES)).map(frozenset)
subsets = st.sets(st.sampled_from(SPACE.ids)).map(frozenset)


@given(measures(), events, events)
def test_conditioning_composes_on_nested_events(p, g, e):
    inner = g & e
    once = condition_on_event(p, g)
    direct = condition_on_event(p, inner)
    if once is None:
        assert direct is None
        return
    twice = condition_on_event(once, inner)
    if direct is None:
        assert twice is None
    else:
        assert twice == direct


@given(measures(), events, subsets)
def test_law_of_total_probability(p, a, coords):
    part = coordinate_subalgebra(SPACE, coords)
    total = F(0)
    for block in part.blocks:
        pb = p(block)
        if pb:
            total += pb * condition_on_event(p, block)(a)
    assert total == p(a)


@given(measures(), subsets, subsets)
def test_marginal_composes(p, s1, s2):
    outer = s1 | s2
    assert marginal(marginal(p, outer), s1) == marginal(p, s1)


@given(measures(), events, events, st.sampled_from([set(), {"a"}, {"b"}, {"a", "b"}]))
def test_independence_block_check_equals_union_check(p, a, gen, coords):
    # partitions with up to four blocks: a generator split refined by coordinates
    part = generated_algebra(SPACE, [gen] + [SPACE.where(**{c: "0"}) for c in sorted(coords)])
    assume(len(part.blocks) <= 4)
    blockwise = independent(p, a, part)
    unionwise = True
    for r in range(len(part.blocks) + 1):
        for combo in combinations(part.blocks, r):
            union = frozenset().union(*combo) if combo else frozenset()
            if p(a & union) != p(a) * p(union):
                unionwise = False
    assert blockwise == unionwise


@given(measures(), measures(), subsets)
def test_mutual_abs_continuity_is_symmetric_and_reflexive(p, q, coords):
    part = coordinate_subalgebra(SPACE, coords)
    assert mutually_abs_continuous_on(p, p, part)
    assert mutually_abs_continuous_on(p, q, part) == mutually_abs_continuous_on(q, p, part)


@given(st.sampled_from(OUTCOMES), events)
def test_delta_conditioning_identity(omega, g):
    d = delta(SPACE, omega)
    conditioned = condition_on_event(d, g | {omega})
    assert conditioned == d
    assert d(g) == (1 if omega in g else 0)


@given(st.fractions(min_value=0, max_value=1, max_denominator=64))
def test_scale_symmetry(x):
    assert F1(x) == -F1(1 - x)
    assert abs(scale_f2(float(x)) + scale_f2(float(1 - x))) < 1e-12


@given(
    st.fractions(min_value=0, max_value=1, max_denominator=64),
    st.fractions(min_value=0, max_value=1, max_denominator=64),
)
def test_scale_scores_antisymmetric_and_sign_preserving(a, b):
    for scale in (F1, F2):
        forward = scale(a) - scale(b)
        assert forward == -(scale(b) - scale(a))
    raw = a - b
    s1 = F1(a) - F1(b)
    assert (s1 > 0) == (raw > 0) and (s1 < 0) == (raw < 0)
    s2 = scale_f2(float(a)) - scale_f2(float(b))
    if raw > 0:
        assert s2 > 0
    elif raw < 0:
        assert s2 < 0
