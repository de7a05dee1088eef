import random
from fractions import Fraction as F
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snwave.frequency_sets import lemma_rows, shannon_set, sn_geometry, wn_set
from snwave.profiles import (
    PhaseProfile,
    StepProfile,
    common_refinement,
    lattice_sum,
    one_sided_dyadic_sum,
    periodize,
)

from conftest import random_points, rho_at, translates_at

coef = st.fractions(min_value=-12, max_value=12, max_denominator=48)
value = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def step_profiles(draw, away_from_zero=False, max_pieces=5):
    cuts = sorted(set(draw(st.lists(coef, min_size=2, max_size=2 * max_pieces))))
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        if away_from_zero and lo <= 0 <= hi:
            continue
        pieces.append((lo, hi, draw(value)))
    return StepProfile(pieces)


def test_construction_rules():
    p = StepProfile([(0, 1, F(1, 2)), (1, 2, F(1, 2)), (3, 3, 1), (4, 5, 0)])
    assert p.pieces == ((0, 2, F(1, 2)),)
    with pytest.raises(ValueError):
        StepProfile([(0, 2, 1), (1, 3, 1)])
    assert PhaseProfile([(0, 1, 3)]).pieces == ((0, 1, 1),)
    assert PhaseProfile([(0, 1, 2)]).pieces == ()


def test_pullback_examples():
    g = sn_geometry(3)
    rows = lemma_rows(g)
    cd = StepProfile.indicator(rows["[c,d)"])
    assert cd.pullback_dilate(2) == StepProfile.indicator(rows["[e,b)"])
    p = StepProfile([(F(1, 3), F(5, 7), F(2, 9))])
    assert p.pullback_translate(0) == p
    assert p.pullback_dilate(3).pullback_dilate(-3) == p
    assert p.pullback("translate", 1) == p.pullback_shift(2)
    with pytest.raises(ValueError):
        p.pullback("rotate", 1)


@given(step_profiles(), st.integers(-8, 8), coef)
def test_pullbacks_pointwise(p, j, x):
    assert p.pullback_dilate(j)(x) == p(x * F(2) ** j)
    assert p.pullback_translate(j)(x) == p(x + 2 * j)
    assert p.reflect()(x) == p(-x) or any(x == -hi for _, hi, _ in p.pieces) or any(x == -lo for lo, _, _ in p.pieces)


@given(step_profiles(), st.integers(-8, 8))
def test_pullback_jacobian(p, j):
    assert p.pullback_dilate(j).integrate() == F(2) ** -j * p.integrate()
    assert p.pullback_translate(j).integrate() == p.integrate()


@given(step_profiles(), step_profiles(), coef)
def test_pointwise_algebra(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p - q)(x) == p(x) - q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert p.scale(3)(x) == 3 * p(x)


def test_common_refinement_examples():
    a = StepProfile([(0, 2, 1)])
    b = StepProfile([(1, 3, 1)])
    cells = common_refinement([a, b])
    assert [(lo, hi) for lo, hi, _ in cells] == [(0, 1), (1, 2), (2, 3)]
    assert [v for _, _, v in cells] == [(1, 0), (1, 1), (0, 1)]

    rows = [StepProfile.indicator(s) for s in lemma_rows(sn_geometry(3)).values()]
    cells = common_refinement(rows)
    assert len(cells) == 6
    for (lo1, hi1, _), (lo2, hi2, _) in zip(cells, cells[1:]):
        assert hi1 <= lo2

    p = StepProfile([(0, 1, F(1, 2)), (2, 3, 1)])
    assert [(lo, hi) for lo, hi, _ in common_refinement([p])] == [(0, 1), (2, 3)]
    with pytest.raises(ValueError):
        common_refinement([])


@given(st.lists(step_profiles(), min_size=1, max_size=4))
def test_common_refinement_sweep_oracle(ps):
    cells = common_refinement(ps)
    breakpoints = {x for p in ps for lo, hi, _ in p.pieces for x in (lo, hi)}
    assert len(cells) <= max(len(breakpoints), 1)
    for lo, hi, vec in cells:
        mid = (lo + hi) / 2
        assert vec == tuple(p(mid) for p in ps)
        assert lo in breakpoints and hi in breakpoints


def test_lattice_sum_examples():
    shannon = StepProfile.indicator(shannon_set())
    assert lattice_sum(shannon, "dyadic").is_constant(1)
    gamma3 = StepProfile.indicator(wn_set(3))
    assert lattice_sum(gamma3, "translations").is_constant(1)
    half = StepProfile([(1, 2, 1)])
    per = lattice_sum(half, "translations")
    assert per.cells() == [(0, 1, 0), (1, 2, 1)]
    assert not per.is_constant(1)
    with pytest.raises(ValueError):
        lattice_sum(StepProfile([(-1, 1, 1)]), "dyadic")
    with pytest.raises(ValueError):
        lattice_sum(half, "hexagonal")


@settings(max_examples=40, deadline=None)
@given(step_profiles(away_from_zero=True))
def test_dyadic_lattice_sum_matches_pointwise_oracle(p):
    rho = lattice_sum(p, "dyadic")
    for x in random_points(random.Random(1), 10):
        if x == 0:
            continue
        # evaluate the representative-band profile at the band image of x
        alpha = rho.windows[1][0]
        y = abs(x)
        while y >= 2 * alpha:
            y /= 2
        while y < alpha:
            y *= 2
        y = y if x > 0 else -y
        assert rho.profile(y) == rho_at(SimpleNamespace(mag2=p), x, range(-40, 41))


@settings(max_examples=40, deadline=None)
@given(step_profiles(), st.integers(-5, 5))
def test_translation_sum_invariant_and_pointwise(p, m):
    per = lattice_sum(p, "translations")
    assert lattice_sum(p.pullback_translate(m), "translations").profile == per.profile
    for x in random_points(random.Random(2), 10, 0, 2):
        assert per.profile(x) == translates_at(SimpleNamespace(mag2=p), x, range(-30, 31))


def test_periodize_window():
    cells = periodize([(F(-3), F(1, 2), 1)])
    assert sorted(cells) == [(0, F(1, 2), 1), (0, 2, 1), (1, 2, 1)]


def test_one_sided_sum_telescopes():
    p = StepProfile.indicator(wn_set(3))
    phi = one_sided_dyadic_sum(p)
    for x in random_points(random.Random(3), 50):
        assert phi(x) - phi(2 * x) == p(2 * x)


def test_one_sided_sum_rejects_nonconstant_tail():
    with pytest.raises(ValueError):
        one_sided_dyadic_sum(StepProfile([(1, F(3, 2), 1)]))


def test_profile_json_roundtrip():
    p = StepProfile([(F(-8, 7), F(-4, 7), F(1, 2))])
    data = p.to_json()
    assert data == {"pieces": [{"lo": "-8/7", "hi": "-4/7", "value": "1/2"}]}
    assert StepProfile.from_json(data) == p
    ph = PhaseProfile([(0, 1, 1)])
    assert ph.to_json() == {"pieces": [{"lo": "0", "hi": "1", "turns": "1"}]}
    assert PhaseProfile.from_json(ph.to_json()) == ph


def test_cells_include_zero_gaps():
    p = StepProfile([(1, 2, 1)])
    assert p.cells(0, 3) == [(0, 1, 0), (1, 2, 1), (2, 3, 0)]
