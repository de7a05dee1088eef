import csv
import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from snwave.frequency_sets import sn_geometry
from snwave.profiles import PhaseProfile
from snwave.wavelet_builder import FrequencyWavelet, build_family, random_candidate
from snwave.time_domain import (
    exp_integral,
    gram_entry,
    gram_matrix,
    is_real,
    piece_norms_sq,
    psi_at,
    sample_time,
    write_csv,
)

from conftest import trapezoid_oracle


def test_exp_integral_closed_form_and_series():
    assert exp_integral(0.0, 1.0, 3.0) == pytest.approx(2.0)
    beta, lo, hi = 0.7, -1.2, 2.5
    exact = (np.exp(1j * beta * hi) - np.exp(1j * beta * lo)) / (1j * beta)
    assert abs(exp_integral(beta, lo, hi) - exact) < 1e-14
    # both branches agree with a 40-digit reference on either side of the series cutoff
    for b in (1e-7, 3e-7, 2e-6, 1e-3):
        with mpmath.workdps(40):
            exact = complex((mpmath.expj(mpmath.mpf(b) * mpmath.mpf("0.3")) - 1) / (1j * mpmath.mpf(b)))
        assert abs(exp_integral(b, 0.0, 0.3) - exact) < 1e-15


def test_value_at_zero():
    assert psi_at(build_family("shannon"), [0.0])[0] == pytest.approx(1.0)
    for w in (build_family("psi-sixone", 3), build_family("w-sixtwo", 4)):
        expected = sum(
            math.sqrt(m2) * complex(math.cos(math.pi * t), math.sin(math.pi * t)) * float(hi - lo) * math.pi
            for lo, hi, m2, t in w.cells
        ) / (2 * math.pi)
        assert abs(psi_at(w, [0.0])[0] - expected) < 1e-14


def test_samples_match_quadrature_oracle():
    rng = np.random.default_rng(11)
    xs = rng.uniform(-30, 30, 100)
    for w in (build_family("gamma", 3), build_family("psi-sixone", 3)):
        err = np.max(np.abs(psi_at(w, xs) - trapezoid_oracle(w, xs)))
        assert err < 1e-6


def test_sample_time_grid_and_reality():
    s = sample_time(build_family("shannon"), -10, 10, 201)
    assert s.real and len(s.xs) == 201 and np.all(s.values.imag == 0)
    assert not sample_time(build_family("gamma", 3), -1, 1, 5).real
    with pytest.raises(ValueError):
        sample_time(build_family("gamma", 3), 0, 1, 1)


def test_is_real():
    assert is_real(build_family("shannon"))
    assert not is_real(build_family("gamma", 3))
    sh = build_family("shannon")
    odd = PhaseProfile([(1, 2, F(1, 2)), (-2, -1, F(3, 2))])
    assert is_real(FrequencyWavelet(sh.mag2, odd))
    assert not is_real(FrequencyWavelet(sh.mag2, PhaseProfile([(1, 2, F(1, 2))])))
    s = sample_time(FrequencyWavelet(sh.mag2, odd), -5, 5, 11)
    assert s.real and abs(s.values[5]) < 1e-15


def test_gamma3_decays_like_one_over_x():
    xs = np.linspace(50, 2000, 4000)
    vals = np.abs(psi_at(build_family("gamma", 3), xs))
    assert np.max(vals * xs) < 2.0


def test_plancherel():
    for name in ("gamma", "psi-sixone", "w-sixtwo", "msf-a"):
        assert abs(piece_norms_sq(build_family(name, 3)).sum() - 1) < 1e-12


def test_gram_entry_examples():
    g3 = build_family("gamma", 3)
    assert abs(gram_entry(g3, 0, 0, 0, 0) - 1) < 1e-10
    assert abs(gram_entry(g3, 0, 0, 0, 1)) < 1e-10
    assert abs(gram_entry(build_family("psi-sixone", 3), 1, 0, 0, 0)) < 1e-10
    with pytest.raises(ValueError):
        gram_entry(g3, 31, 0, 0, 0)


@pytest.mark.parametrize("name", ["gamma", "psi-sixone", "w-sixtwo"])
def test_gram_identity(name):
    G = gram_matrix(build_family(name, 3), range(-2, 3), range(-8, 9))
    assert G.shape == (85, 85)
    assert np.max(np.abs(G - np.eye(85))) < 1e-8


def test_gram_detects_broken_candidates():
    g = sn_geometry(3)
    for kind in ("broken-iii", "broken-v"):
        G = gram_matrix(random_candidate(g, 0, kind), range(-2, 3), range(-8, 9))
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) > 1e-3


def test_gram_matrix_rectangular_blocks_match_entries():
    w = build_family("w-sixtwo", 3)
    G = gram_matrix(w, [0, 1], [-1, 2], [-1], [0, 3])
    assert G.shape == (4, 2)
    for r, (j, k) in enumerate([(0, -1), (0, 2), (1, -1), (1, 2)]):
        for c, (j2, k2) in enumerate([(-1, 0), (-1, 3)]):
            assert abs(G[r, c] - gram_entry(w, j, k, j2, k2)) < 1e-15


def test_csv_export(tmp_path):
    s = sample_time(build_family("gamma", 3), -1, 1, 3)
    path = tmp_path / "t.csv"
    write_csv(s, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "re", "im"] and len(rows) == 4
    assert float(rows[2][0]) == 0.0
