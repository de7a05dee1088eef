"""Dimension function, scaling modulus and the MRA test for step-profile wavelets.

``D(xi) = sum_{j>=1} sum_k |psi_hat(2^j (xi + 2k pi))|^2`` is computed exactly
on ``[-pi, pi)``. A wavelet comes from an MRA exactly when ``D == 1`` a.e.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exact_scalars import RationalPi, fraction_str
from .frequency_sets import sn_geometry
from .profiles import StepProfile, lattice_sum, one_sided_dyadic_sum, periodize, sum_pieces
from .wavelet_builder import FrequencyWavelet, in_sn

__all__ = [
    "DimensionProfile",
    "DyadicLadder",
    "dyadic_ladder",
    "dimension_function",
    "dimension_split",
    "closed_form_dn",
    "scaling_modulus_sq",
    "MraVerdict",
    "mra_verdict",
    "write_csv",
]

WINDOW = (Fraction(-1), Fraction(1))


@dataclass(frozen=True)
class DimensionProfile:
    """``D`` on ``[-pi, pi)``; extend 2pi-periodically."""

    profile: StepProfile

    def cells(self) -> list:
        return self.profile.cells(*WINDOW)

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        return self.profile((x + 1) % 2 - 1)

    @property
    def values_attained(self) -> frozenset[Fraction]:
        return frozenset(v for _, _, v in self.cells())

    @property
    def max_value(self) -> Fraction:
        return max(self.values_attained)

    @property
    def is_mra(self) -> bool:
        return self.values_attained == {1}

    @property
    def is_integer_valued(self) -> bool:
        return all(v.denominator == 1 for v in self.values_attained)

    def is_even(self) -> bool:
        return self.profile == self.profile.reflect()

    def integrate(self) -> Fraction:
        """``int_{-pi}^{pi} D`` in units of pi."""
        return self.profile.integrate()

    def to_json(self) -> dict:
        data = self.profile.to_json()
        data["max"] = _as_int_or_str(self.max_value)
        data["attained"] = [_as_int_or_str(v) for v in sorted(self.values_attained)]
        data["is_mra"] = self.is_mra
        return data


def _as_int_or_str(v: Fraction):
    return v.numerator if v.denominator == 1 else fraction_str(v)


class DyadicLadder(NamedTuple):
    """``p_l = 2^l a_n`` and ``q_l = 2^(l-1) e_n``."""

    n: int
    l: int
    p_l: RationalPi
    q_l: RationalPi


def dyadic_ladder(n: int, l: int) -> DyadicLadder:
    geom = sn_geometry(n)
    return DyadicLadder(n, l, geom.a.dilate(l), geom.e.dilate(l - 1))


def dimension_function(w: FrequencyWavelet) -> DimensionProfile:
    """Exact ``D`` on ``[-pi, pi)``; raises ``ValueError`` if the support touches 0."""
    if not isinstance(w, FrequencyWavelet):
        raise TypeError("dimension_function needs an exact-step wavelet")
    return DimensionProfile(lattice_sum(w.mag2, "dimension").profile)


def dimension_split(w: FrequencyWavelet) -> tuple[StepProfile, StepProfile, StepProfile]:
    """``(D^-, D^0, D^+)``: the contributions of ``k < 0``, ``k = 0`` and ``k > 0``.

    Debug output only; the total is what :func:`dimension_function` returns.
    """
    tail = one_sided_dyadic_sum(w.mag2).pieces
    lo, hi = WINDOW
    # xi + 2k pi with k < 0 lands left of the window, k > 0 to the right
    minus = sum_pieces(periodize(_clip(tail, None, lo), lo))
    zero = sum_pieces(_clip(tail, lo, hi))
    plus = sum_pieces(periodize(_clip(tail, hi, None), lo))
    return minus, zero, plus


def _clip(pieces, lo, hi):
    out = []
    for a, b, v in pieces:
        a = a if lo is None else max(a, lo)
        b = b if hi is None else min(b, hi)
        if a < b:
            out.append((a, b, v))
    return out


def closed_form_dn(n: int) -> DimensionProfile:
    """The common dimension function of every wavelet supported in ``S_n``.

    ``n - 1`` near 0, ``r - 1`` on ``[p_{1-r}, p_{2-r})`` for ``2 <= r <= n-1``,
    0 on ``[a_n, e_n)`` and 1 on ``[e_n, pi)``; even in ``xi``.
    """
    if n < 3:
        raise ValueError("closed-form dimension function needs n >= 3")
    geom = sn_geometry(n)
    a, e = geom.a.coeff, geom.e.coeff
    half = [(Fraction(0), dyadic_ladder(n, 2 - n).p_l.coeff, Fraction(n - 1))]
    for r in range(2, n):
        half.append((dyadic_ladder(n, 1 - r).p_l.coeff, dyadic_ladder(n, 2 - r).p_l.coeff, Fraction(r - 1)))
    half.append((e, Fraction(1), Fraction(1)))
    assert dyadic_ladder(n, 0).p_l.coeff == a
    pieces = half + [(-hi, -lo, v) for lo, hi, v in half]
    return DimensionProfile(StepProfile(pieces))


def scaling_modulus_sq(w: FrequencyWavelet) -> StepProfile:
    """``|phi_hat(xi)|^2 = sum_{j>=1} |psi_hat(2^j xi)|^2``."""
    return one_sided_dyadic_sum(w.mag2)


class MraVerdict(NamedTuple):
    mra: bool
    evidence: tuple[Fraction, Fraction, Fraction] | None

    @property
    def label(self) -> str:
        return "mra" if self.mra else "non-mra"


def mra_verdict(w: FrequencyWavelet) -> MraVerdict:
    """MRA iff ``D == 1``; otherwise the evidence is the rightmost maximal cell of ``[0, pi)`` with ``D != 1``."""
    d = dimension_function(w)
    if d.is_mra:
        return MraVerdict(True, None)
    bad = [c for c in d.profile.cells(0, 1) if c[2] != 1]
    if not bad:
        bad = [c for c in d.cells() if c[2] != 1]
    return MraVerdict(False, bad[-1])


def integer_check(w: FrequencyWavelet, d: DimensionProfile) -> bool:
    """For supports inside ``S_n`` the dimension function must be integer valued."""
    if in_sn(w) and not d.is_integer_valued:
        raise ArithmeticError("non-integer dimension function for a wavelet supported in S_n")
    return d.is_integer_valued


def write_csv(d: DimensionProfile, path) -> None:
    """Rows ``lo,hi,value`` with breakpoints as decimal multiples of pi (17 significant digits).

    A cell straddling 0 is split there, so each half-line can be plotted on its own.
    """
    rows = []
    for lo, hi, v in d.cells():
        if lo < 0 < hi:
            rows += [(lo, Fraction(0), v), (Fraction(0), hi, v)]
        else:
            rows.append((lo, hi, v))
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["lo", "hi", "value"])
        for lo, hi, v in rows:
            out.writerow([f"{float(lo):.17g}", f"{float(hi):.17g}", f"{float(v):.17g}"])
