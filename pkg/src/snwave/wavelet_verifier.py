"""Decide whether a step-profile candidate is an orthonormal wavelet.

Exact mode checks ``||psi|| = 1`` and the four lattice identities

1. ``sum_j |psi_hat(2^j xi)|^2 = 1``
2. ``sum_{j>=0} psi_hat(2^j xi) conj(psi_hat(2^j (xi + 2m pi))) = 0`` for odd ``m``
3. ``sum_k |psi_hat(xi + 2k pi)|^2 = 1``
4. ``sum_k psi_hat(xi + 2k pi) conj(psi_hat(2^j (xi + 2k pi))) = 0`` for ``j >= 1``

cell by cell in exact arithmetic. All index ranges come from the support
endpoints, so each "infinite" sum is enumerated completely.

A sampled (numeric) variant handles smooth bells.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import mpmath
import numpy as np

from .exact_scalars import fraction_str, floor_log2, squarefree_split
from .frequency_sets import IntervalSet, SnGeometry, sn_geometry
from .profiles import LatticeSum, StepProfile, lattice_sum, overlay, periodize
from .wavelet_builder import FrequencyWavelet, extend_bell, in_sn, validate_theta

log = logging.getLogger(__name__)

__all__ = [
    "VerificationReport",
    "Thm32Conditions",
    "TermDecision",
    "decide_zero",
    "check_norm",
    "check_eq1",
    "check_eq2",
    "check_eq3",
    "check_eq4",
    "tm_cells",
    "check_thm32",
    "check_even_bell",
    "EvenBell",
    "verify",
    "SampledWavelet",
    "sample_exact",
    "sample_extended_bell",
    "numeric_verify",
]

# ---------------------------------------------------------------------------
# deciding whether a finite sum of sqrt(q) * exp(i pi t) vanishes

_QUARTER = {
    Fraction(0): (1, 0),
    Fraction(1, 2): (0, 1),
    Fraction(1): (-1, 0),
    Fraction(3, 2): (0, -1),
}

_ZERO_THRESHOLD = mpmath.mpf(10) ** -50


class TermDecision(NamedTuple):
    zero: bool
    numeric_assisted: bool
    residual: complex


def _float_sum(terms) -> complex:
    return sum((math.sqrt(q) * complex(math.cos(math.pi * t), math.sin(math.pi * t)) for q, t in terms), 0j)


def decide_zero(terms: Sequence[tuple[Fraction, Fraction]]) -> TermDecision:
    """Decide ``sum sqrt(q_i) exp(i pi t_i) == 0`` for rational ``q_i >= 0``, ``t_i``.

    Quarter-turn phases are summed exactly as Gaussian rationals grouped by
    squarefree kernel (square roots of distinct squarefree integers are
    linearly independent over Q). Otherwise terms are matched into antipodal
    pairs. If neither settles it, the sum is evaluated at 200 bits and
    compared with 1e-50; the decision is then flagged as numeric-assisted.
    """
    terms = [(q, t % 2) for q, t in terms if q]
    if not terms:
        return TermDecision(True, False, 0j)

    if all(t in _QUARTER for _, t in terms):
        groups: dict[int, list[Fraction]] = {}
        exact = True
        for q, t in terms:
            split = squarefree_split(q)
            if split is None:
                exact = False
                break
            r, s = split
            re, im = _QUARTER[t]
            g = groups.setdefault(s, [Fraction(0), Fraction(0)])
            g[0] += r * re
            g[1] += r * im
        if exact:
            zero = all(g[0] == 0 and g[1] == 0 for g in groups.values())
            return TermDecision(zero, False, 0j if zero else _float_sum(terms))

    counts = Counter(terms)
    for (q, t) in list(counts):
        anti = (q, (t + 1) % 2)
        k = min(counts[(q, t)], counts.get(anti, 0))
        if k:
            counts[(q, t)] -= k
            counts[anti] -= k
    if not +counts:
        return TermDecision(True, False, 0j)

    with mpmath.workprec(200):
        total = mpmath.mpc(0)
        for q, t in terms:
            total += mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator) * mpmath.expjpi(
                mpmath.mpf(t.numerator) / t.denominator
            )
        zero = abs(total) < _ZERO_THRESHOLD
    return TermDecision(bool(zero), True, complex(total))


# ---------------------------------------------------------------------------
# report


class Thm32Conditions(NamedTuple):
    i: bool
    ii: bool
    iii: bool
    iv: bool
    v: bool

    def all(self) -> bool:
        return all(self)


@dataclass
class VerificationReport:
    norm_sq: Fraction | float
    eq1_ok: bool
    eq2_ok: bool
    eq3_ok: bool
    eq4_ok: bool
    eq1_profile: LatticeSum | None = None
    eq2_witnesses: list = field(default_factory=list)
    eq3_profile: LatticeSum | None = None
    eq4_witnesses: list = field(default_factory=list)
    thm32_conditions: Thm32Conditions | None = None
    mode: str = "exact"
    tolerance: float | None = None
    numeric_assisted: bool = False
    residuals: dict = field(default_factory=dict)

    @property
    def norm_ok(self) -> bool:
        if self.mode == "exact":
            return self.norm_sq == 1
        return abs(self.norm_sq - 1) <= self.tolerance

    @property
    def ok(self) -> bool:
        return self.norm_ok and self.eq1_ok and self.eq2_ok and self.eq3_ok and self.eq4_ok

    @property
    def eq1_failures(self) -> list:
        if self.eq1_profile is None:
            return []
        return [c for c in self.eq1_profile.cells() if c[2] != 1]

    @property
    def eq3_failures(self) -> list:
        if self.eq3_profile is None:
            return []
        return [c for c in self.eq3_profile.cells() if c[2] != 1]

    def to_json(self) -> dict:
        def cells(cs):
            return [[fraction_str(lo), fraction_str(hi), fraction_str(v)] for lo, hi, v in cs]

        def num(x):
            return fraction_str(x) if isinstance(x, Fraction) else x

        def wit(ws):
            out = []
            for w in ws:
                idx, lo, hi, res = w
                out.append(
                    {"index": idx, "cell": [num(lo), num(hi)], "residual": [res.real, res.imag]}
                )
            return out

        data = {
            "verdict": self.ok,
            "mode": self.mode,
            "norm_sq": {"value": num(self.norm_sq), "ok": self.norm_ok},
            "eq1": {"ok": self.eq1_ok, "failures": cells(self.eq1_failures)},
            "eq2": {"ok": self.eq2_ok, "witnesses": wit(self.eq2_witnesses)},
            "eq3": {"ok": self.eq3_ok, "failures": cells(self.eq3_failures)},
            "eq4": {"ok": self.eq4_ok, "witnesses": wit(self.eq4_witnesses)},
            "numeric_assisted": self.numeric_assisted,
        }
        if self.thm32_conditions is not None:
            data["thm32"] = self.thm32_conditions._asdict()
        if self.tolerance is not None:
            data["tolerance"] = self.tolerance
        if self.residuals:
            data["residuals"] = self.residuals
        return data


# ---------------------------------------------------------------------------
# exact checks


def _require_exact(w) -> None:
    if not isinstance(w, FrequencyWavelet):
        raise TypeError("exact checks need an exact-step FrequencyWavelet; use numeric_verify for samples")


def check_norm(w: FrequencyWavelet) -> Fraction:
    """``||psi||^2 = (1/2pi) * integral |psi_hat|^2``, exactly."""
    _require_exact(w)
    return w.mag2.integrate() / 2


def check_eq1(w: FrequencyWavelet) -> tuple[bool, LatticeSum]:
    _require_exact(w)
    rho = lattice_sum(w.mag2, "dyadic")
    return rho.is_constant(1), rho


def check_eq3(w: FrequencyWavelet) -> tuple[bool, LatticeSum]:
    _require_exact(w)
    s = lattice_sum(w.mag2, "translations")
    return s.is_constant(1), s


def _cross_cells(cells, other, shift: Fraction):
    """Cells of ``eta -> psi_hat(eta) conj(psi_hat(eta + shift))`` as (lo, hi, (q, t))."""
    out = []
    b = [(lo - shift, hi - shift, m2, t) for lo, hi, m2, t in other]
    i = j = 0
    while i < len(cells) and j < len(b):
        lo = max(cells[i][0], b[j][0])
        hi = min(cells[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi, (cells[i][2] * b[j][2], cells[i][3] - b[j][3])))
        if cells[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _even_shifts(support: IntervalSet, negative_only: bool) -> list[int]:
    """Nonzero even ``t`` with ``support n (support - t pi)`` of positive measure."""
    found = set()
    for plo, phi in support.pieces:
        for qlo, qhi in support.pieces:
            lo, hi = qlo - phi, qhi - plo  # open interval of admissible t
            t = math.floor(lo) + 1
            t += t % 2
            while t < hi:
                if t and (t < 0 or not negative_only):
                    found.add(t)
                t += 2
    return sorted(found)


def _split_even(t: int) -> tuple[int, int]:
    """``t = 2^(j+1) m`` with ``m`` odd; returns ``(m, j)``."""
    j = ((t & -t).bit_length() - 1) - 1
    return t >> (j + 1), j


def tm_cells(w: FrequencyWavelet, m: int) -> list:
    """Cells of ``t_m(xi) = sum_{j>=0} psi_hat(2^j xi) conj psi_hat(2^j(xi + 2m pi))``.

    Each entry is ``(lo, hi, terms)`` with ``terms`` a list of ``(q, turns)``.
    """
    if m % 2 == 0:
        raise ValueError("m must be odd")
    pieces = []
    for t in _even_shifts(w.support, negative_only=False):
        mm, j = _split_even(t)
        if mm != m:
            continue
        f = Fraction(1, 1 << j)
        for lo, hi, term in _cross_cells(w.cells, w.cells, Fraction(t)):
            pieces.append((lo * f, hi * f, term))
    return overlay(pieces)


def check_eq2(w: FrequencyWavelet) -> tuple[bool, list, bool]:
    """Returns ``(ok, witnesses, numeric_assisted)``; witnesses are ``(m, lo, hi, residual)``.

    Only negative ``m`` are enumerated: ``t_m(xi) = conj(t_{-m}(xi + 2m pi))``
    carries the verdict over to positive ``m``.
    """
    _require_exact(w)
    buckets: dict[int, list] = {}
    for t in _even_shifts(w.support, negative_only=True):
        m, j = _split_even(t)
        f = Fraction(1, 1 << j)
        bucket = buckets.setdefault(m, [])
        for lo, hi, term in _cross_cells(w.cells, w.cells, Fraction(t)):
            bucket.append((lo * f, hi * f, term))
    witnesses, assisted = [], False
    for m in sorted(buckets, reverse=True):
        for lo, hi, terms in overlay(buckets[m]):
            d = decide_zero(terms)
            assisted |= d.numeric_assisted
            if not d.zero:
                witnesses.append((m, lo, hi, d.residual))
    return not witnesses, witnesses, assisted


def check_eq4(w: FrequencyWavelet) -> tuple[bool, list, bool]:
    """Returns ``(ok, witnesses, numeric_assisted)``; witnesses are ``(j, lo, hi, residual)``."""
    _require_exact(w)
    if not w.cells:
        return True, [], False
    inner, outer = w.support.inf_abs(), w.support.sup_abs()
    if inner == 0:
        raise ValueError("support must be bounded away from 0")
    witnesses, assisted = [], False
    for j in range(1, floor_log2(outer / inner) + 1):
        f = Fraction(1, 1 << j)
        dilated = [(lo * f, hi * f, m2, t) for lo, hi, m2, t in w.cells]
        prod = _cross_cells(w.cells, dilated, Fraction(0))
        for lo, hi, terms in overlay(periodize(prod)):
            d = decide_zero(terms)
            assisted |= d.numeric_assisted
            if not d.zero:
                witnesses.append((j, lo, hi, d.residual))
    return not witnesses, witnesses, assisted


def _all_equal(cells, value) -> bool:
    return all(v == value for _, _, v in cells)


def check_thm32(w: FrequencyWavelet) -> Thm32Conditions:
    """Check the five structural conditions for a candidate supported in ``S_n``."""
    _require_exact(w)
    if w.n is None:
        raise ValueError("candidate declares no n")
    geom = sn_geometry(w.n)
    escape = w.support - geom.sn()
    if escape:
        raise ValueError(f"support escapes S_{w.n} on {escape!r}")
    a, b, _, _, e = geom.coeffs
    n = geom.n
    p = w.mag2
    cond_i = _all_equal(p.cells(a, e), 1) and _all_equal(p.cells(-e, -a), 1) if a < e else True
    cond_ii = _all_equal((p + p.pullback_dilate(n - 1)).cells(e, b), 1)
    cond_iii = _all_equal((p + p.pullback_translate(-1)).cells(e, b), 1)
    q = p.pullback_translate(-(1 << (n - 1))).pullback_dilate(n - 1)
    cond_iv = _all_equal((p - q).cells(e, b), 0)
    cond_v = validate_theta(geom, p, w.phase).ok
    return Thm32Conditions(cond_i, cond_ii, cond_iii, cond_iv, cond_v)


def verify(w: FrequencyWavelet, thm32: bool = True) -> VerificationReport:
    """Full exact verification; the five structural conditions are added when ``supp`` lies in ``S_n``."""
    _require_exact(w)
    norm = check_norm(w)
    ok1, rho = check_eq1(w)
    ok2, wit2, as2 = check_eq2(w)
    ok3, per = check_eq3(w)
    ok4, wit4, as4 = check_eq4(w)
    conds = check_thm32(w) if thm32 and in_sn(w) else None
    return VerificationReport(
        norm_sq=norm,
        eq1_ok=ok1,
        eq2_ok=ok2,
        eq3_ok=ok3,
        eq4_ok=ok4,
        eq1_profile=rho,
        eq2_witnesses=wit2,
        eq3_profile=per,
        eq4_witnesses=wit4,
        thm32_conditions=conds,
        numeric_assisted=as2 or as4,
    )


class EvenBell(NamedTuple):
    is_even: bool
    e5_holds: bool

    @property
    def consistent(self) -> bool:
        return self.is_even == self.e5_holds


def check_even_bell(w: FrequencyWavelet, assume_verified: bool = False) -> EvenBell:
    """Evenness of ``|psi_hat|`` against ``b^2(xi) + b^2(2pi - xi) = 1`` on ``[e_n, b_n)``.

    For wavelets supported in ``S_n`` the two must agree; a disagreement is
    logged as an internal-consistency failure.
    """
    _require_exact(w)
    if not in_sn(w):
        raise ValueError("even-bell check needs a candidate supported in its S_n")
    if not assume_verified and not verify(w, thm32=False).ok:
        raise ValueError("even-bell check needs a verified wavelet")
    geom = sn_geometry(w.n)
    p = w.mag2
    is_even = p == p.reflect()
    e5 = _all_equal((p + p.reflect().pullback_shift(-2)).cells(geom.e.coeff, geom.b.coeff), 1)
    result = EvenBell(is_even, e5)
    if not result.consistent:
        log.error("internal consistency failure: evenness %s but bell identity %s", is_even, e5)
    return result


# ---------------------------------------------------------------------------
# numeric mode

_OFFSET = 0.3819660112501051  # (3 - sqrt 5)/2, keeps sample points off rational breakpoints


@dataclass(frozen=True)
class SampledWavelet:
    """A ``psi_hat`` given by a vectorized function of ``xi`` (radians).

    ``inner``/``outer`` bound ``|xi|`` on the support, ``breakpoints`` lists
    known jumps, and ``min_feature`` is the length of the shortest support piece.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    inner: float
    outer: float
    breakpoints: tuple[float, ...] = ()
    min_feature: float = 0.0

    mode = "numeric-grid"


def sample_exact(w: FrequencyWavelet) -> SampledWavelet:
    """Numeric view of an exact wavelet (for cross-checking the two modes)."""
    cells = w.cells
    los = np.array([float(c[0]) * math.pi for c in cells])
    his = np.array([float(c[1]) * math.pi for c in cells])
    vals = np.array([math.sqrt(c[2]) * np.exp(1j * math.pi * float(c[3])) for c in cells])

    def evaluate(xi):
        xi = np.asarray(xi, dtype=float)
        idx = np.searchsorted(los, xi, side="right") - 1
        ok = (idx >= 0) & (xi < his[np.clip(idx, 0, None)])
        return np.where(ok, vals[np.clip(idx, 0, None)], 0)

    pieces = w.support.pieces
    return SampledWavelet(
        evaluate,
        inner=float(w.support.inf_abs()) * math.pi,
        outer=float(w.support.sup_abs()) * math.pi,
        breakpoints=tuple(sorted({x for c in cells for x in (float(c[0]) * math.pi, float(c[1]) * math.pi)})),
        min_feature=min(float(hi - lo) for lo, hi in pieces) * math.pi,
    )


def sample_extended_bell(
    geom: SnGeometry,
    bell2: Callable[[np.ndarray], np.ndarray],
    perturb: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SampledWavelet:
    """Extend a real-valued bell ``b^2`` on ``[e_n, b_n)`` numerically, with phase pi on the window.

    ``perturb`` (optional) is added to ``|psi_hat|`` afterwards, for fault injection.
    """
    a, b, c, d, e = (float(x) * math.pi for x in geom.coeffs)
    s = float(geom.half_scale)
    two_pi = 2 * math.pi

    def evaluate(xi):
        xi = np.asarray(xi, dtype=float)
        m2 = np.zeros_like(xi)
        on = lambda lo, hi: (xi >= lo) & (xi < hi)  # noqa: E731
        m2 = np.where(on(a, e) | on(-e, -a), 1.0, m2)
        m2 = np.where(on(e, b), _safe(bell2, xi), m2)
        m2 = np.where(on(c, d), 1.0 - _safe(bell2, xi / s), m2)
        m2 = np.where(on(-b, -e), 1.0 - _safe(bell2, xi + two_pi), m2)
        m2 = np.where(on(-d, -c), _safe(bell2, xi / s + two_pi), m2)
        mag = np.sqrt(np.clip(m2, 0.0, None))
        if perturb is not None:
            mag = mag + perturb(xi)
        return np.where(on(e, b), -mag, mag).astype(complex)

    return SampledWavelet(evaluate, inner=a if geom.n > 2 else e, outer=d, breakpoints=(-d, -c, -b, -e, -a, a, e, b, c, d), min_feature=b - e)


def _safe(f, x):
    with np.errstate(all="ignore"):
        return np.nan_to_num(f(x))


def _grid(lo: float, hi: float, h: float) -> np.ndarray:
    count = max(1, int(math.ceil((hi - lo) / h)))
    return lo + (np.arange(count) + _OFFSET) * ((hi - lo) / count)


def _gauss_nodes(sw: SampledWavelet, h: float):
    pts = np.union1d(np.linspace(-sw.outer, sw.outer, int(math.ceil(2 * sw.outer / h)) + 1), np.array(sw.breakpoints))
    x, wts = np.polynomial.legendre.leggauss(3)
    mid = 0.5 * (pts[1:] + pts[:-1])
    half = 0.5 * (pts[1:] - pts[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * wts[None, :]).ravel()
    return nodes, weights


def numeric_verify(sw: SampledWavelet, grid_step: float, tolerance: float) -> VerificationReport:
    """Sampled version of the exact checks; sums truncated by the support bounds."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if sw.min_feature and grid_step > sw.min_feature / 4:
        raise ValueError(
            f"grid step {grid_step:.3g} cannot resolve the smallest support piece ({sw.min_feature:.3g}); refusing"
        )
    f = sw.evaluate
    two_pi = 2 * math.pi
    inner, outer = sw.inner, sw.outer
    residuals = {}

    nodes, weights = _gauss_nodes(sw, grid_step)
    norm_sq = float(np.sum(weights * np.abs(f(nodes)) ** 2) / two_pi)

    jmax = int(math.ceil(math.log2(outer / inner))) + 1
    worst1 = 0.0
    for sign in (1, -1):
        xi = sign * _grid(inner, 2 * inner, grid_step)
        rho = sum(np.abs(f(2.0**j * xi)) ** 2 for j in range(-1, jmax + 1))
        worst1 = max(worst1, float(np.max(np.abs(rho - 1))))
    residuals["eq1"] = worst1

    period = _grid(0.0, two_pi, grid_step)
    kmax = int(math.ceil(outer / two_pi)) + 1
    tr = sum(np.abs(f(period + two_pi * k)) ** 2 for k in range(-kmax, kmax + 1))
    residuals["eq3"] = float(np.max(np.abs(tr - 1)))

    line = _grid(-outer, outer, grid_step)
    worst2 = 0.0
    m = -1
    while 2 * abs(m) * math.pi <= 2 * outer:
        t = np.zeros_like(line, dtype=complex)
        j = 0
        while 2.0**j * 2 * abs(m) * math.pi <= 2 * outer:
            t += f(2.0**j * line) * np.conj(f(2.0**j * (line + two_pi * m)))
            j += 1
        worst2 = max(worst2, float(np.max(np.abs(t))))
        m -= 2
    residuals["eq2"] = worst2

    worst4 = 0.0
    for j in range(1, int(math.floor(math.log2(outer / inner))) + 1):
        s = np.zeros_like(period, dtype=complex)
        for k in range(-kmax, kmax + 1):
            x = period + two_pi * k
            s += f(x) * np.conj(f(2.0**j * x))
        worst4 = max(worst4, float(np.max(np.abs(s))))
    residuals["eq4"] = worst4

    return VerificationReport(
        norm_sq=norm_sq,
        eq1_ok=worst1 <= tolerance,
        eq2_ok=worst2 <= tolerance,
        eq3_ok=residuals["eq3"] <= tolerance,
        eq4_ok=worst4 <= tolerance,
        mode="numeric",
        tolerance=tolerance,
        residuals=residuals,
    )
