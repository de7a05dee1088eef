"""Piecewise-constant profiles on the frequency line.

A :class:`StepProfile` is a compactly supported step function with breakpoints
in Q*pi and rational values; it stores ``|psi_hat|^2``, dimension functions and
the like. :class:`PhaseProfile` holds a phase in units of pi, reduced mod 2.
Both are zero (phase 0) off their listed pieces.

Breakpoints are Fraction coefficients of pi, as in :mod:`snwave.frequency_sets`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .exact_scalars import as_fraction, fraction_str
from .frequency_sets import IntervalSet, dyadic_bands

__all__ = [
    "StepProfile",
    "PhaseProfile",
    "overlay",
    "sum_pieces",
    "common_refinement",
    "periodize",
    "dyadic_band_sum",
    "one_sided_dyadic_sum",
    "lattice_sum",
    "LatticeSum",
]

Cell = tuple[Fraction, Fraction, Any]


def overlay(pieces: Iterable[Cell]) -> list[tuple[Fraction, Fraction, list]]:
    """Split overlapping pieces into elementary cells.

    Returns ``(lo, hi, payloads)`` for every cell of the coarsest partition
    refining all inputs on which at least one piece is active; ``payloads``
    lists the active payloads in input order.
    """
    items = [(lo, hi, i, pay) for i, (lo, hi, pay) in enumerate(pieces) if lo < hi]
    if not items:
        return []
    points = sorted({x for lo, hi, _, _ in items for x in (lo, hi)})
    items.sort(key=lambda t: t[0])
    out = []
    active: list = []
    nxt = 0
    for left, right in zip(points, points[1:]):
        while nxt < len(items) and items[nxt][0] <= left:
            active.append(items[nxt])
            nxt += 1
        active = [it for it in active if it[1] > left]
        if active:
            active.sort(key=lambda t: t[2])
            out.append((left, right, [it[3] for it in active]))
    return out


def sum_pieces(pieces: Iterable[Cell], cls=None) -> "StepProfile":
    cls = cls or StepProfile
    return cls((lo, hi, sum(vals, Fraction(0))) for lo, hi, vals in overlay(pieces))


class StepProfile:
    """Compactly supported step function ``sum v_i * chi_[lo_i, hi_i)``."""

    __slots__ = ("pieces",)
    json_key = "value"

    def __init__(self, pieces: Iterable = ()):
        norm = []
        for lo, hi, v in pieces:
            lo, hi, v = as_fraction(lo), as_fraction(hi), self._normalize(as_fraction(v))
            if hi < lo:
                raise ValueError(f"piece with hi < lo: [{lo}, {hi})")
            if lo == hi or v == 0:
                continue
            norm.append((lo, hi, v))
        norm.sort(key=lambda t: t[0])
        merged: list[list] = []
        for lo, hi, v in norm:
            if merged and lo < merged[-1][1]:
                raise ValueError(f"overlapping pieces at {lo}")
            if merged and lo == merged[-1][1] and v == merged[-1][2]:
                merged[-1][1] = hi
            else:
                merged.append([lo, hi, v])
        self.pieces: tuple[Cell, ...] = tuple((lo, hi, v) for lo, hi, v in merged)

    @staticmethod
    def _normalize(v: Fraction) -> Fraction:
        return v

    @classmethod
    def indicator(cls, s: IntervalSet, value=1) -> "StepProfile":
        return cls((lo, hi, value) for lo, hi in s.pieces)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __repr__(self) -> str:
        body = ", ".join(
            f"[{fraction_str(lo)},{fraction_str(hi)}):{fraction_str(v)}" for lo, hi, v in self.pieces
        )
        return f"{type(self).__name__}({body})"

    def __bool__(self) -> bool:
        return bool(self.pieces)

    # -- evaluation ----------------------------------------------------

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        i = bisect_right(self.pieces, x, key=lambda t: t[0]) - 1
        if i >= 0:
            lo, hi, v = self.pieces[i]
            if x < hi:
                return v
        return Fraction(0)

    def support(self) -> IntervalSet:
        return IntervalSet((lo, hi) for lo, hi, _ in self.pieces)

    def integrate(self) -> Fraction:
        """Integral as a coefficient of pi."""
        return sum(((hi - lo) * v for lo, hi, v in self.pieces), Fraction(0))

    def values(self) -> set[Fraction]:
        return {v for _, _, v in self.pieces}

    def cells(self, lo, hi) -> list[Cell]:
        """Partition of ``[lo, hi)`` into maximal constant cells, zero gaps included."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        out = []
        cur = lo
        for plo, phi, v in self.pieces:
            if phi <= lo or plo >= hi:
                continue
            plo, phi = max(plo, lo), min(phi, hi)
            if plo > cur:
                out.append((cur, plo, Fraction(0)))
            out.append((plo, phi, v))
            cur = phi
        if cur < hi:
            out.append((cur, hi, Fraction(0)))
        merged: list[list] = []
        for c in out:
            if merged and merged[-1][2] == c[2]:
                merged[-1][1] = c[1]
            else:
                merged.append(list(c))
        return [tuple(c) for c in merged]

    def restrict(self, s: IntervalSet) -> "StepProfile":
        return type(self)((lo, hi, v) for (lo, hi, v, _) in _intersect_with_set(self.pieces, s))

    # -- pullbacks -----------------------------------------------------

    def pullback_dilate(self, j: int) -> "StepProfile":
        """``r(xi) = p(2**j xi)``."""
        f = Fraction(2) ** -j
        return type(self)((lo * f, hi * f, v) for lo, hi, v in self.pieces)

    def pullback_shift(self, alpha) -> "StepProfile":
        """``r(xi) = p(xi + alpha*pi)``."""
        a = as_fraction(alpha)
        return type(self)((lo - a, hi - a, v) for lo, hi, v in self.pieces)

    def pullback_translate(self, k: int) -> "StepProfile":
        """``r(xi) = p(xi + 2 k pi)``."""
        return self.pullback_shift(2 * k)

    def pullback(self, action: str, amount: int) -> "StepProfile":
        if action == "dilate":
            return self.pullback_dilate(amount)
        if action == "translate":
            return self.pullback_translate(amount)
        raise ValueError(f"unknown action {action!r}")

    def reflect(self) -> "StepProfile":
        """``r(xi) = p(-xi)``."""
        return type(self)((-hi, -lo, v) for lo, hi, v in self.pieces)

    # -- pointwise algebra ---------------------------------------------

    def combine(self, other: "StepProfile", op: Callable[[Fraction, Fraction], Fraction]) -> "StepProfile":
        """Pointwise ``op(self, other)``; ``op(0, 0)`` must be 0."""
        tagged = [(lo, hi, (0, v)) for lo, hi, v in self.pieces]
        tagged += [(lo, hi, (1, v)) for lo, hi, v in other.pieces]
        out = []
        for lo, hi, pays in overlay(tagged):
            x = y = Fraction(0)
            for side, v in pays:
                if side == 0:
                    x = v
                else:
                    y = v
            out.append((lo, hi, op(x, y)))
        return type(self)(out)

    def __add__(self, other: "StepProfile") -> "StepProfile":
        return self.combine(other, lambda x, y: x + y)

    def __sub__(self, other: "StepProfile") -> "StepProfile":
        return self.combine(other, lambda x, y: x - y)

    def __mul__(self, other: "StepProfile") -> "StepProfile":
        return self.combine(other, lambda x, y: x * y)

    def scale(self, c) -> "StepProfile":
        c = as_fraction(c)
        return type(self)((lo, hi, v * c) for lo, hi, v in self.pieces)

    def map_values(self, f: Callable[[Fraction], Fraction]) -> "StepProfile":
        return type(self)((lo, hi, f(v)) for lo, hi, v in self.pieces)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "pieces": [
                {"lo": fraction_str(lo), "hi": fraction_str(hi), self.json_key: fraction_str(v)}
                for lo, hi, v in self.pieces
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "StepProfile":
        return cls((Fraction(p["lo"]), Fraction(p["hi"]), Fraction(p[cls.json_key])) for p in data["pieces"])


class PhaseProfile(StepProfile):
    """Phase function ``theta(xi) = turns * pi``; turns reduced into ``[0, 2)``."""

    __slots__ = ()
    json_key = "turns"

    @staticmethod
    def _normalize(v: Fraction) -> Fraction:
        return v % 2

    def __add__(self, other):
        return self.combine(other, lambda x, y: x + y)

    def shifted_by(self, c) -> "PhaseProfile":
        """Add the constant phase ``c * pi`` on the given pieces only (callers add support)."""
        c = as_fraction(c)
        return PhaseProfile((lo, hi, v + c) for lo, hi, v in self.pieces)


def _intersect_with_set(pieces: Sequence[Cell], s: IntervalSet):
    i = j = 0
    sp = s.pieces
    while i < len(pieces) and j < len(sp):
        lo = max(pieces[i][0], sp[j][0])
        hi = min(pieces[i][1], sp[j][1])
        if lo < hi:
            yield lo, hi, pieces[i][2], j
        if pieces[i][1] < sp[j][1]:
            i += 1
        else:
            j += 1


def common_refinement(profiles: Sequence[StepProfile]) -> list[tuple[Fraction, Fraction, tuple]]:
    """Coarsest partition of the union of supports on which every input is constant.

    Each cell carries the vector of input values (0 where an input vanishes).
    """
    if not profiles:
        raise ValueError("need at least one profile")
    tagged = [(lo, hi, (i, v)) for i, p in enumerate(profiles) for lo, hi, v in p.pieces]
    out = []
    for lo, hi, pays in overlay(tagged):
        vec = [Fraction(0)] * len(profiles)
        for i, v in pays:
            vec[i] = v
        out.append((lo, hi, tuple(vec)))
    return out


# ---------------------------------------------------------------------------
# lattice sums


def periodize(pieces: Iterable[Cell], start: Fraction = Fraction(0)) -> list[Cell]:
    """Fold pieces onto the period window ``[start, start + 2)`` (units of pi)."""
    out = []
    for lo, hi, v in pieces:
        for m in range(math.floor((lo - start) / 2), math.ceil((hi - start) / 2)):
            wlo = start + 2 * m
            clo, chi = max(lo, wlo), min(hi, wlo + 2)
            if clo < chi:
                out.append((clo - 2 * m, chi - 2 * m, v))
    return out


def _check_away_from_zero(pieces: Sequence[Cell]) -> None:
    for lo, hi, _ in pieces:
        if lo <= 0 <= hi:
            raise ValueError("dyadic sums need support bounded away from 0")


def dyadic_band_sum(pieces: Sequence[Cell], alpha: Fraction, sign: int = 1) -> list[Cell]:
    """Fold pieces onto the band ``sign * [alpha, 2 alpha)`` via ``xi -> 2^j xi``, all ``j``.

    The returned cells are the contributions ``p(2^j xi)`` restricted to the
    band, unsummed. Only pieces on the matching half-line contribute.
    """
    _check_away_from_zero(pieces)
    out = []
    for lo, hi, v in pieces:
        if sign > 0:
            if lo < 0:
                continue
            a, b = lo, hi
        else:
            if hi > 0:
                continue
            a, b = -hi, -lo
        for j in dyadic_bands(a, b, alpha):
            f = Fraction(2) ** j
            clo, chi = max(a, alpha * f), min(b, 2 * alpha * f)
            if clo < chi:
                clo, chi = clo / f, chi / f
                out.append((clo, chi, v) if sign > 0 else (-chi, -clo, v))
    return out


def one_sided_dyadic_sum(p: StepProfile) -> StepProfile:
    """``sum_{j >= 1} p(2^j xi)`` as an exact step profile.

    Near 0 the sum equals the full dyadic sum, which is dilation periodic; it is
    representable only if that periodic function is constant on each
    half-line, and a ``ValueError`` is raised otherwise.
    """
    _check_away_from_zero(p.pieces)
    if not p.pieces:
        return StepProfile()
    pos = [c for c in p.pieces if c[0] > 0]
    neg = [c for c in p.pieces if c[1] < 0]
    out: list[Cell] = []
    for half, sign in ((pos, 1), (neg, -1)):
        if not half:
            continue
        inner = min(c[0] for c in half) if sign > 0 else min(-c[1] for c in half)
        band = sum_pieces(dyadic_band_sum(half, inner / 2, sign))
        lo_band, hi_band = (inner / 2, inner) if sign > 0 else (-inner, -inner / 2)
        cells = band.cells(lo_band, hi_band)
        if len(cells) != 1:
            raise ValueError("dyadic sum is not constant near 0; no finite step representation")
        const = cells[0][2]
        out.append((Fraction(0), inner, const) if sign > 0 else (-inner, Fraction(0), const))
        # beyond |xi| >= inner only finitely many j >= 1 reach the support
        for lo, hi, v in half:
            a, b = (lo, hi) if sign > 0 else (-hi, -lo)
            j = 1
            while b / (1 << j) > inner:
                clo, chi = max(a / (1 << j), inner), b / (1 << j)
                if clo < chi:
                    out.append((clo, chi, v) if sign > 0 else (-chi, -clo, v))
                j += 1
    return sum_pieces(out)


@dataclass(frozen=True)
class LatticeSum:
    """Result of a lattice sum, reported on its representative windows.

    ``kind`` is ``translations`` (2pi periodic, window ``[0, 2pi)``),
    ``dyadic`` (dilation periodic, windows ``[alpha, 2alpha)`` and
    ``[-2alpha, -alpha)``) or ``dimension`` (2pi periodic, window ``[-pi, pi)``).
    """

    profile: StepProfile
    windows: tuple[tuple[Fraction, Fraction], ...]
    kind: str

    @property
    def periodic(self) -> bool:
        return True

    def cells(self) -> list[Cell]:
        out = []
        for lo, hi in self.windows:
            out.extend(self.profile.cells(lo, hi))
        return out

    def is_constant(self, value=1) -> bool:
        value = as_fraction(value)
        return all(v == value for _, _, v in self.cells())


def lattice_sum(p: StepProfile, lattice: str) -> LatticeSum:
    """Exact lattice sum of ``p`` over ``dyadic`` dilations, ``translations`` by 2pi Z,
    or ``dimension`` (dilations ``j >= 1`` followed by translations)."""
    if lattice == "translations":
        return LatticeSum(sum_pieces(periodize(p.pieces)), ((Fraction(0), Fraction(2)),), "translations")
    if lattice == "dyadic":
        _check_away_from_zero(p.pieces)
        support = p.support()
        if support.is_empty():
            alpha = Fraction(1)
        else:
            pos = [lo for lo, _ in support.pieces if lo > 0]
            alpha = min(pos) if pos else support.inf_abs()
        cells = dyadic_band_sum(p.pieces, alpha, 1) + dyadic_band_sum(p.pieces, alpha, -1)
        return LatticeSum(sum_pieces(cells), ((-2 * alpha, -alpha), (alpha, 2 * alpha)), "dyadic")
    if lattice == "dimension":
        tail = one_sided_dyadic_sum(p)
        folded = periodize(tail.pieces, Fraction(-1))
        return LatticeSum(sum_pieces(folded), ((Fraction(-1), Fraction(1)),), "dimension")
    raise ValueError(f"unknown lattice {lattice!r}")
