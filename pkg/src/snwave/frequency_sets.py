"""Finite unions of intervals with endpoints in Q*pi, and the sets built from them.

Endpoints are stored as :class:`~fractions.Fraction` coefficients of pi, so the
interval ``[4pi/7, 8pi/7)`` is ``(Fraction(4, 7), Fraction(8, 7))``. Every
interval is half-open; closed intervals written elsewhere differ from these
only on a null set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .exact_scalars import RationalPi, as_fraction, floor_log2, fraction_str

__all__ = [
    "IntervalSet",
    "SnGeometry",
    "build_sn",
    "sn_geometry",
    "set_transform",
    "lemma_rows",
    "LEMMA_ROWS",
    "admissible_moves",
    "wavelet_set_check",
    "WaveletSetVerdict",
    "named_set",
    "shannon_set",
    "journe_set",
    "lemarie_set",
    "wn_set",
    "fn_set",
    "msf_a_set",
    "msf_b_set",
    "dyadic_bands",
]

Piece = tuple[Fraction, Fraction]


class IntervalSet:
    """A finite union of half-open intervals ``[lo, hi)``.

    Pieces are kept sorted, disjoint and merged, so two sets are equal exactly
    when their piece tuples are equal.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable = ()):
        raw = sorted((as_fraction(lo), as_fraction(hi)) for lo, hi in pieces)
        merged: list[list[Fraction]] = []
        for lo, hi in raw:
            if hi < lo:
                raise ValueError(f"interval with hi < lo: [{lo}, {hi})")
            if lo == hi:
                continue
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        self.pieces: tuple[Piece, ...] = tuple((lo, hi) for lo, hi in merged)

    @classmethod
    def _trusted(cls, pieces: tuple[Piece, ...]) -> "IntervalSet":
        obj = cls.__new__(cls)
        obj.pieces = pieces
        return obj

    @classmethod
    def interval(cls, lo, hi) -> "IntervalSet":
        return cls([(lo, hi)])

    # -- basic queries -------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __repr__(self) -> str:
        body = " u ".join(f"[{fraction_str(lo)}, {fraction_str(hi)})" for lo, hi in self.pieces)
        return f"IntervalSet({body or 'empty'} ; units of pi)"

    @property
    def length(self) -> Fraction:
        """Total length as a coefficient of pi."""
        return sum((hi - lo for lo, hi in self.pieces), Fraction(0))

    def measure(self) -> RationalPi:
        return RationalPi(self.length)

    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, x) -> bool:
        x = as_fraction(x)
        return any(lo <= x < hi for lo, hi in self.pieces)

    def issubset(self, other: "IntervalSet") -> bool:
        return (self & other) == self

    def bounds(self) -> Piece:
        if not self.pieces:
            raise ValueError("empty set has no bounds")
        return self.pieces[0][0], self.pieces[-1][1]

    def sup_abs(self) -> Fraction:
        lo, hi = self.bounds()
        return max(abs(lo), abs(hi))

    def touches_zero(self) -> bool:
        """True if some piece has 0 in its closure (support not bounded away from 0)."""
        return any(lo <= 0 <= hi for lo, hi in self.pieces)

    def positive_part(self) -> "IntervalSet":
        return self & IntervalSet([(0, self.sup_abs() + 1)]) if self.pieces else self

    def negative_part(self) -> "IntervalSet":
        return self & IntervalSet([(-self.sup_abs() - 1, 0)]) if self.pieces else self

    def inf_abs(self) -> Fraction:
        """Smallest ``|xi|`` over the closure; 0 if the set touches 0."""
        best = None
        for lo, hi in self.pieces:
            if lo <= 0 <= hi:
                return Fraction(0)
            d = lo if lo > 0 else -hi
            best = d if best is None else min(best, d)
        if best is None:
            raise ValueError("empty set")
        return best

    # -- set algebra ---------------------------------------------------

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        a, b = self.pieces, other.pieces
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet._trusted(tuple(out))

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for lo, hi in self.pieces:
            cur = lo
            for olo, ohi in other.pieces:
                if ohi <= cur or olo >= hi:
                    continue
                if olo > cur:
                    out.append((cur, olo))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(out)

    intersection = __and__
    union = __or__
    difference = __sub__

    # -- transforms ----------------------------------------------------

    def shift(self, alpha) -> "IntervalSet":
        """Translate by ``alpha * pi`` (alpha a rational or RationalPi)."""
        a = as_fraction(alpha)
        return IntervalSet._trusted(tuple((lo + a, hi + a) for lo, hi in self.pieces))

    def translate(self, k: int) -> "IntervalSet":
        """Translate by ``2 k pi``."""
        return self.shift(2 * k)

    def dilate(self, j: int) -> "IntervalSet":
        """Image under ``xi -> 2**j xi``."""
        f = Fraction(2) ** j
        return IntervalSet._trusted(tuple((lo * f, hi * f) for lo, hi in self.pieces))

    def negate(self) -> "IntervalSet":
        # -[lo, hi) = (-hi, -lo], which is [-hi, -lo) up to two points
        return IntervalSet(tuple((-hi, -lo) for lo, hi in self.pieces))

    def __neg__(self) -> "IntervalSet":
        return self.negate()

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {"pieces": [[fraction_str(lo), fraction_str(hi)] for lo, hi in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> "IntervalSet":
        return cls((Fraction(lo), Fraction(hi)) for lo, hi in data["pieces"])


def set_transform(s: IntervalSet, action: str, amount: int = 0) -> IntervalSet:
    """Apply ``dilate`` (by ``2**amount``), ``translate`` (by ``2*amount*pi``) or ``negate``."""
    if action == "dilate":
        return s.dilate(amount)
    if action == "translate":
        return s.translate(amount)
    if action == "negate":
        return s.negate()
    raise ValueError(f"unknown action {action!r}")


# ---------------------------------------------------------------------------
# S_n geometry


@dataclass(frozen=True)
class SnGeometry:
    """Endpoints of ``S_n`` together with the splitting point ``e_n``."""

    n: int
    a: RationalPi
    b: RationalPi
    c: RationalPi
    d: RationalPi
    e: RationalPi

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        """``(a, b, c, d, e)`` as coefficients of pi."""
        return self.a.coeff, self.b.coeff, self.c.coeff, self.d.coeff, self.e.coeff

    @property
    def half_scale(self) -> int:
        """``2**(n-1)``, the dilation pairing ``[e, b)`` with ``[c, d)``."""
        return 1 << (self.n - 1)

    def sn(self) -> IntervalSet:
        a, b, c, d, _ = self.coeffs
        return IntervalSet([(-d, -c), (-b, -a), (a, b), (c, d)])


def sn_geometry(n: int) -> SnGeometry:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"S_n is defined for integers n >= 2, got {n!r}")
    m = (1 << n) - 1
    a = Fraction(1 << (n - 1), m)
    return SnGeometry(
        n=n,
        a=RationalPi(a),
        b=RationalPi(2 * a),
        c=RationalPi(Fraction((1 << (n - 1)) * ((1 << n) - 2), m)),
        d=RationalPi((1 << n) * a),
        e=RationalPi(Fraction((1 << n) - 2, m)),
    )


def build_sn(n: int) -> tuple[SnGeometry, IntervalSet]:
    geom = sn_geometry(n)
    return geom, geom.sn()


def wn_set(n: int) -> IntervalSet:
    """``[-b, -a) u [a, e) u [c, d)``: the support of the MSF wavelet gamma_n."""
    a, b, c, d, e = sn_geometry(n).coeffs
    return IntervalSet([(-b, -a), (a, e), (c, d)])


def fn_set(n: int) -> IntervalSet:
    """Support of the class-M_{n-2} wavelet built by moving mass off ``W_n``."""
    a, b, c, d, e = sn_geometry(n).coeffs
    top = 1 << n
    return IntervalSet([(-b, -a), (a / 2, e / 2), (a, e), (c, d), (a + top, e + top)])


def msf_a_set(n: int) -> IntervalSet:
    """Symmetric two-interval wavelet set ``+-([a, 1) u [2^(n-1), d))`` (units of pi)."""
    g = sn_geometry(n)
    a, _, _, d, _ = g.coeffs
    pos = IntervalSet([(a, 1), (g.half_scale, d)])
    return pos | pos.negate()


def msf_b_set(n: int, p: int) -> IntervalSet:
    """Wavelet set with one negative interval and two positive ones, ``1 <= p <= 2^(n-1) - 2``."""
    if n < 3:
        raise ValueError("msf-b sets need n >= 3")
    if not 1 <= p <= (1 << (n - 1)) - 2:
        raise ValueError(f"p must lie in 1..{(1 << (n - 1)) - 2} for n={n}, got {p}")
    m = (1 << n) - 1
    r = 1 - Fraction(2 * p + 1, m)
    return IntervalSet(
        [
            (-2 * r, -r),
            (Fraction(2 * (p + 1), m), Fraction(2 * (2 * p + 1), m)),
            (Fraction((1 << n) * (2 * p + 1), m), Fraction((1 << (n + 1)) * (p + 1), m)),
        ]
    )


def shannon_set() -> IntervalSet:
    return IntervalSet([(-2, -1), (1, 2)])


def journe_set() -> IntervalSet:
    return IntervalSet(
        [
            (Fraction(-32, 7), -4),
            (-1, Fraction(-4, 7)),
            (Fraction(4, 7), 1),
            (4, Fraction(32, 7)),
        ]
    )


def lemarie_set() -> IntervalSet:
    return IntervalSet(
        [
            (Fraction(-8, 7), Fraction(-4, 7)),
            (Fraction(4, 7), Fraction(6, 7)),
            (Fraction(24, 7), Fraction(32, 7)),
        ]
    )


def named_set(key: str, n: int | None = None, p: int | None = None) -> IntervalSet:
    """Registry lookup: ``shannon``, ``journe``, ``lemarie``, ``S_n``, ``W_n``, ``F_n``, ``K_a``, ``K_b``."""
    fixed = {"shannon": shannon_set, "journe": journe_set, "lemarie": lemarie_set}
    if key in fixed:
        return fixed[key]()
    if n is None:
        raise ValueError(f"set {key!r} needs n")
    if key == "S_n":
        return sn_geometry(n).sn()
    if key == "W_n":
        return wn_set(n)
    if key == "F_n":
        return fn_set(n)
    if key == "K_a":
        return msf_a_set(n)
    if key == "K_b":
        if p is None:
            raise ValueError("K_b needs p")
        return msf_b_set(n, p)
    raise KeyError(key)


# ---------------------------------------------------------------------------
# translates and dilates landing back in S_n

LEMMA_ROWS = ("[a,e)", "[e,b)", "[c,d)", "[-e,-a)", "[-b,-e)", "[-d,-c)")


def lemma_rows(geom: SnGeometry) -> dict[str, IntervalSet]:
    a, b, c, d, e = geom.coeffs
    spans = [(a, e), (e, b), (c, d), (-e, -a), (-b, -e), (-d, -c)]
    return {label: IntervalSet.interval(lo, hi) for label, (lo, hi) in zip(LEMMA_ROWS, spans)}


def admissible_moves(geom: SnGeometry, row: str) -> tuple[frozenset[int], frozenset[int]]:
    """Translations ``k`` and dilations ``j`` that move a piece of ``S_n`` back onto ``S_n``.

    A move is admissible when the image meets ``S_n`` in positive measure. The
    search runs over every ``k`` with ``|xi + 2k pi| <= d_n`` and every ``j``
    with ``a_n <= |2^j xi| <= d_n`` for some ``xi`` in the piece, which is all
    of them since ``S_n`` lies in ``a_n <= |xi| <= d_n``.
    """
    if geom.n < 3:
        raise ValueError("the admissibility table is stated for n >= 3")
    piece = lemma_rows(geom)[row]
    sn = geom.sn()
    a, _, _, d, _ = geom.coeffs
    lo, hi = piece.bounds()

    ks = set()
    for k in range(math.floor((-d - hi) / 2), math.ceil((d - lo) / 2) + 1):
        if (piece.translate(k) & sn).length > 0:
            ks.add(k)

    near, far = (lo, hi) if lo > 0 else (-hi, -lo)
    js = set()
    for j in range(floor_log2(a / far) - 1, floor_log2(d / near) + 2):
        if (piece.dilate(j) & sn).length > 0:
            js.add(j)
    return frozenset(ks), frozenset(js)


# ---------------------------------------------------------------------------
# wavelet-set tiling


class WaveletSetVerdict(NamedTuple):
    is_wavelet_set: bool
    translation_tiling: bool
    dilation_tiling: bool
    measure: RationalPi


def dyadic_bands(lo: Fraction, hi: Fraction, alpha: Fraction) -> range:
    """Indices ``j`` with ``[lo, hi)`` meeting ``[2^j alpha, 2^(j+1) alpha)``; ``0 < lo < hi``."""
    j0 = floor_log2(lo / alpha)
    j1 = floor_log2(hi / alpha)
    if Fraction(2) ** j1 * alpha == hi:
        j1 -= 1
    return range(j0, j1 + 1)


def _reduce_dyadic(pieces, alpha: Fraction) -> list[Piece]:
    out = []
    for lo, hi in pieces:
        for j in dyadic_bands(lo, hi, alpha):
            f = Fraction(2) ** j
            blo, bhi = alpha * f, 2 * alpha * f
            clo, chi = max(lo, blo), min(hi, bhi)
            if clo < chi:
                out.append((clo / f, chi / f))
    return out


def _partitions(pieces: list[Piece], lo: Fraction, hi: Fraction) -> bool:
    total = sum((b - a for a, b in pieces), Fraction(0))
    return total == hi - lo and IntervalSet(pieces) == IntervalSet.interval(lo, hi)


def wavelet_set_check(k: IntervalSet) -> WaveletSetVerdict:
    """Exact test that ``k`` tiles the line by 2pi-translates and by dyadic dilates."""
    if k.is_empty():
        raise ValueError("empty set")
    if k.touches_zero():
        raise ValueError("wavelet-set check needs a set bounded away from 0")

    reduced = []
    for lo, hi in k.pieces:
        for m in range(math.floor(lo / 2), math.ceil(hi / 2)):
            clo, chi = max(lo, Fraction(2 * m)), min(hi, Fraction(2 * m + 2))
            if clo < chi:
                reduced.append((clo - 2 * m, chi - 2 * m))
    translation = _partitions(reduced, Fraction(0), Fraction(2))

    pos = [p for p in k.pieces if p[0] > 0]
    neg = [(-hi, -lo) for lo, hi in k.pieces if hi < 0]
    dilation = bool(pos) and bool(neg)
    for half in (pos, neg):
        if not dilation:
            break
        alpha = min(lo for lo, _ in half)
        dilation = _partitions(_reduce_dyadic(half, alpha), alpha, 2 * alpha)

    return WaveletSetVerdict(translation and dilation, translation, dilation, k.measure())
