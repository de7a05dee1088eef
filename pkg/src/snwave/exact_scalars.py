"""Exact scalars for frequency-domain work.

Three small immutable types cover every number that shows up when a
step-profile wavelet is checked:

* :class:`RationalPi` -- ``q * pi`` with ``q`` rational (interval endpoints,
  translation and dilation images).
* :class:`SqrtRational` -- ``sqrt(q)`` with ``q >= 0`` rational (magnitudes
  such as ``1/sqrt(2)``).
* :class:`PhasePi` -- a phase angle ``t * pi`` with ``t`` rational, reduced
  into ``[0, 2)``.

Elsewhere in the package endpoints are kept as bare :class:`~fractions.Fraction`
coefficients of pi for speed; these classes are the public, serializable face.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

RationalLike = Union[int, Fraction, str]

__all__ = [
    "RationalPi",
    "SqrtRational",
    "PhasePi",
    "as_fraction",
    "fraction_str",
    "rationalpi_arith",
    "phase_sum_is_odd_pi",
    "squarefree_split",
    "floor_log2",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like ``"3/7"``, Fractions and RationalPi to a Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, RationalPi):
        return value.coeff
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def fraction_str(q: Fraction) -> str:
    """Serialize a Fraction as ``"p/q"`` (``"p"`` when integral)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def floor_log2(x: Fraction) -> int:
    """Largest integer ``k`` with ``2**k <= x`` for a positive rational ``x``."""
    if x <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    # k is within one of the answer
    if _pow2(k) > x:
        k -= 1
    elif _pow2(k + 1) <= x:
        k += 1
    return k


def _pow2(k: int) -> Fraction:
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


@total_ordering
@dataclass(frozen=True)
class RationalPi:
    """The real number ``coeff * pi``."""

    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_fraction(self.coeff))

    @classmethod
    def parse(cls, text: str) -> "RationalPi":
        return cls(Fraction(text))

    def __add__(self, other: "RationalPi") -> "RationalPi":
        return RationalPi(self.coeff + _coeff(other))

    def __sub__(self, other: "RationalPi") -> "RationalPi":
        return RationalPi(self.coeff - _coeff(other))

    def __neg__(self) -> "RationalPi":
        return RationalPi(-self.coeff)

    def __lt__(self, other: "RationalPi") -> bool:
        return self.coeff < _coeff(other)

    def scale(self, factor: RationalLike) -> "RationalPi":
        return RationalPi(self.coeff * as_fraction(factor))

    def dilate(self, j: int) -> "RationalPi":
        """``2**j * self``, exact for any integer ``j``."""
        return RationalPi(self.coeff * _pow2(j))

    def __float__(self) -> float:
        return float(self.coeff) * math.pi

    def __str__(self) -> str:
        return fraction_str(self.coeff)

    def __repr__(self) -> str:
        return f"RationalPi({fraction_str(self.coeff)})"

    def to_json(self) -> str:
        return fraction_str(self.coeff)

    @classmethod
    def from_json(cls, data: str) -> "RationalPi":
        return cls(Fraction(data))


def _coeff(x) -> Fraction:
    if isinstance(x, RationalPi):
        return x.coeff
    raise TypeError("RationalPi arithmetic needs another RationalPi; use scale() for rationals")


def rationalpi_arith(a: RationalPi, b, op: str) -> RationalPi:
    """Functional form of the RationalPi operations.

    ``op`` is one of ``add``, ``sub`` (``b`` a RationalPi), ``scale`` (``b``
    rational) or ``dyadic`` (``b`` an integer exponent ``j``; result ``2**j * a``).
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "scale":
        return a.scale(b)
    if op == "dyadic":
        return a.dilate(int(b))
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=4096)
def _square_part(x: int) -> tuple[int, int]:
    """Split ``x = f*f*s`` with ``s`` squarefree.

    Trial division only up to the cube root: what is left then has at most two
    prime factors, so it is either a perfect square or squarefree.
    """
    f, s = 1, 1
    p = 2
    while p * p * p <= x:
        if x % p == 0:
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(x)
    if r * r == x:
        return f * r, s
    return f, s * x


_FACTOR_LIMIT = 10**18


def squarefree_split(q: Fraction) -> tuple[Fraction, int] | None:
    """Write ``sqrt(q) = r * sqrt(s)`` with ``r`` rational and ``s`` squarefree.

    Returns ``None`` when the radicand is too large to factor cheaply; callers
    then fall back to high-precision numerics.
    """
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0), 1
    x = q.numerator * q.denominator
    if x > _FACTOR_LIMIT:
        return None
    f, s = _square_part(x)
    return Fraction(f, q.denominator), s


@dataclass(frozen=True)
class SqrtRational:
    """The nonnegative real ``sqrt(radicand)``."""

    radicand: Fraction

    def __post_init__(self):
        r = as_fraction(self.radicand)
        if r < 0:
            raise ValueError("radicand must be nonnegative")
        object.__setattr__(self, "radicand", r)

    def __mul__(self, other: "SqrtRational") -> "SqrtRational":
        return SqrtRational(self.radicand * other.radicand)

    def square(self) -> Fraction:
        return self.radicand

    def is_zero(self) -> bool:
        return self.radicand == 0

    def __float__(self) -> float:
        return math.sqrt(self.radicand)

    def to_json(self) -> dict:
        return {"radicand": fraction_str(self.radicand)}

    @classmethod
    def from_json(cls, data: dict) -> "SqrtRational":
        return cls(Fraction(data["radicand"]))


@dataclass(frozen=True)
class PhasePi:
    """A phase ``turns * pi`` with ``turns`` reduced into ``[0, 2)``."""

    turns: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turns", as_fraction(self.turns) % 2)

    def __add__(self, other: "PhasePi") -> "PhasePi":
        return PhasePi(self.turns + other.turns)

    def __sub__(self, other: "PhasePi") -> "PhasePi":
        return PhasePi(self.turns - other.turns)

    def __neg__(self) -> "PhasePi":
        return PhasePi(-self.turns)

    def antipode(self) -> "PhasePi":
        return PhasePi(self.turns + 1)

    def unit(self) -> complex:
        return complex(math.cos(math.pi * self.turns), math.sin(math.pi * self.turns))

    def to_json(self) -> dict:
        return {"turns": fraction_str(self.turns)}

    @classmethod
    def from_json(cls, data: dict) -> "PhasePi":
        return cls(Fraction(data["turns"]))


def phase_sum_is_odd_pi(p1: PhasePi, p2: PhasePi, p3: PhasePi, p4: PhasePi) -> tuple[bool, int | None]:
    """Decide whether ``p1 + p2 - p3 - p4`` is an odd multiple of pi.

    The alternating sum is formed from the reduced turn values without a
    further modular reduction, so the returned ``m`` satisfies
    ``p1 + p2 - p3 - p4 = (2m + 1) * pi`` exactly.
    """
    s = p1.turns + p2.turns - p3.turns - p4.turns
    if s.denominator != 1 or s.numerator % 2 == 0:
        return False, None
    return True, (s.numerator - 1) // 2
