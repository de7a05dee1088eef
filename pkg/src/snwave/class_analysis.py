"""Equivalence classes ``M_k`` of wavelets via partial self-similarity of the support.

A set ``E`` is partially self-similar with respect to ``alpha`` when some
positive-measure ``F`` has both ``F`` and ``F + alpha`` inside ``E``. The
largest such ``F`` is ``E n (E - alpha)``.

A wavelet sits in ``M_{k-1}`` when its support admits no witness at any odd
multiple of ``2^i pi`` for ``i < k`` but does at some odd multiple of
``2^k pi``; MSF wavelets form ``M_inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .exact_scalars import RationalPi, as_fraction, fraction_str
from .frequency_sets import IntervalSet
from .wavelet_builder import FrequencyWavelet

__all__ = [
    "SelfSimilarityWitness",
    "ClassLabel",
    "partial_self_similarity",
    "msf_test",
    "odd_multiples",
    "classify",
]


@dataclass(frozen=True)
class SelfSimilarityWitness:
    """``F`` and ``F + alpha`` both lie in ``E``; ``alpha`` in units of pi."""

    F: IntervalSet
    alpha: RationalPi

    def holds_for(self, e: IntervalSet) -> bool:
        return self.F.length > 0 and self.F.issubset(e) and self.F.shift(self.alpha.coeff).issubset(e)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "F": self.F.to_json()["pieces"]}


def partial_self_similarity(e: IntervalSet, alpha) -> SelfSimilarityWitness | None:
    """Maximal witness ``F = e n (e - alpha)``, or ``None`` if it is null."""
    alpha = alpha if isinstance(alpha, RationalPi) else RationalPi(as_fraction(alpha))
    f = e & e.shift(-alpha.coeff)
    if f.length == 0:
        return None
    return SelfSimilarityWitness(f, alpha)


def msf_test(w: FrequencyWavelet) -> bool:
    """True iff ``|psi_hat|`` is an indicator; the support then has measure ``2 pi``."""
    if not w.mag2.values() <= {Fraction(1)}:
        return False
    if w.support.length != 2:
        raise ValueError(f"indicator profile with support measure {fraction_str(w.support.length)} pi, not 2 pi")
    return True


def odd_multiples(k: int, bound: Fraction) -> Iterator[int]:
    """Odd ``q`` with ``|2^k q| <= bound``, in the order 1, -1, 3, -3, ..."""
    step = 1 << k
    q = 1
    while step * q <= bound:
        yield q
        yield -q
        q += 2


@dataclass
class ClassLabel:
    kind: str  # "M_<k>", "M_inf" or "inconclusive"
    witnesses: list = field(default_factory=list)
    empty_levels: list = field(default_factory=list)

    @property
    def index(self) -> int | float | None:
        if self.kind == "M_inf":
            return math.inf
        if self.kind == "inconclusive":
            return None
        return int(self.kind[2:])

    def to_json(self) -> dict:
        return {
            "class": self.kind,
            "witnesses": [w.to_json() for w in self.witnesses],
            "empty_levels": self.empty_levels,
        }


def classify(w: FrequencyWavelet, max_k: int = 16, verified: bool = False) -> ClassLabel:
    """Label a verified wavelet ``M_k``, ``M_inf`` or ``inconclusive``.

    ``verified`` must be set by the caller once the wavelet passed
    verification; classes are only meaningful for genuine wavelets.
    """
    if not verified:
        raise ValueError("classify needs a verified wavelet; run the verifier first")
    if msf_test(w):
        return ClassLabel("M_inf")
    e = w.support
    # shifts beyond the support diameter cannot produce an overlap
    bound = 2 * e.sup_abs()
    empty = []
    for k in range(1, max_k + 1):
        if (1 << k) > bound:
            break
        for q in odd_multiples(k, bound):
            wit = partial_self_similarity(e, (1 << k) * q)
            if wit is not None:
                return ClassLabel(f"M_{k - 1}", [wit], empty)
        empty.append(k)
    return ClassLabel("inconclusive", [], empty)
