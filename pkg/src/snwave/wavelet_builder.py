"""Band-limited wavelet candidates as exact frequency-domain step profiles.

The central constructor is :func:`extend_bell`: a squared bell ``b^2`` given on
the window ``[e_n, b_n)`` determines ``|psi_hat|^2`` on all of ``S_n``. The
named families (:func:`build_family`) and the random generator used by the
property tests are built on top of it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from .exact_scalars import PhasePi, as_fraction, phase_sum_is_odd_pi
from .frequency_sets import (
    IntervalSet,
    SnGeometry,
    fn_set,
    msf_b_set,
    shannon_set,
    sn_geometry,
    wn_set,
)
from .profiles import PhaseProfile, StepProfile, overlay

__all__ = [
    "FrequencyWavelet",
    "ThetaCheck",
    "extend_bell",
    "mirror_bell",
    "validate_theta",
    "build_family",
    "FAMILIES",
    "random_bell",
    "random_candidate",
    "CANDIDATE_KINDS",
    "refine_on",
    "in_sn",
]

FAMILIES = ("gamma", "msf-a", "msf-b", "psi-sixone", "w-sixtwo", "shannon")
CANDIDATE_KINDS = ("valid", "broken-iii", "broken-v")


@dataclass(frozen=True)
class FrequencyWavelet:
    """``psi_hat = exp(i pi * phase) * sqrt(mag2)`` as exact step profiles.

    ``n`` names the set ``S_n`` the candidate was built for (``None`` for
    wavelets given directly, e.g. Shannon). ``params`` carries construction
    metadata and is ignored by equality.
    """

    mag2: StepProfile
    phase: PhaseProfile = field(default_factory=PhaseProfile)
    n: int | None = None
    family: str = "custom"
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.phase, PhaseProfile):
            object.__setattr__(self, "phase", PhaseProfile(self.phase.pieces))
        for lo, hi, v in self.mag2.pieces:
            if not 0 <= v <= 1:
                raise ValueError(f"|psi_hat|^2 = {v} outside [0, 1] on [{lo}, {hi})")

    mode = "exact-step"

    @cached_property
    def support(self) -> IntervalSet:
        return self.mag2.support()

    @cached_property
    def cells(self) -> tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]:
        """``(lo, hi, mag2, turns)`` on the support, constant on each cell."""
        tagged = [(lo, hi, (0, v)) for lo, hi, v in self.mag2.pieces]
        tagged += [(lo, hi, (1, v)) for lo, hi, v in self.phase.pieces]
        out = []
        for lo, hi, pays in overlay(tagged):
            m2 = t = Fraction(0)
            for side, v in pays:
                if side == 0:
                    m2 = v
                else:
                    t = v
            if m2:
                if out and out[-1][1] == lo and out[-1][2] == m2 and out[-1][3] == t:
                    out[-1] = (out[-1][0], hi, m2, t)
                else:
                    out.append((lo, hi, m2, t))
        return tuple(out)

    def with_phase(self, phase: PhaseProfile) -> "FrequencyWavelet":
        return FrequencyWavelet(self.mag2, phase, self.n, self.family, dict(self.params))

    def with_global_phase(self, c: PhasePi) -> "FrequencyWavelet":
        """Multiply ``psi_hat`` by ``exp(i c)``."""
        shift = PhaseProfile.indicator(self.support, c.turns)
        return self.with_phase(self.phase + shift)

    def with_mag2(self, mag2: StepProfile) -> "FrequencyWavelet":
        return FrequencyWavelet(mag2, self.phase, self.n, self.family, dict(self.params))

    def geometry(self) -> SnGeometry:
        if self.n is None:
            raise ValueError("wavelet has no declared S_n")
        return sn_geometry(self.n)


def in_sn(w: FrequencyWavelet) -> bool:
    """True when ``w`` declares an ``n`` and its support lies in ``S_n``."""
    return w.n is not None and w.support.issubset(sn_geometry(w.n).sn())


def refine_on(profiles, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction, tuple]]:
    """Partition ``[lo, hi)`` so every profile is constant on each cell (zeros included)."""
    points = {lo, hi}
    for p in profiles:
        for plo, phi, _ in p.pieces:
            if lo < plo < hi:
                points.add(plo)
            if lo < phi < hi:
                points.add(phi)
    pts = sorted(points)
    return [(x, y, tuple(p(x) for p in profiles)) for x, y in zip(pts, pts[1:])]


# ---------------------------------------------------------------------------
# bells


def _check_bell(geom: SnGeometry, bell2: StepProfile) -> None:
    e, b = geom.e.coeff, geom.b.coeff
    if not bell2.support().issubset(IntervalSet.interval(e, b)):
        raise ValueError(f"bell must be supported in [e_n, b_n) = [{e}, {b})pi")
    for lo, hi, v in bell2.pieces:
        if not 0 <= v <= 1:
            raise ValueError(f"bell value {v} outside [0, 1] on [{lo}, {hi})")


def mirror_bell(geom: SnGeometry, bell2: StepProfile) -> StepProfile:
    """Keep ``bell2`` on ``[e_n, pi)`` and set ``1 - bell2(2pi - xi)`` on ``[pi, b_n)``.

    The result satisfies ``b^2(xi) + b^2(2pi - xi) = 1`` on the window, which
    is the evenness criterion for wavelets supported in ``S_n``.
    """
    e = geom.e.coeff
    left = bell2.cells(e, 1)
    mirrored = [(2 - hi, 2 - lo, 1 - v) for lo, hi, v in left]
    return StepProfile([c for c in left if c[2]] + mirrored)


def extend_bell(geom: SnGeometry, bell2: StepProfile, mirror: bool = False) -> StepProfile:
    """Extend ``b^2`` from ``[e_n, b_n)`` to the unique admissible ``|psi_hat|^2`` on ``S_n``.

    The four images of each bell cell are
    ``xi`` (value ``v``), ``2^(n-1) xi`` (``1 - v``), ``xi - 2pi`` (``1 - v``)
    and ``2^(n-1)(xi - 2pi)`` (``v``); ``+-[a_n, e_n)`` get the value 1.
    """
    _check_bell(geom, bell2)
    if mirror:
        bell2 = mirror_bell(geom, bell2)
    a, b, _, _, e = geom.coeffs
    s = geom.half_scale
    pieces = [(a, e, 1), (-e, -a, 1)]
    for lo, hi, v in bell2.cells(e, b):
        pieces.append((lo, hi, v))
        pieces.append((s * lo, s * hi, 1 - v))
        pieces.append((lo - 2, hi - 2, 1 - v))
        pieces.append((s * (lo - 2), s * (hi - 2), v))
    return StepProfile(pieces)


def triple_intersection(geom: SnGeometry, mag2: StepProfile) -> IntervalSet:
    """``[e_n, b_n) n supp b n 2^-(n-1) supp b``, where the phase constraint lives."""
    supp = mag2.support()
    window = IntervalSet.interval(geom.e.coeff, geom.b.coeff)
    return window & supp & supp.dilate(-(geom.n - 1))


class ThetaCheck(NamedTuple):
    """Outcome of the phase check.

    ``witnesses`` holds ``(lo, hi, m)`` with the alternating phase sum equal to
    ``(2m + 1) pi`` on ``[lo, hi)``; ``violations`` holds ``(lo, hi, sum_turns)``.
    """

    ok: bool
    witnesses: list
    violations: list


def validate_theta(geom: SnGeometry, mag2: StepProfile, phase: PhaseProfile) -> ThetaCheck:
    """Check the coupled-phase condition on the triple intersection, cell by cell."""
    n = geom.n
    quad = [
        phase,
        phase.pullback_dilate(n - 1).pullback_translate(-1),
        phase.pullback_translate(-1),
        phase.pullback_dilate(n - 1),
    ]
    witnesses, violations = [], []
    for lo, hi in triple_intersection(geom, mag2).pieces:
        for clo, chi, (t1, t2, t3, t4) in refine_on(quad, lo, hi):
            ok, m = phase_sum_is_odd_pi(PhasePi(t1), PhasePi(t2), PhasePi(t3), PhasePi(t4))
            if ok:
                witnesses.append((clo, chi, m))
            else:
                violations.append((clo, chi, t1 + t2 - t3 - t4))
    return ThetaCheck(not violations, witnesses, violations)


def coupled_phase(geom: SnGeometry, mag2: StepProfile) -> PhaseProfile:
    """``theta = pi`` on the triple intersection and 0 elsewhere; always admissible."""
    return PhaseProfile.indicator(triple_intersection(geom, mag2), 1)


# ---------------------------------------------------------------------------
# named families


def _need_n(name: str, n, lowest: int = 3) -> int:
    if not isinstance(n, int) or n < lowest:
        raise ValueError(f"family {name!r} needs an integer n >= {lowest}, got {n!r}")
    return n


def build_family(name: str, n: int | None = None, p: int | None = None) -> FrequencyWavelet:
    """Exact construction of a named wavelet.

    ``gamma``       MSF wavelet with ``|psi_hat| = chi_{W_n}``
    ``msf-a``       symmetric two-interval MSF wavelet (Journe at n=3)
    ``msf-b``       MSF wavelet with parameter ``p`` (Lemarie at n=3, p=1)
    ``psi-sixone``  wavelet of Weber class ``M_{n-2}`` with values ``+-1/sqrt2``
    ``w-sixtwo``    class ``M_0`` wavelet from the bell ``1/sqrt2`` on ``[e_n, pi)``
    ``shannon``     ``chi`` of ``[-2pi, -pi) u [pi, 2pi)``; ``n`` ignored
    """
    if name == "shannon":
        return FrequencyWavelet(StepProfile.indicator(shannon_set()), family="shannon")
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    n = _need_n(name, n)
    geom = sn_geometry(n)
    a, b, c, d, e = geom.coeffs
    s = geom.half_scale

    if name == "gamma":
        return FrequencyWavelet(StepProfile.indicator(wn_set(n)), n=n, family=name)
    if name == "msf-a":
        bell = StepProfile([(e, 1, 1)])
        return FrequencyWavelet(extend_bell(geom, bell), n=n, family=name)
    if name == "msf-b":
        if p is None:
            raise ValueError("msf-b needs p")
        mag2 = StepProfile.indicator(msf_b_set(n, p))
        return FrequencyWavelet(mag2, n=n, family=name, params={"p": p})
    if name == "psi-sixone":
        half = Fraction(1, 2)
        mag2 = StepProfile(
            [
                (-b, -a, 1),
                (c, a / 2 + s, 1),
                (e / 2 + s, d, 1),
                (a / 2, e / 2, half),
                (a, e, half),
                (a / 2 + s, e / 2 + s, half),
                (a + 2 * s, e + 2 * s, half),
            ]
        )
        phase = PhaseProfile([(a + 2 * s, e + 2 * s, 1)])
        w = FrequencyWavelet(mag2, phase, n=n, family=name)
        assert w.support == fn_set(n)
        return w
    # w-sixtwo
    bell = StepProfile([(e, 1, Fraction(1, 2))])
    mag2 = extend_bell(geom, bell)
    return FrequencyWavelet(mag2, PhaseProfile([(e, 1, 1)]), n=n, family=name)


# ---------------------------------------------------------------------------
# random candidates for property tests


def _random_value(rng: random.Random) -> Fraction:
    r = rng.random()
    if r < 0.15:
        return Fraction(0)
    if r < 0.3:
        return Fraction(1)
    q = rng.randint(2, 9)
    return Fraction(rng.randint(1, q - 1), q)


def random_bell(geom: SnGeometry, rng: random.Random, even: bool = False) -> StepProfile:
    """Random rational step bell on ``[e_n, b_n)`` (on ``[e_n, pi)`` when ``even``)."""
    e, b = geom.e.coeff, geom.b.coeff
    top = Fraction(1) if even else b
    grid = rng.choice((4, 6, 8, 12, 16))
    cuts = sorted(rng.sample(range(1, grid), rng.randint(0, min(4, grid - 1))))
    marks = [e] + [e + (top - e) * Fraction(u, grid) for u in cuts] + [top]
    bell = StepProfile((lo, hi, _random_value(rng)) for lo, hi in zip(marks, marks[1:]))
    return mirror_bell(geom, bell) if even else bell


def random_candidate(geom: SnGeometry, seed: int, kind: str = "valid", even: bool = False) -> FrequencyWavelet:
    """Deterministic random candidate supported in ``S_n``.

    The sequence is Python's ``random.Random(seed)`` (Mersenne Twister).

    ``valid``       random bell, extended, with the coupled phase (pi on the
                    triple intersection)
    ``broken-iii``  valid, then one ``[c_n, d_n)`` value shifted by a rational
                    ``eps != 0``; ``params["perturbed"]`` is that cell
    ``broken-v``    valid magnitudes but ``theta = 0`` on a nonempty triple
                    intersection; ``params["perturbed"]`` lists its cells
    """
    if kind not in CANDIDATE_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    rng = random.Random(seed)
    bell = random_bell(geom, rng, even)
    e, b = geom.e.coeff, geom.b.coeff
    if kind == "broken-v" and not any(0 < v < 1 for _, _, v in bell.pieces):
        cells = bell.cells(e, b)
        lo, hi, _ = cells[rng.randrange(len(cells))]
        bell = StepProfile([c for c in cells if c[:2] != (lo, hi)] + [(lo, hi, Fraction(1, 2))])
    mag2 = extend_bell(geom, bell)
    params = {"seed": seed, "kind": kind, "even": even}

    if kind == "broken-v":
        tri = triple_intersection(geom, mag2)
        params["perturbed"] = [list(pc) for pc in tri.pieces]
        return FrequencyWavelet(mag2, PhaseProfile(), n=geom.n, family="random", params=params)

    phase = coupled_phase(geom, mag2)
    if kind == "broken-iii":
        s = geom.half_scale
        cells = bell.cells(e, b)
        lo, hi, v = cells[rng.randrange(len(cells))]
        target = (s * lo, s * hi)
        old = 1 - v
        eps = Fraction(1, rng.randint(2, 9))
        if old + eps > 1:
            eps = -eps
        mag2 = mag2 + StepProfile([(target[0], target[1], eps)])
        params["perturbed"] = [list(target)]
        params["eps"] = eps
    return FrequencyWavelet(mag2, phase, n=geom.n, family="random", params=params)
