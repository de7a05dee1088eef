"""Closed-form passage from step profiles to x-space.

``psi(x) = (1/2pi) int psi_hat(xi) exp(i xi x) d xi``. Every cell of a step
profile integrates to an exponential difference, so samples and inner
products come out in closed form (double precision), with no FFT grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .wavelet_builder import FrequencyWavelet

__all__ = [
    "TimeSamples",
    "exp_integral",
    "is_real",
    "sample_time",
    "psi_at",
    "gram_entry",
    "gram_matrix",
    "piece_norms_sq",
    "write_csv",
]

_SERIES_CUTOFF = 1e-6


def exp_integral(beta, lo, hi):
    """``int_lo^hi exp(i beta xi) d xi``, vectorized over ``beta`` (and the endpoints).

    A four-term series replaces the difference quotient when ``|beta (hi - lo)|``
    is tiny, avoiding cancellation.
    """
    beta = np.asarray(beta, dtype=float)
    lo = np.asarray(lo, dtype=float)
    length = np.asarray(hi, dtype=float) - lo
    z = 1j * beta * length
    small = np.abs(z) < _SERIES_CUTOFF
    safe_beta = np.where(small, 1.0, beta)
    with np.errstate(all="ignore"):
        quotient = np.expm1(np.where(small, 0.0, z)) / (1j * safe_beta)
    series = length * (1 + z / 2 + z * z / 6 + z * z * z / 24)
    return np.exp(1j * beta * lo) * np.where(small, series, quotient)


def _cell_arrays(w: FrequencyWavelet):
    cells = w.cells
    lo = np.array([float(c[0]) for c in cells]) * math.pi
    hi = np.array([float(c[1]) for c in cells]) * math.pi
    amp = np.array([math.sqrt(c[2]) for c in cells]) * np.exp(1j * math.pi * np.array([float(c[3]) for c in cells]))
    return lo, hi, amp


def is_real(w: FrequencyWavelet) -> bool:
    """``psi`` is real iff ``psi_hat(-xi) = conj psi_hat(xi)``: even modulus, odd phase."""
    if w.mag2 != w.mag2.reflect():
        return False
    neg = w.phase.reflect().scale(-1)
    return all(w.phase(m) == neg(m) for m in _cell_midpoints(w))


def _cell_midpoints(w: FrequencyWavelet):
    return [(c[0] + c[1]) / 2 for c in w.cells]


@dataclass(frozen=True)
class TimeSamples:
    xs: np.ndarray
    values: np.ndarray
    real: bool

    def to_rows(self):
        for x, v in zip(self.xs, self.values):
            yield float(x), float(v.real), float(v.imag)


def psi_at(w: FrequencyWavelet, xs) -> np.ndarray:
    """``psi(x)`` at arbitrary points."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    lo, hi, amp = _cell_arrays(w)
    parts = exp_integral(xs[:, None], lo[None, :], hi[None, :])
    return parts @ amp / (2 * math.pi)


def sample_time(w: FrequencyWavelet, x_min: float, x_max: float, count: int) -> TimeSamples:
    """``count`` equally spaced samples of ``psi`` on ``[x_min, x_max]``."""
    if count < 2:
        raise ValueError("need at least 2 sample points")
    if not isinstance(w, FrequencyWavelet):
        raise TypeError("sample_time needs an exact-step wavelet")
    xs = np.linspace(x_min, x_max, count)
    values = psi_at(w, xs)
    real = is_real(w)
    if real:
        values = values.real.astype(complex)
    return TimeSamples(xs, values, real)


def _pair_cells(w: FrequencyWavelet, j: int, j2: int):
    """Intersections of the cells of ``psi_hat(2^-j .)`` and ``psi_hat(2^-j2 .)``."""
    lo, hi, amp = _cell_arrays(w)
    s1, s2 = 2.0**j, 2.0**j2
    a_lo, a_hi = lo * s1, hi * s1
    b_lo, b_hi = lo * s2, hi * s2
    clo = np.maximum(a_lo[:, None], b_lo[None, :])
    chi = np.minimum(a_hi[:, None], b_hi[None, :])
    keep = clo < chi
    weight = (amp[:, None] * np.conj(amp)[None, :])[keep] * 2.0 ** (-(j + j2) / 2)
    return clo[keep], chi[keep], weight


def gram_entry(w: FrequencyWavelet, j: int, k: int, j2: int, k2: int) -> complex:
    """``<psi_{j,k}, psi_{j2,k2}>`` with ``psi_{j,k}(x) = 2^{j/2} psi(2^j x - k)``."""
    if abs(j) > 30 or abs(j2) > 30:
        raise ValueError("|j| must not exceed 30")
    return complex(gram_matrix(w, [j], [k], [j2], [k2])[0, 0])


def gram_matrix(w: FrequencyWavelet, js, ks, js2=None, ks2=None) -> np.ndarray:
    """Gram matrix over index pairs ``(j, k)`` (row) and ``(j2, k2)`` (column), ``j`` major."""
    js2 = js if js2 is None else js2
    ks2 = ks if ks2 is None else ks2
    ks_a = np.asarray(ks, dtype=float)
    ks_b = np.asarray(ks2, dtype=float)
    out = np.zeros((len(js) * len(ks_a), len(js2) * len(ks_b)), dtype=complex)
    for r, j in enumerate(js):
        for c, j2 in enumerate(js2):
            lo, hi, weight = _pair_cells(w, j, j2)
            if lo.size == 0:
                continue
            # psi_hat_{j,k}(xi) conj psi_hat_{j2,k2}(xi) carries exp(i beta xi) with this beta
            beta = -ks_a[:, None] * 2.0**-j + ks_b[None, :] * 2.0**-j2
            ints = exp_integral(beta[..., None], lo, hi)
            block = ints @ weight / (2 * math.pi)
            out[r * len(ks_a) : (r + 1) * len(ks_a), c * len(ks_b) : (c + 1) * len(ks_b)] = block
    return out


def piece_norms_sq(w: FrequencyWavelet) -> np.ndarray:
    """``||psi_cell||^2`` for the x-space contribution of each frequency cell.

    The cells are disjoint in frequency, so these add up to ``||psi||^2``.
    """
    lo, hi, amp = _cell_arrays(w)
    return np.abs(amp) ** 2 * (hi - lo) / (2 * math.pi)


def write_csv(samples: TimeSamples, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["x", "re", "im"])
        for x, re, im in samples.to_rows():
            out.writerow([f"{x:.17g}", f"{re:.17g}", f"{im:.17g}"])
