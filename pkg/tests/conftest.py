"""Independent oracles: brute-force point evaluation of the lattice sums.

These never use the package's enumeration bounds. Index ranges are simply
taken far wider than any support used in the tests.
"""

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

from snwave.frequency_sets import lemma_rows, sn_geometry

# exact rational arithmetic has uneven per-example cost; timing is not what these tests check
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

J_RANGE = range(-60, 61)
K_RANGE = range(-400, 401)


def psi_hat(w, x):
    m2 = w.mag2(x)
    if not m2:
        return 0j
    return math.sqrt(m2) * cmath.exp(1j * math.pi * float(w.phase(x)))


def rho_at(w, x, js=J_RANGE):
    """sum_j |psi_hat(2^j x)|^2, exact."""
    return sum(w.mag2(x * Fraction(2) ** j) for j in js)


def translates_at(w, x, ks=K_RANGE):
    """sum_k |psi_hat(x + 2k)|^2, exact (units of pi)."""
    return sum(w.mag2(x + 2 * k) for k in ks)


def tm_at(w, m, x):
    return sum(psi_hat(w, x * 2**j) * psi_hat(w, (x + 2 * m) * 2**j).conjugate() for j in range(0, 60))


def eq4_at(w, j, x):
    return sum(psi_hat(w, x + 2 * k) * psi_hat(w, (x + 2 * k) * 2**j).conjugate() for k in K_RANGE)


def dimension_at(w, x):
    return sum(w.mag2((x + 2 * k) * Fraction(2) ** j) for j in range(1, 40) for k in range(-300, 301))


def random_points(rng, count, lo=-6, hi=6):
    """Rationals with a large prime denominator, so they avoid every breakpoint in play."""
    q = 1000003
    return [Fraction(rng.randint(lo * q, hi * q), q) for _ in range(count)]


def trapezoid_oracle(w, xs, nodes=10**6):
    """psi(x) by the trapezoid rule, cell by cell, with nodes on every cell endpoint."""
    cells = w.cells
    total = sum(float(hi - lo) for lo, hi, _, _ in cells)
    out = np.zeros(len(xs), dtype=complex)
    for lo, hi, m2, t in cells:
        count = max(2, int(nodes * float(hi - lo) / total))
        xi = np.linspace(float(lo) * math.pi, float(hi) * math.pi, count)
        amp = math.sqrt(m2) * cmath.exp(1j * math.pi * float(t))
        for i, x in enumerate(xs):
            out[i] += amp * np.trapezoid(np.exp(1j * xi * x), xi)
    return out / (2 * math.pi)


def table_row(n, row):
    """Admissible translation and dilation moves per row, transcribed by hand."""
    s = 1 << (n - 1)
    return {
        "[a,e)": ({0}, {0}),
        "[e,b)": ({0, -1}, {0, n - 1}),
        "[c,d)": ({0, -s}, {0, -(n - 1)}),
        "[-e,-a)": ({0}, {0}),
        "[-b,-e)": ({0, 1}, {0, n - 1}),
        "[-d,-c)": ({0, s}, {0, -(n - 1)}),
    }[row]


def brute_force_moves(n, row, samples=100, seed=0):
    """Moves observed on random interior points, searching a box much wider than needed.

    Everything is scaled to one common denominator so the membership tests are integer comparisons.
    """
    g = sn_geometry(n)
    lo, hi = lemma_rows(g)[row].bounds()
    scale = (2**n - 1) * 10**6 * 2 ** (n + 2)
    pieces = [(int(p * scale), int(q * scale)) for p, q in g.sn().pieces]
    two = 2 * scale
    rng = random.Random(seed)
    ks, js = set(), set()
    for _ in range(samples):
        x = lo + (hi - lo) * Fraction(rng.randint(1, 10**6 - 1), 10**6)
        xs = x * scale
        assert xs.denominator == 1
        xs = int(xs)
        ks |= {k for k in range(-(2 ** (n + 1)), 2 ** (n + 1) + 1) if any(p <= xs + two * k < q for p, q in pieces)}
        for j in range(-(n + 2), n + 3):
            # compare x * 2^j against the pieces without leaving the integers
            y, pp = (xs << j, pieces) if j >= 0 else (xs, [(p << -j, q << -j) for p, q in pieces])
            if any(p <= y < q for p, q in pp):
                js.add(j)
    return ks, js


@pytest.fixture
def rng():
    return random.Random(20240611)
