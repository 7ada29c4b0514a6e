"""Shared fixtures and independent oracles.

The oracles deliberately avoid the library's band decomposition: sublevel
measures are computed piece by piece from the affine formula, and preimage
counts by scanning each piece for a strict crossing.  Tests freeze expected
values computed through these, never through the code under test.
"""

import numpy as np
import pytest

from monotrans import make_piecewise_affine


def sublevel_measure(u, y):
    """Lebesgue measure of {x : u(x) <= y}, summed piece by piece."""
    total = 0.0
    x, v = u.breakpoints, u.values
    for i in range(len(x) - 1):
        x0, x1, v0, v1 = x[i], x[i + 1], v[i], v[i + 1]
        length = x1 - x0
        lo, hi = min(v0, v1), max(v0, v1)
        if hi <= y:
            total += length
        elif lo >= y:
            if lo == y and v0 == v1:
                total += length
        else:
            total += length * (y - lo) / (hi - lo)
    return total


def crossing_count(u, y):
    """Number of pieces whose open image straddles the level y."""
    v = u.values
    lo = np.minimum(v[:-1], v[1:])
    hi = np.maximum(v[:-1], v[1:])
    return int(np.sum((lo < y) & (y < hi)))


def uniform_distance(f, g, n=2001):
    """Sup distance between two piecewise-affine maps on a shared domain."""
    xs = np.linspace(f.a, f.b, n)
    return float(np.max(np.abs(f(xs) - g(xs))))


@pytest.fixture
def tent():
    return make_piecewise_affine([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])


@pytest.fixture
def steep_vee():
    """Rises with slope 1 on [0, 0.75], falls with slope -3 on [0.75, 1]."""
    return make_piecewise_affine([0.0, 0.75, 1.0], [0.0, 0.75, 0.0])


@pytest.fixture
def sawtooth4():
    """Covers [0, 1] four times with slopes of modulus 4."""
    return make_piecewise_affine([0.0, 0.25, 0.5, 0.75, 1.0],
                                 [0.0, 1.0, 0.0, 1.0, 0.0])
