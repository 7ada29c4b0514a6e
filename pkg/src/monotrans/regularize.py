"""Lipschitz regularization of grid functions by capped inf-convolution.

The j-envelope of g is min(j, inf_y { j|x-y| + g(y) }): the largest
j-Lipschitz function capped at j lying below g.  On a uniform grid this is
an exact min-plus distance transform, computed in one forward and one
backward sweep; the quadratic-time direct minimization is kept as a test
oracle.  Infinite entries act as absorbing elements and disappear after the
cap as long as one finite value exists.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GridMismatch, NonFiniteValue, NonPositiveJ

INF = math.inf


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Extended-real values sampled on a uniform grid over [a, b]."""

    a: float
    b: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise NonFiniteValue("need a 1D array of at least two values")
        if not self.b > self.a:
            raise NonFiniteValue(f"need b > a, got [{self.a}, {self.b}]")
        if np.any(np.isnan(v)) or np.any(v == -INF):
            raise NonFiniteValue("values must be finite or +inf")
        if not np.any(np.isfinite(v)):
            raise NonFiniteValue("need at least one finite value")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return (self.b - self.a) / (self.values.size - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.values.size)

    def aligned_with(self, other: "GridFunction") -> bool:
        return (self.values.size == other.values.size
                and self.a == other.a and self.b == other.b)


def _sweep(values: np.ndarray, jdx: float) -> np.ndarray:
    """One-directional envelope: best source to the left of (or at) each node.

    Tracks the source value and its step distance so every candidate is
    evaluated as source + jdx * steps, the same expression the brute-force
    oracle uses.
    """
    out = np.empty_like(values)
    src, steps = INF, 0
    for i, g in enumerate(values):
        steps += 1
        carried = src + jdx * steps
        if g <= carried:
            src, steps = g, 0
            out[i] = g
        else:
            out[i] = carried
    return out


def inf_convolution(g: GridFunction, j: float) -> GridFunction:
    """Capped j-Lipschitz envelope min(j, min_y(j|x-y| + g(y))) on the grid."""
    if not j > 0:
        raise NonPositiveJ(f"need j > 0, got {j}")
    jdx = j * g.dx
    fwd = _sweep(g.values, jdx)
    bwd = _sweep(g.values[::-1], jdx)[::-1]
    return GridFunction(g.a, g.b, np.minimum(j, np.minimum(fwd, bwd)))


def inf_convolution_bruteforce(g: GridFunction, j: float) -> GridFunction:
    """Quadratic-time direct minimization; oracle for the two-pass sweep."""
    if not j > 0:
        raise NonPositiveJ(f"need j > 0, got {j}")
    jdx = j * g.dx
    idx = np.arange(g.values.size)
    dist = jdx * np.abs(idx[:, None] - idx[None, :]).astype(float)
    out = np.min(g.values[None, :] + dist, axis=1)
    return GridFunction(g.a, g.b, np.minimum(j, out))


def monotone_envelope_check(g: GridFunction, j_list: Sequence[float]) -> bool:
    """True iff envelopes grow pointwise with j and have converged where checkable.

    Convergence is tested at the largest j only at grid points where it is
    forced: g finite, at most j, and within j-Lipschitz reach of both
    neighbors (a necessary condition; points failing it are skipped).
    """
    js = [float(j) for j in j_list]
    if any(j2 <= j1 for j1, j2 in zip(js, js[1:])):
        raise ValueError("j_list must be strictly ascending")
    envs = [inf_convolution(g, j).values for j in js]
    for lo, hi in zip(envs, envs[1:]):
        if np.any(hi < lo - 1e-12):
            return False
    j_top = js[-1]
    v = g.values
    env = envs[-1]
    reach = j_top * g.dx + 1e-12
    with np.errstate(invalid="ignore"):
        step_ok = np.abs(v[1:] - v[:-1]) <= reach  # False at inf/inf pairs (NaN)
    ok_left = np.empty(v.size, dtype=bool)
    ok_right = np.empty(v.size, dtype=bool)
    ok_left[0] = ok_right[-1] = True
    ok_left[1:] = step_ok
    ok_right[:-1] = step_ok
    checkable = np.isfinite(v) & (v <= j_top) & ok_left & ok_right
    return bool(np.all(np.abs(env[checkable] - v[checkable]) <= 1e-12))


class CheckStatus(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


def ordering_check(n_k_profiles: Sequence[GridFunction],
                   m_estimate: GridFunction, j: float) -> CheckStatus:
    """Ordering between regularized count profiles and the regularized limit.

    Requires every regularized profile to sit below its original, and the
    stabilized large-k envelope to dominate the envelope of the limit
    estimate.  If the envelope sequence has not stabilized (successive
    sup-norm difference below 1e-9), no limit is fabricated and the check
    reports INCONCLUSIVE.
    """
    if not n_k_profiles:
        raise GridMismatch("need at least one count profile")
    for p in n_k_profiles:
        if not p.aligned_with(m_estimate):
            raise GridMismatch("profiles and limit estimate must share one grid")
    envs = []
    for p in n_k_profiles:
        env = inf_convolution(p, j)
        finite = np.isfinite(p.values)
        if np.any(env.values[finite] > p.values[finite] + 1e-12):
            return CheckStatus.FAIL
        envs.append(env.values)
    if len(envs) > 1:
        if float(np.max(np.abs(envs[-1] - envs[-2]))) >= 1e-9:
            return CheckStatus.INCONCLUSIVE
    h_j = envs[-1]
    m_j = inf_convolution(m_estimate, j).values
    if np.any(h_j < m_j - 1e-9):
        return CheckStatus.FAIL
    return CheckStatus.PASS
