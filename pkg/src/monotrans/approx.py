"""Piecewise-affine approximants with nonvanishing slopes for sampled inputs.

Given a function sampled on a uniform dyadic grid, the depth-k approximant
averages f(|u'|) over the 2^k dyadic cells, pushes each cell mean through the
inverse of f to recover a slope magnitude, takes the sign of the value
increment across the cell, and integrates from the left endpoint.  When f is
strictly increasing with positive slope at 0 (e.g. t**2 + t), every cell mean
sits strictly above f(0) as soon as the derivative is not identically zero on
the cell, so the approximant's slopes never vanish while its energy converges
to that of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .costs import ConvexCost
from .errors import (
    DepthExceeded,
    NonFiniteValue,
    NonInvertibleCost,
    ProbeAtCriticalLevel,
)
from .functions import PiecewiseAffine
from .rearrange import monotone_transport, multiplicity, pushforward


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Uniform samples of a function on [a, b] with midpoint derivatives.

    The grid has 2**max_depth + 1 points; the derivative array holds one
    value per cell, at cell midpoints (supplied, or forward differences of
    the samples, which at midpoints coincide with central differences).
    """

    a: float
    b: float
    values: np.ndarray
    derivative: np.ndarray = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 3:
            raise NonFiniteValue("need a 1D sample array of length 2**k + 1, k >= 1")
        depth = int(round(math.log2(v.size - 1)))
        if 2 ** depth != v.size - 1 or depth < 1:
            raise NonFiniteValue(f"grid size {v.size} is not 2**k + 1")
        if not (self.b > self.a and np.isfinite(v).all()):
            raise NonFiniteValue("domain endpoints and samples must be finite, b > a")
        h = (self.b - self.a) / (v.size - 1)
        if self.derivative is None:
            d = np.diff(v) / h
        else:
            d = np.asarray(self.derivative, dtype=float)
            if d.shape != (v.size - 1,) or not np.isfinite(d).all():
                raise NonFiniteValue("derivative must hold one finite value per cell")
        v.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "derivative", d)
        object.__setattr__(self, "_depth", depth)

    @property
    def max_depth(self) -> int:
        return self._depth

    @property
    def step(self) -> float:
        return (self.b - self.a) / (self.values.size - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.values.size)

    @classmethod
    def from_callable(cls, fn, a: float, b: float, depth: int,
                      derivative_fn=None) -> "SampledFunction":
        xs = np.linspace(a, b, 2 ** depth + 1)
        vals = np.asarray([fn(x) for x in xs], dtype=float)
        deriv = None
        if derivative_fn is not None:
            mids = 0.5 * (xs[:-1] + xs[1:])
            deriv = np.asarray([derivative_fn(x) for x in mids], dtype=float)
        return cls(float(a), float(b), vals, deriv)


def dyadic_average(cell_values, k: int) -> np.ndarray:
    """Mean of a per-cell array over each of the 2**k dyadic intervals."""
    g = np.asarray(cell_values, dtype=float)
    depth = int(round(math.log2(g.size)))
    if 2 ** depth != g.size:
        raise NonFiniteValue(f"cell array size {g.size} is not a power of two")
    if k < 1:
        raise ValueError("depth k must be >= 1")
    if k > depth:
        raise DepthExceeded(f"depth {k} exceeds grid depth {depth}")
    if np.any(g < 0):
        raise ValueError("cell values must be >= 0")
    return g.reshape(2 ** k, -1).mean(axis=1)


def _require_invertible(f: ConvexCost):
    if f.inverse is None:
        raise NonInvertibleCost(f"cost kind {f.kind!r} has no inverse")
    d0 = (float(f(1e-12)) - float(f(0.0))) / 1e-12
    if not d0 > 1e-6:
        raise NonInvertibleCost(
            "cost derivative vanishes at 0; add a linear part first "
            "(e.g. linear_plus_power with a > 0)"
        )


def build_approximant(u: SampledFunction, f: ConvexCost, k: int) -> PiecewiseAffine:
    """Depth-k piecewise-affine approximant with slope magnitudes f^{-1}(cell means).

    Cells whose value increment is exactly zero get sign +1; the start value
    is anchored to the sample at a exactly.
    """
    _require_invertible(f)
    h = dyadic_average(np.asarray(f(np.abs(u.derivative)), dtype=float), k)
    step = (u.values.size - 1) // (2 ** k)
    ends = u.values[::step]
    inc = np.diff(ends)
    signs = np.where(inc < 0, -1.0, 1.0)
    slopes = signs * np.asarray(f.inverse(h), dtype=float)
    xs = u.grid[::step]
    width = (u.b - u.a) / (2 ** k)
    vals = u.values[0] + np.concatenate([[0.0], np.cumsum(slopes * width)])
    return PiecewiseAffine(xs, vals)


@dataclass(frozen=True)
class LevelReport:
    """Errors of one approximant against the sampled input."""

    k: int
    w11_error: float
    cost_error: float
    min_abs_slope: float


@dataclass(frozen=True)
class ApproximantSequenceReport:
    levels: tuple


def _approximant_cell_slopes(u: SampledFunction, approx: PiecewiseAffine) -> np.ndarray:
    reps = (u.values.size - 1) // approx.piece_slopes.size
    return np.repeat(approx.piece_slopes, reps)


def convergence_report(u: SampledFunction, f: ConvexCost,
                       k_list: Sequence[int]) -> ApproximantSequenceReport:
    """W^{1,1} and cost-composition errors of the approximants at each depth.

    The function part is integrated by the trapezoid rule on the sample
    grid; derivative-side integrands live on cells and are summed as cell
    value times cell width.
    """
    h = u.step
    rows = []
    for k in k_list:
        uk = build_approximant(u, f, int(k))
        vals = np.interp(u.grid, uk.breakpoints, uk.values)
        d = _approximant_cell_slopes(u, uk)
        func_err = float(np.trapezoid(np.abs(vals - u.values), dx=h))
        deriv_err = float(np.sum(np.abs(d - u.derivative)) * h)
        cost_err = float(np.sum(np.abs(
            np.asarray(f(np.abs(d)), dtype=float)
            - np.asarray(f(np.abs(u.derivative)), dtype=float))) * h)
        rows.append(LevelReport(int(k), func_err + deriv_err, cost_err,
                                float(np.min(np.abs(uk.piece_slopes)))))
    return ApproximantSequenceReport(tuple(rows))


def multiplicity_liminf_check(u: SampledFunction, f: ConvexCost,
                              k_list: Sequence[int],
                              probe_points: Sequence[float],
                              reference_depth: Optional[int] = None) -> list[bool]:
    """Finite-depth diagnostic of the lower bound on limiting branch counts.

    The true limiting count profile is a limit object; as a proxy, the
    profile of the finest-depth approximant stands in for it, and for the
    largest requested depth the minimum count over a one-cell window around
    each probe must not fall below the proxy count there.  A diagnostic, not
    a proof.
    """
    if not k_list:
        raise ValueError("k_list must be non-empty")
    k_top = int(max(k_list))
    ref_depth = int(reference_depth) if reference_depth is not None else u.max_depth
    u_ref = build_approximant(u, f, ref_depth)
    t_ref = monotone_transport(pushforward(u_ref), u_ref.domain)
    n_ref = multiplicity(u_ref, t_ref)
    u_top = build_approximant(u, f, k_top)
    t_top = monotone_transport(pushforward(u_top), u_top.domain)
    n_top = multiplicity(u_top, t_top)
    radius = 2.0 * (u.b - u.a) / 2 ** k_top
    cut_tol = 1e-9 * (u.b - u.a)
    results = []
    for x in probe_points:
        if float(np.min(np.abs(n_ref.cut_points - x))) <= cut_tol:
            raise ProbeAtCriticalLevel(f"probe {x} sits on a profile cut point")
        n_x = n_ref.count_at(float(x))
        if math.isinf(n_x):
            raise ProbeAtCriticalLevel(f"transport is flat at probe {x}")
        lo, hi = x - radius, x + radius
        sel = [c for i, c in enumerate(n_top.counts)
               if n_top.cut_points[i + 1] > lo and n_top.cut_points[i] < hi]
        results.append(bool(sel and min(sel) >= n_x))
    return results
