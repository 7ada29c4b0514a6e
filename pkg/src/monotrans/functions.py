"""Continuous piecewise-affine functions on a closed bounded interval.

A function is stored as strictly increasing breakpoints plus the value at
each breakpoint, and is linear in between, so continuity holds by
construction.  Slopes may vanish (flat pieces are legal at this layer;
consumers that need nonvanishing derivatives check for themselves).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    LengthMismatch,
    NonFiniteValue,
    NonIncreasingBreakpoints,
    OutOfDomain,
)

# Consecutive breakpoints closer than GAP_RTOL * span are rejected rather
# than merged, so downstream level decompositions stay unambiguous.
GAP_RTOL = 1e-12

# Slack granted when checking whether an evaluation point is inside the
# domain; points within it are clamped to the boundary.
DOMAIN_RTOL = 1e-9


@dataclass(frozen=True)
class Interval:
    """Closed bounded interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise NonFiniteValue(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise NonIncreasingBreakpoints(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.a - tol <= x <= self.b + tol


@dataclass(frozen=True, eq=False)
class PiecewiseAffine:
    """Continuous piecewise-affine function given by breakpoints and values."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or v.ndim != 1 or x.size != v.size:
            raise LengthMismatch(
                f"breakpoints ({x.size}) and values ({v.size}) must be 1D of equal length"
            )
        if x.size < 2:
            raise LengthMismatch("need at least two breakpoints")
        if not (np.isfinite(x).all() and np.isfinite(v).all()):
            raise NonFiniteValue("breakpoints and values must be finite")
        span = x[-1] - x[0]
        if span <= 0:
            raise NonIncreasingBreakpoints("breakpoints must increase")
        gaps = np.diff(x)
        if np.any(gaps <= GAP_RTOL * span):
            raise NonIncreasingBreakpoints(
                f"breakpoints must be strictly increasing with gaps > {GAP_RTOL:g} * span"
            )
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", v)
        s = np.diff(v) / gaps
        s.setflags(write=False)
        object.__setattr__(self, "_slopes", s)

    @property
    def a(self) -> float:
        return float(self.breakpoints[0])

    @property
    def b(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def domain(self) -> Interval:
        return Interval(self.a, self.b)

    @property
    def piece_slopes(self) -> np.ndarray:
        """Slope of each piece, in breakpoint order."""
        return self._slopes

    @property
    def piece_lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def __call__(self, x):
        return evaluate(self, x)


def make_piecewise_affine(breakpoints, values) -> PiecewiseAffine:
    """Validate and build a PiecewiseAffine from two equal-length sequences."""
    return PiecewiseAffine(np.asarray(breakpoints, dtype=float), np.asarray(values, dtype=float))


def evaluate(u: PiecewiseAffine, x):
    """Evaluate u at x (scalar or array) by linear interpolation.

    Points outside [a, b] beyond a small relative slack raise OutOfDomain;
    points within the slack are clamped to the boundary.
    """
    xs = np.asarray(x, dtype=float)
    slack = DOMAIN_RTOL * (u.b - u.a)
    if np.any(xs < u.a - slack) or np.any(xs > u.b + slack):
        raise OutOfDomain(f"point {x!r} outside [{u.a}, {u.b}]")
    xs = np.clip(xs, u.a, u.b)
    out = np.interp(xs, u.breakpoints, u.values)
    if np.isscalar(x) or getattr(x, "ndim", 0) == 0:
        return float(out)
    return out


def slopes(u: PiecewiseAffine) -> list[tuple[Interval, float]]:
    """One (open interval, slope) pair per piece, in order."""
    x = u.breakpoints
    return [
        (Interval(float(x[i]), float(x[i + 1])), float(s))
        for i, s in enumerate(u.piece_slopes)
    ]


def reflect(u: PiecewiseAffine) -> PiecewiseAffine:
    """Mirror image x -> u(a + b - x) on the same interval."""
    c = u.a + u.b
    return PiecewiseAffine((c - u.breakpoints)[::-1], u.values[::-1])


def restrict(u: PiecewiseAffine, sub: Interval) -> PiecewiseAffine:
    """Restriction of u to a subinterval of its domain."""
    slack = DOMAIN_RTOL * (u.b - u.a)
    if sub.a < u.a - slack or sub.b > u.b + slack:
        raise OutOfDomain(f"[{sub.a}, {sub.b}] is not inside [{u.a}, {u.b}]")
    lo, hi = max(sub.a, u.a), min(sub.b, u.b)
    inner = u.breakpoints[(u.breakpoints > lo) & (u.breakpoints < hi)]
    gap_tol = GAP_RTOL * (hi - lo) * 10.0
    keep = inner[(inner - lo > gap_tol) & (hi - inner > gap_tol)]
    xs = np.concatenate([[lo], keep, [hi]])
    return PiecewiseAffine(xs, np.interp(xs, u.breakpoints, u.values))


def random_piecewise_affine(
    seed: int,
    pieces: int,
    slope_range: tuple[float, float] = (0.1, 10.0),
    interval: Interval = Interval(0.0, 1.0),
    monotone: bool = False,
) -> PiecewiseAffine:
    """Deterministic random function with |slopes| drawn from slope_range.

    Signs are random unless `monotone`, in which case all pieces rise.
    Passing a slope_range bounded away from zero yields a nonvanishing
    derivative everywhere.
    """
    if pieces < 1:
        raise ValueError("pieces must be >= 1")
    lo, hi = slope_range
    if not (0.0 <= lo <= hi):
        raise ValueError(f"bad slope range {slope_range}")
    rng = np.random.default_rng(seed)
    gaps = rng.uniform(0.5, 1.5, size=pieces)
    gaps *= interval.length / gaps.sum()
    xs = interval.a + np.concatenate([[0.0], np.cumsum(gaps)])
    xs[-1] = interval.b
    mags = rng.uniform(lo, hi, size=pieces)
    signs = np.ones(pieces) if monotone else rng.choice([-1.0, 1.0], size=pieces)
    vs = np.concatenate([[0.0], np.cumsum(mags * signs * np.diff(xs))])
    return PiecewiseAffine(xs, vs)
