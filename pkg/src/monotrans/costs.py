"""Convex non-decreasing cost functions on the half-line.

A cost bundles a vectorized evaluator with the metadata the rest of the
library needs: whether it grows superlinearly (f(t)/t -> inf) and, when one
exists, an inverse defined on [f(0), inf).  Analytic kinds get closed-form
inverses; `linear_plus_power` with a general exponent falls back to a
bracketed root find.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (
    InvalidCostParameter,
    InvalidExponent,
    NonConvexSample,
    NonPositiveEpsilon,
)


@dataclass(frozen=True)
class ConvexCost:
    """Convex, non-decreasing cost t >= 0 -> f(t) >= 0."""

    evaluator: Callable
    kind: str
    superlinear: bool
    inverse: Optional[Callable] = None
    params: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.evaluator(t)


def _numeric_inverse(evaluator) -> Callable:
    """Inverse of a strictly increasing evaluator via bracketed root finding."""

    def solve_one(y: float) -> float:
        f0 = float(evaluator(0.0))
        if y <= f0:
            return 0.0
        hi = 1.0
        while float(evaluator(hi)) < y:
            hi *= 2.0
            if hi > 1e300:
                raise InvalidCostParameter(f"cannot bracket inverse at y={y}")
        return brentq(lambda t: float(evaluator(t)) - y, 0.0, hi, xtol=1e-14, rtol=8.9e-16)

    def inv(y):
        ys = np.asarray(y, dtype=float)
        if ys.ndim == 0:
            return solve_one(float(ys))
        return np.array([solve_one(t) for t in ys.ravel()]).reshape(ys.shape)

    return inv


def check_convex_nondecreasing(evaluator, ts) -> bool:
    """Finite-difference sanity gate: slopes >= 0 and non-decreasing on ts."""
    ts = np.asarray(ts, dtype=float)
    fs = np.asarray(evaluator(ts), dtype=float)
    d = np.diff(fs) / np.diff(ts)
    scale = max(1.0, float(np.abs(fs).max()))
    return bool(np.all(d >= -1e-9 * scale) and np.all(np.diff(d) >= -1e-9 * scale))


def _power(p: float) -> ConvexCost:
    if not np.isfinite(p) or p < 1.0:
        raise InvalidExponent(f"power exponent must be >= 1, got {p}")
    if p == 1.0:
        return ConvexCost(lambda t: np.asarray(t, dtype=float) + 0.0, "power", False,
                          inverse=lambda y: np.asarray(y, dtype=float) + 0.0,
                          params={"p": 1.0})
    return ConvexCost(lambda t: t ** p, "power", True,
                      inverse=lambda y: y ** (1.0 / p), params={"p": float(p)})


def _exp() -> ConvexCost:
    return ConvexCost(np.exp, "exp", True, inverse=np.log, params={})


def _linear_plus_power(a: float, c: float, p: float) -> ConvexCost:
    if not np.isfinite(p) or p < 1.0:
        raise InvalidExponent(f"power exponent must be >= 1, got {p}")
    if a < 0.0 or c < 0.0:
        raise InvalidCostParameter(f"coefficients must be >= 0, got a={a}, c={c}")

    def ev(t):
        return a * t + c * t ** p

    if a == 0.0 and c == 0.0:
        inv = None
    elif c == 0.0:
        inv = lambda y: np.asarray(y, dtype=float) / a
    elif p == 1.0:
        inv = lambda y: np.asarray(y, dtype=float) / (a + c)
    elif p == 2.0:
        inv = lambda y: (-a + np.sqrt(a * a + 4.0 * c * np.asarray(y, dtype=float))) / (2.0 * c)
    else:
        inv = _numeric_inverse(ev)
    return ConvexCost(ev, "linear_plus_power", bool(c > 0.0 and p > 1.0), inverse=inv,
                      params={"a": float(a), "c": float(c), "p": float(p)})


def _sampled(t_samples, f_samples) -> ConvexCost:
    ts = np.asarray(t_samples, dtype=float)
    fs = np.asarray(f_samples, dtype=float)
    if ts.ndim != 1 or ts.shape != fs.shape or ts.size < 3:
        raise InvalidCostParameter("need matching 1D sample arrays of length >= 3")
    if not (np.isfinite(ts).all() and np.isfinite(fs).all()):
        raise InvalidCostParameter("samples must be finite")
    if ts[0] != 0.0 or np.any(np.diff(ts) <= 0):
        raise InvalidCostParameter("sample points must start at 0 and increase")
    if np.any(fs < 0):
        raise InvalidCostParameter("cost values must be >= 0")
    d = np.diff(fs) / np.diff(ts)
    scale = max(1.0, float(np.abs(fs).max()))
    if np.any(d < -1e-9 * scale):
        raise NonConvexSample("sampled cost is decreasing somewhere")
    if np.any(np.diff(d) < -1e-9 * scale):
        raise NonConvexSample("sampled cost fails the second-difference convexity gate")
    last = float(d[-1])

    def ev(t):
        t = np.asarray(t, dtype=float)
        inside = np.interp(np.minimum(t, ts[-1]), ts, fs)
        out = inside + np.maximum(t - ts[-1], 0.0) * last
        return float(out) if out.ndim == 0 else out

    return ConvexCost(ev, "sampled", False, inverse=None,
                      params={"t": ts.tolist(), "f": fs.tolist()})


def make_cost(kind: str, **params) -> ConvexCost:
    """Build a cost of the given kind.

    Kinds: "power" (p), "exp", "linear_plus_power" (a, c, p meaning
    a*t + c*t**p), "sampled" (t, f arrays, linearly interpolated).
    """
    if kind == "power":
        return _power(float(params["p"]))
    if kind == "exp":
        return _exp()
    if kind == "linear_plus_power":
        return _linear_plus_power(float(params.get("a", 0.0)),
                                  float(params.get("c", 0.0)),
                                  float(params.get("p", 1.0)))
    if kind == "sampled":
        return _sampled(params["t"], params["f"])
    raise InvalidCostParameter(f"unknown cost kind {kind!r}")


def superlinearize(f: ConvexCost, epsilon: float, f_tilde: ConvexCost) -> ConvexCost:
    """Cost t -> f(t) + epsilon * f_tilde(t); superlinear by construction."""
    if not epsilon > 0.0:
        raise NonPositiveEpsilon(f"epsilon must be > 0, got {epsilon}")
    if not f_tilde.superlinear:
        raise InvalidCostParameter("f_tilde must be superlinear")

    def ev(t):
        return f.evaluator(t) + epsilon * f_tilde.evaluator(t)

    probe = np.linspace(0.0, 100.0, 201)
    inv = _numeric_inverse(ev) if np.all(np.diff(ev(probe)) > 0) else None
    return ConvexCost(ev, "sum", True, inverse=inv,
                      params={"epsilon": float(epsilon), "base": f.kind, "tilde": f_tilde.kind})
