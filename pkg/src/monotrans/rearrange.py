"""Image measures, the monotone rearrangement, and multiplicity profiles.

For a continuous piecewise-affine u on [a, b], the image of Lebesgue measure
under u is a finite sum of constant-density pieces (one per band between
consecutive critical values, each non-flat piece of slope s contributing
1/|s| on its image) plus one atom per flat level (mass = flat length).

The non-decreasing map with the same image measure is the quantile function
of that measure shifted onto [a, b]: density d over a value band becomes a
rising piece of slope 1/d, an atom of mass m becomes a flat piece of length
m.  The multiplicity profile counts, on each rising band, how many branches
of u cover the corresponding value band; flat bands carry the infinity
sentinel and contribute via the convention count * 0 = 0 downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CriticalLevel,
    DisconnectedSupport,
    FlatTransport,
    MassMismatch,
    NonFiniteValue,
    TransportMismatch,
)
from .functions import Interval, PiecewiseAffine

INF = math.inf

# Critical values closer than LEVEL_RTOL * (value range) are merged into one
# level; keeps the band decomposition stable under float noise.
LEVEL_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Measure1D:
    """Finite measure on the line: piecewise-constant density plus atoms."""

    density_pieces: tuple
    atoms: tuple
    total_mass: float = None

    def __post_init__(self):
        pieces = tuple((Interval(float(iv.a), float(iv.b)) if isinstance(iv, Interval)
                        else Interval(float(iv[0]), float(iv[1])), float(d))
                       for iv, d in self.density_pieces)
        atoms = tuple((float(y), float(m)) for y, m in self.atoms)
        for _, d in pieces:
            if not np.isfinite(d) or d < 0:
                raise NonFiniteValue(f"density must be finite and >= 0, got {d}")
        los = [iv.a for iv, _ in pieces]
        his = [iv.b for iv, _ in pieces]
        if any(los[i + 1] < his[i] - 1e-12 * (his[-1] - los[0]) for i in range(len(pieces) - 1)):
            raise DisconnectedSupport("density pieces overlap or are out of order")
        if any(m <= 0 or not np.isfinite(y) for y, m in atoms):
            raise NonFiniteValue("atom masses must be positive and finite")
        if any(atoms[i + 1][0] <= atoms[i][0] for i in range(len(atoms) - 1)):
            raise DisconnectedSupport("atom locations must be strictly increasing")
        mass = sum(d * iv.length for iv, d in pieces) + sum(m for _, m in atoms)
        if self.total_mass is not None:
            if abs(mass - self.total_mass) > 1e-10 * max(1.0, abs(mass)):
                raise MassMismatch(
                    f"stated mass {self.total_mass} != computed {mass}"
                )
            mass = float(self.total_mass)
        object.__setattr__(self, "density_pieces", pieces)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "total_mass", float(mass))

    def support(self) -> Interval | None:
        ys = [iv.a for iv, _ in self.density_pieces] + [iv.b for iv, _ in self.density_pieces]
        ys += [y for y, _ in self.atoms]
        if not ys:
            return None
        lo, hi = min(ys), max(ys)
        return Interval(lo, hi) if hi > lo else None

    def level_breakpoints(self) -> np.ndarray:
        """Sorted distinct y where the density or the CDF can change regime."""
        ys = [iv.a for iv, _ in self.density_pieces] + [iv.b for iv, _ in self.density_pieces]
        ys += [y for y, _ in self.atoms]
        return np.unique(np.asarray(ys, dtype=float))

    def cdf(self, y):
        """F(y) = mass of (-inf, y], vectorized."""
        ys = np.asarray(y, dtype=float)
        out = np.zeros_like(ys, dtype=float)
        for iv, d in self.density_pieces:
            out += d * np.clip(ys - iv.a, 0.0, iv.length)
        for loc, m in self.atoms:
            out += m * (ys >= loc)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class MultiplicityProfile:
    """Piecewise-constant preimage count over the transport domain.

    counts[i] is the constant value on the open interval between
    cut_points[i] and cut_points[i+1]; math.inf marks flat transport bands.
    """

    cut_points: np.ndarray
    counts: tuple

    def __post_init__(self):
        z = np.asarray(self.cut_points, dtype=float)
        c = tuple(float(x) for x in self.counts)
        if z.ndim != 1 or z.size < 2 or np.any(np.diff(z) <= 0):
            raise NonFiniteValue("cut points must be strictly increasing, length >= 2")
        if len(c) != z.size - 1:
            raise NonFiniteValue("need one count per band")
        if any(not (x >= 1) for x in c):
            raise NonFiniteValue("counts must be >= 1 (or inf)")
        z.setflags(write=False)
        object.__setattr__(self, "cut_points", z)
        object.__setattr__(self, "counts", c)

    def count_at(self, x: float) -> float:
        i = int(np.searchsorted(self.cut_points, x, side="right")) - 1
        return self.counts[min(max(i, 0), len(self.counts) - 1)]

    def finite_counts(self) -> list[float]:
        return [c for c in self.counts if math.isfinite(c)]


# ------------------------------------------------------- level decomposition

def _merge_levels(values: np.ndarray) -> np.ndarray:
    """Sorted critical values with near-duplicates collapsed to their mean."""
    vals = np.sort(np.unique(np.asarray(values, dtype=float)))
    if vals.size == 1:
        return vals
    tol = LEVEL_RTOL * (vals[-1] - vals[0])
    reps, group = [], [vals[0]]
    for v in vals[1:]:
        if v - group[-1] > tol:
            reps.append(sum(group) / len(group))
            group = [v]
        else:
            group.append(v)
    reps.append(sum(group) / len(group))
    return np.asarray(reps)


def _snap(reps: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Index of the nearest representative for each value."""
    idx = np.searchsorted(reps, vals)
    idx = np.clip(idx, 0, reps.size - 1)
    left = np.clip(idx - 1, 0, reps.size - 1)
    use_left = np.abs(vals - reps[left]) < np.abs(vals - reps[idx])
    return np.where(use_left, left, idx)


def _decompose(u: PiecewiseAffine):
    """Per-band density and branch count induced by the critical values of u.

    Returns (reps, band_density, band_count, atom_mass) where bands run
    between consecutive reps and atom_mass[k] collects flat pieces at
    level reps[k].
    """
    reps = _merge_levels(u.values)
    s = u.piece_slopes
    lengths = u.piece_lengths
    lo = _snap(reps, np.minimum(u.values[:-1], u.values[1:]))
    hi = _snap(reps, np.maximum(u.values[:-1], u.values[1:]))
    flat = s == 0.0
    nbands = reps.size - 1
    dens_diff = np.zeros(nbands + 1)
    count_diff = np.zeros(nbands + 1)
    if nbands > 0 and np.any(~flat):
        w = 1.0 / np.abs(s[~flat])
        np.add.at(dens_diff, lo[~flat], w)
        np.add.at(dens_diff, hi[~flat], -w)
        np.add.at(count_diff, lo[~flat], 1.0)
        np.add.at(count_diff, hi[~flat], -1.0)
    band_density = np.cumsum(dens_diff)[:nbands]
    band_count = np.cumsum(count_diff)[:nbands]
    atom_mass = np.zeros(reps.size)
    if np.any(flat):
        np.add.at(atom_mass, lo[flat], lengths[flat])
    return reps, band_density, band_count, atom_mass


# ------------------------------------------------------------------ the ops

def pushforward(u: PiecewiseAffine) -> Measure1D:
    """Image of Lebesgue measure on the domain of u under u."""
    reps, band_density, _, atom_mass = _decompose(u)
    pieces = tuple(
        (Interval(float(reps[k]), float(reps[k + 1])), float(band_density[k]))
        for k in range(reps.size - 1)
    )
    atoms = tuple((float(reps[k]), float(atom_mass[k]))
                  for k in range(reps.size) if atom_mass[k] > 0)
    return Measure1D(pieces, atoms)


def monotone_transport(nu: Measure1D, domain: Interval) -> PiecewiseAffine:
    """Unique non-decreasing map on `domain` whose image measure is nu.

    This is the quantile function of nu rescaled to start at domain.a:
    T(x) = inf{y : F(y) >= x - a}.
    """
    if abs(nu.total_mass - domain.length) > 1e-9 * max(1.0, domain.length):
        raise MassMismatch(
            f"measure mass {nu.total_mass} != domain length {domain.length}"
        )
    pieces = [(iv, d) for iv, d in nu.density_pieces if d > 0.0]
    ys = np.unique(np.asarray(
        [iv.a for iv, _ in pieces] + [iv.b for iv, _ in pieces]
        + [y for y, _ in nu.atoms], dtype=float))
    if ys.size == 0:
        raise DisconnectedSupport("measure has no mass")
    atom_at = dict(nu.atoms)

    # Constant density on each span between consecutive level breakpoints;
    # a zero-density span of positive length means the support has a hole.
    span_density = np.zeros(max(ys.size - 1, 0))
    if pieces and ys.size > 1:
        lo_arr = np.asarray([iv.a for iv, _ in pieces])
        hi_arr = np.asarray([iv.b for iv, _ in pieces])
        d_arr = np.asarray([d for _, d in pieces])
        tol = 1e-12 * max(float(ys[-1] - ys[0]), 1.0)
        mids = 0.5 * (ys[:-1] + ys[1:])
        j = np.clip(np.searchsorted(lo_arr, mids, side="right") - 1, 0, lo_arr.size - 1)
        inside = (mids >= lo_arr[j] - tol) & (mids <= hi_arr[j] + tol)
        span_density = np.where(inside, d_arr[j], 0.0)

    xs = [domain.a]
    vs = [float(ys[0])]
    for j in range(ys.size):
        y = float(ys[j])
        m = atom_at.get(y, 0.0)
        if m > 0.0:
            xs.append(xs[-1] + m)
            vs.append(y)
        if j < ys.size - 1:
            y_next = float(ys[j + 1])
            d = float(span_density[j])
            if d <= 0.0:
                raise DisconnectedSupport(
                    f"no mass between levels {y} and {y_next}"
                )
            xs.append(xs[-1] + d * (y_next - y))
            vs.append(y_next)
    if len(xs) == 1:
        raise DisconnectedSupport("measure has no mass")
    drift = abs(xs[-1] - domain.b)
    if drift > 1e-9 * max(1.0, domain.length):
        raise MassMismatch(f"cumulative mass drifts from domain end by {drift}")
    xs[-1] = domain.b
    return PiecewiseAffine(np.asarray(xs), np.asarray(vs))


def _left_inverse(t: PiecewiseAffine, y: float) -> float:
    """Smallest x with t(x) >= y, for non-decreasing t."""
    v, x = t.values, t.breakpoints
    i = int(np.searchsorted(v, y, side="left"))
    if i == 0:
        return float(x[0])
    if i >= v.size:
        return float(x[-1])
    if v[i] == y:
        return float(x[i])
    return float(x[i - 1] + (y - v[i - 1]) * (x[i] - x[i - 1]) / (v[i] - v[i - 1]))


def _right_inverse(t: PiecewiseAffine, y: float) -> float:
    """Right endpoint of {x : t(x) = y}, for non-decreasing t attaining y."""
    v, x = t.values, t.breakpoints
    i = int(np.searchsorted(v, y, side="right"))
    if i >= v.size:
        return float(x[-1])
    if i == 0:
        return float(x[0])
    if v[i - 1] == y:
        return float(x[i - 1])
    return float(x[i - 1] + (y - v[i - 1]) * (x[i] - x[i - 1]) / (v[i] - v[i - 1]))


def _cdf_distance(mu: Measure1D, nu: Measure1D) -> float:
    ys = np.unique(np.concatenate([mu.level_breakpoints(), nu.level_breakpoints()]))
    if ys.size == 0:
        return 0.0
    return float(np.max(np.abs(mu.cdf(ys) - nu.cdf(ys))))


def multiplicity(u: PiecewiseAffine, t: PiecewiseAffine) -> MultiplicityProfile:
    """Preimage-count profile of u along the bands of its transport t.

    On each band where t rises, the count is the number of branches of u
    covering the corresponding value band; flat bands of t (atoms of the
    image measure) get the infinity sentinel.
    """
    nu_u = pushforward(u)
    gap = _cdf_distance(nu_u, pushforward(t))
    if gap > 1e-7 * max(1.0, nu_u.total_mass):
        raise TransportMismatch(
            f"candidate transport deviates from the image measure by {gap:g}"
        )
    reps, _, band_count, atom_mass = _decompose(u)
    span_tol = 1e-12 * (t.b - t.a)
    cuts = [t.a]
    counts = []
    for k in range(reps.size):
        z_lo = _left_inverse(t, float(reps[k]))
        z_hi = _right_inverse(t, float(reps[k]))
        if z_hi - cuts[-1] > span_tol and z_hi > z_lo + span_tol:
            cuts.append(z_hi)
            counts.append(INF)
        if k < reps.size - 1:
            z_next = _left_inverse(t, float(reps[k + 1]))
            if z_next - cuts[-1] > span_tol:
                cuts.append(z_next)
                counts.append(float(max(band_count[k], 1.0)))
    cuts[-1] = t.b
    return MultiplicityProfile(np.asarray(cuts), tuple(counts))


def density_relation_residual(u: PiecewiseAffine, t: PiecewiseAffine, y: float) -> float:
    """| 1/T'(T^{-1}(y)) - sum over preimages of 1/|u'| | at a regular level.

    Both sides equal the density of the image measure at y, so the residual
    is zero for exact inputs up to float rounding.
    """
    reps = _merge_levels(u.values)
    vrange = float(reps[-1] - reps[0]) if reps.size > 1 else 0.0
    tol = 1e-10 * max(vrange, 1e-300)
    if vrange == 0.0 or y <= reps[0] + tol or y >= reps[-1] - tol:
        raise CriticalLevel(f"level {y} outside the open image")
    if np.min(np.abs(reps - y)) <= tol:
        raise CriticalLevel(f"level {y} is a critical value")
    x_star = _left_inverse(t, y)
    if _right_inverse(t, y) - x_star > 1e-12 * (t.b - t.a):
        raise FlatTransport(f"transport is flat at level {y}")
    i = int(np.searchsorted(t.breakpoints, x_star, side="right")) - 1
    i = min(max(i, 0), t.piece_slopes.size - 1)
    t_slope = float(t.piece_slopes[i])
    if t_slope <= 0.0:
        raise FlatTransport(f"transport is flat at level {y}")
    s = u.piece_slopes
    lo = np.minimum(u.values[:-1], u.values[1:])
    hi = np.maximum(u.values[:-1], u.values[1:])
    covered = (s != 0.0) & (lo < y) & (y < hi)
    preimage_sum = float(np.sum(1.0 / np.abs(s[covered])))
    return abs(1.0 / t_slope - preimage_sum)
