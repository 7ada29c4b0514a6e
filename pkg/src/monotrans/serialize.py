"""JSON encoding and decoding for every wire type.

Schemas:
  function   {"breakpoints": [...], "values": [...]}
  cost       {"kind": "power", "p": 2} | {"kind": "exp"}
             | {"kind": "linear_plus_power", "a": 1.0, "p": 2, "c": 0.5}
  measure    {"density": [{"lo":., "hi":., "d":.}], "atoms": [{"y":., "m":.}]}
  profile    {"cut_points": [...], "counts": [2, "inf", ...]}
  report     {"lhs":., "rhs":., "gap":., "tolerance":.,
              "bands": [{"lo":., "hi":., "n":., "tslope":., "contrib":.}]}
  sampled    {"a":., "b":., "values": [...], "derivative": [...]?}
  grid       {"a":., "b":., "values": [..., "inf", ...]}

Schema violations raise ValueError; floats round-trip losslessly through
Python's shortest-repr serialization.
"""

from __future__ import annotations

import math

import numpy as np

from .approx import SampledFunction
from .costs import ConvexCost, make_cost
from .energy import InequalityReport
from .functions import Interval, PiecewiseAffine
from .rearrange import Measure1D, MultiplicityProfile
from .regularize import GridFunction


def _floats(seq, what: str) -> list[float]:
    try:
        out = [float(x) for x in seq]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what} must be a list of numbers") from exc
    return out


def function_to_json(u: PiecewiseAffine) -> dict:
    return {"breakpoints": u.breakpoints.tolist(), "values": u.values.tolist()}


def function_from_json(obj) -> PiecewiseAffine:
    if not isinstance(obj, dict) or "breakpoints" not in obj or "values" not in obj:
        raise ValueError("function JSON needs 'breakpoints' and 'values'")
    return PiecewiseAffine(np.asarray(_floats(obj["breakpoints"], "breakpoints")),
                           np.asarray(_floats(obj["values"], "values")))


def cost_to_json(f: ConvexCost) -> dict:
    if f.kind in ("power", "exp", "linear_plus_power", "sampled"):
        return {"kind": f.kind, **f.params}
    raise ValueError(f"cost kind {f.kind!r} has no JSON form")


def cost_from_json(obj) -> ConvexCost:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("cost JSON needs a 'kind'")
    kind = obj["kind"]
    params = {k: v for k, v in obj.items() if k != "kind"}
    return make_cost(kind, **params)


def measure_to_json(nu: Measure1D) -> dict:
    return {
        "density": [{"lo": iv.a, "hi": iv.b, "d": d} for iv, d in nu.density_pieces],
        "atoms": [{"y": y, "m": m} for y, m in nu.atoms],
    }


def measure_from_json(obj) -> Measure1D:
    if not isinstance(obj, dict):
        raise ValueError("measure JSON must be an object")
    try:
        pieces = tuple((Interval(float(p["lo"]), float(p["hi"])), float(p["d"]))
                       for p in obj.get("density", []))
        atoms = tuple((float(a["y"]), float(a["m"])) for a in obj.get("atoms", []))
    except (TypeError, KeyError) as exc:
        raise ValueError("bad measure JSON") from exc
    return Measure1D(pieces, atoms)


def _count_out(c: float):
    return "inf" if math.isinf(c) else c


def _count_in(c) -> float:
    if c == "inf":
        return math.inf
    return float(c)


def profile_to_json(n: MultiplicityProfile) -> dict:
    return {"cut_points": n.cut_points.tolist(),
            "counts": [_count_out(c) for c in n.counts]}


def profile_from_json(obj) -> MultiplicityProfile:
    if not isinstance(obj, dict) or "cut_points" not in obj or "counts" not in obj:
        raise ValueError("profile JSON needs 'cut_points' and 'counts'")
    return MultiplicityProfile(np.asarray(_floats(obj["cut_points"], "cut_points")),
                               tuple(_count_in(c) for c in obj["counts"]))


def report_to_json(r: InequalityReport) -> dict:
    return {
        "lhs": r.lhs, "rhs": r.rhs, "gap": r.gap, "tolerance": r.tolerance,
        "bands": [{"lo": b.interval.a, "hi": b.interval.b, "n": _count_out(b.count),
                   "tslope": b.t_slope, "contrib": b.contribution} for b in r.bands],
    }


def sampled_to_json(u: SampledFunction) -> dict:
    return {"a": u.a, "b": u.b, "values": u.values.tolist(),
            "derivative": u.derivative.tolist()}


def sampled_from_json(obj) -> SampledFunction:
    if not isinstance(obj, dict) or "values" not in obj:
        raise ValueError("sampled-function JSON needs 'a', 'b', 'values'")
    try:
        a, b = float(obj["a"]), float(obj["b"])
    except (TypeError, KeyError) as exc:
        raise ValueError("sampled-function JSON needs numeric 'a' and 'b'") from exc
    deriv = obj.get("derivative")
    return SampledFunction(
        a, b, np.asarray(_floats(obj["values"], "values")),
        None if deriv is None else np.asarray(_floats(deriv, "derivative")))


def grid_to_json(g: GridFunction) -> dict:
    return {"a": g.a, "b": g.b,
            "values": ["inf" if math.isinf(v) else v for v in g.values]}


def grid_from_json(obj) -> GridFunction:
    if not isinstance(obj, dict) or "values" not in obj:
        raise ValueError("grid-function JSON needs 'a', 'b', 'values'")
    try:
        a, b = float(obj["a"]), float(obj["b"])
        vals = np.asarray([_count_in(v) for v in obj["values"]])
    except (TypeError, KeyError, ValueError) as exc:
        raise ValueError("bad grid-function JSON") from exc
    return GridFunction(a, b, vals)
