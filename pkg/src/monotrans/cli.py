"""Command-line front end.

Exit codes: 0 success, 2 unreadable/invalid input or configuration,
3 computation error reported by the library, 4 inequality violation
(which would indicate a library bug, surfaced loudly).
"""

from __future__ import annotations

import csv
import json
import math
import sys

import click
import numpy as np

from . import approx as approx_mod
from . import energy as energy_mod
from . import regularize as regularize_mod
from . import serialize
from .errors import InequalityViolated, MonotransError
from .functions import Interval, random_piecewise_affine
from .rearrange import monotone_transport, multiplicity, pushforward

SUITE_COSTS = (("t", {"kind": "power", "p": 1}),
               ("t2", {"kind": "power", "p": 2}),
               ("t4", {"kind": "power", "p": 4}),
               ("exp", {"kind": "exp"}))


def _fail(code: int, message: str):
    click.echo(f"monotrans: {message}", err=True)
    sys.exit(code)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(2, f"cannot read {path}: {exc}")


def _parse(builder, payload, what: str):
    try:
        return builder(payload)
    except (ValueError, MonotransError) as exc:
        _fail(2, f"invalid {what}: {exc}")


def _load_cost(spec: str):
    payload = json.loads(spec) if spec.lstrip().startswith("{") else None
    if payload is None:
        payload = _load_json(spec)
    return _parse(serialize.cost_from_json, payload, "cost")


def _write_json(path: str, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_count(c: float) -> str:
    return "inf" if math.isinf(c) else str(int(c))


def _plot_overlay(path: str, u, t, profile):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs = np.unique(np.concatenate([
            u.breakpoints, t.breakpoints, profile.cut_points,
            np.linspace(u.a, u.b, 512)]))
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(xs, u(xs), label="u")
        ax.plot(xs, t(xs), label="monotone transport")
        mids = 0.5 * (profile.cut_points[:-1] + profile.cut_points[1:])
        nt = []
        for m, c in zip(mids, profile.counts):
            i = int(np.searchsorted(t.breakpoints, m, side="right")) - 1
            i = min(max(i, 0), t.piece_slopes.size - 1)
            s = float(t.piece_slopes[i])
            nt.append(0.0 if math.isinf(c) else c * s)
        ax.step(profile.cut_points, nt + [nt[-1]], where="post", label="n * t'")
        ax.legend(loc="best")
        ax.set_xlabel("x")
        fig.savefig(path)
        plt.close(fig)
    except Exception as exc:  # plotting must never change the exit code
        click.echo(f"monotrans: plot skipped: {exc}", err=True)


@click.group()
def main():
    """Monotone rearrangement, multiplicity profiles, and inequality reports."""


input_opt = click.option("--input", "input_path", required=True,
                         type=click.Path(exists=True, dir_okay=False))
output_opt = click.option("--output", "output_path", required=True,
                          type=click.Path(dir_okay=False, writable=True))
cost_opt = click.option("--cost", "cost_spec", required=True,
                        help="cost JSON literal or path to a JSON file")
format_opt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                          default="json", show_default=True)
tol_opt = click.option("--tolerance", type=float, default=None, envvar="MONO_TOL",
                       help="absolute gap tolerance (default 1e-9*max(1, lhs); "
                            "MONO_TOL is honored)")


@main.command()
@input_opt
@output_opt
def transport(input_path, output_path):
    """Compute the image measure, monotone transport, and multiplicity profile."""
    u = _parse(serialize.function_from_json, _load_json(input_path), "function")
    try:
        nu = pushforward(u)
        t = monotone_transport(nu, u.domain)
        profile = multiplicity(u, t)
    except MonotransError as exc:
        _fail(3, str(exc))
    _write_json(output_path, {
        "transport": serialize.function_to_json(t),
        "measure": serialize.measure_to_json(nu),
        "multiplicity": serialize.profile_to_json(profile),
    })


@main.command()
@input_opt
@output_opt
@cost_opt
@tol_opt
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None)
def verify(input_path, output_path, cost_spec, tolerance, plot_path):
    """Check the rearrangement inequality and write the report."""
    u = _parse(serialize.function_from_json, _load_json(input_path), "function")
    f = _load_cost(cost_spec)
    if tolerance is not None and not tolerance > 0:
        _fail(2, f"tolerance must be > 0, got {tolerance}")
    violated = False
    try:
        report = energy_mod.verify_inequality(u, f, tolerance)
    except InequalityViolated as exc:
        report = exc.report
        violated = True
    except MonotransError as exc:
        _fail(3, str(exc))
    if report is not None:
        _write_json(output_path, serialize.report_to_json(report))
    if plot_path:
        t = monotone_transport(pushforward(u), u.domain)
        _plot_overlay(plot_path, u, t, multiplicity(u, t))
    if violated:
        _fail(4, "inequality violated; see report")


@main.command()
@input_opt
@output_opt
@cost_opt
@click.option("--grid", "grid_size", type=int, default=1000, show_default=True)
def coarea(input_path, output_path, cost_spec, grid_size):
    """Cross-check the energy through the level-set oracle."""
    u = _parse(serialize.function_from_json, _load_json(input_path), "function")
    f = _load_cost(cost_spec)
    if grid_size < 2:
        _fail(2, "grid must be >= 2")
    try:
        by_levels = energy_mod.coarea_energy(u, f, grid_size)
        exact = energy_mod.dirichlet_energy(u, f)
    except MonotransError as exc:
        _fail(3, str(exc))
    _write_json(output_path, {"coarea": by_levels, "dirichlet": exact,
                              "abs_error": abs(by_levels - exact)})


@main.command("approx")
@input_opt
@output_opt
@cost_opt
@format_opt
@click.option("--depth", type=int, default=6, show_default=True,
              help="report levels 1..depth")
def approx_cmd(input_path, output_path, cost_spec, fmt, depth):
    """Build nonvanishing-slope approximants and report their errors."""
    u = _parse(serialize.sampled_from_json, _load_json(input_path), "sampled function")
    f = _load_cost(cost_spec)
    if depth < 1:
        _fail(2, "depth must be >= 1")
    try:
        report = approx_mod.convergence_report(u, f, list(range(1, depth + 1)))
    except MonotransError as exc:
        _fail(3, str(exc))
    rows = [(lv.k, lv.w11_error, lv.cost_error, lv.min_abs_slope)
            for lv in report.levels]
    if fmt == "csv":
        _write_csv(output_path, ["k", "w11_error", "cost_error", "min_abs_slope"],
                   [(k, _fmt(w), _fmt(c), _fmt(m)) for k, w, c, m in rows])
    else:
        _write_json(output_path, {"levels": [
            {"k": k, "w11_error": w, "cost_error": c, "min_abs_slope": m}
            for k, w, c, m in rows]})


@main.command()
@input_opt
@output_opt
@click.option("--j", "j_value", type=float, required=True,
              help="Lipschitz constant of the envelope")
def regularize(input_path, output_path, j_value):
    """Capped Lipschitz envelope (inf-convolution) of a grid function."""
    g = _parse(serialize.grid_from_json, _load_json(input_path), "grid function")
    if not j_value > 0:
        _fail(2, f"j must be > 0, got {j_value}")
    try:
        out = regularize_mod.inf_convolution(g, j_value)
    except MonotransError as exc:
        _fail(3, str(exc))
    _write_json(output_path, serialize.grid_to_json(out))


@main.command()
@output_opt
@tol_opt
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, required=True)
@click.option("--monotone", is_flag=True, default=False,
              help="force monotone samples (equality cases)")
def suite(output_path, tolerance, seed, count, monotone):
    """Randomized inequality campaign; one CSV row per (seed, cost)."""
    if count < 1:
        _fail(2, f"count must be >= 1, got {count}")
    if tolerance is not None and not tolerance > 0:
        _fail(2, f"tolerance must be > 0, got {tolerance}")
    costs = [(name, serialize.cost_from_json(spec)) for name, spec in SUITE_COSTS]
    rows = []
    bad_seed = None
    for s in range(seed, seed + count):
        u = random_piecewise_affine(s, pieces=1 + s % 60, slope_range=(0.1, 10.0),
                                    interval=Interval(0.0, 1.0), monotone=monotone)
        try:
            t = monotone_transport(pushforward(u), u.domain)
            profile = multiplicity(u, t)
        except MonotransError as exc:
            _fail(3, f"seed {s}: {exc}")
        min_n = min(profile.counts)
        max_n = max(profile.counts)
        for name, f in costs:
            try:
                report = energy_mod.verify_inequality(u, f, tolerance)
            except InequalityViolated as exc:
                report = exc.report
                if bad_seed is None:
                    bad_seed = s
            except MonotransError as exc:
                _fail(3, f"seed {s}: {exc}")
            rows.append((str(s), name, _fmt(report.lhs), _fmt(report.rhs),
                         _fmt(report.gap), _fmt_count(min_n), _fmt_count(max_n)))
    _write_csv(output_path, ["seed", "cost_kind", "lhs", "rhs", "gap", "min_n", "max_n"],
               rows)
    if bad_seed is not None:
        _fail(4, f"inequality violated at seed {bad_seed}")


if __name__ == "__main__":
    main()
