# genericity/commands/density.py
from __future__ import annotations

import click

from genericity.commands.common import build_spec, emit, grid_option, grid_values, open_cache, output_options
from genericity.core.config import GENERAL_GRID, TOP_FRACTION, TORUS_GRID, WORD_CAP
from genericity.core.errors import BudgetExhaustedError, InvalidInputError
from genericity.models.torus import TorusMulticurve
from genericity.schemas.reports import Box, CountReport
from genericity.services.experiments import (
    box_mass_series,
    count_integral_multicurves,
    density_experiment,
    growth_exponent,
)
from genericity.services.plots import emit_plot_data

MODELS = ["torus", "torus-rho", "lamination"]


def _report(model, grid_text, weight, surface, word_cap, fmt, out, cache_dir, threads, command,
            sigma=None, eta=None) -> CountReport:
    grid = grid_values(grid_text or (GENERAL_GRID if model == "lamination" else TORUS_GRID))
    params = {k: v for k, v in (("sigma", sigma), ("eta", eta)) if v and model == "torus-rho"}
    spec = build_spec(command=command, model=model, surface=surface, F=weight, grid=grid,
                      word_cap=word_cap, threads=threads, format=fmt, out=out, cache=cache_dir, params=params)
    pair = {
        "sigma": TorusMulticurve.parse(sigma) if sigma else None,
        "eta": TorusMulticurve.parse(eta) if eta else None,
    }
    cache = open_cache(cache_dir)

    def compute() -> list[str]:
        report = density_experiment(model, grid, weight, surface, word_cap, threads, cache)
        return [report.model_dump_json()]

    if model == "lamination":
        lines = cache.lines(spec.spec_hash(), compute)
        return CountReport.model_validate_json(lines[0])
    return density_experiment(model, grid, weight, surface, word_cap, threads, cache, **pair)


@click.command("density")
@click.option("--model", type=click.Choice(MODELS), default="torus", show_default=True)
@grid_option(None)
@click.option("--F", "weight", type=click.Choice(["sum", "max"]), default="sum", show_default=True)
@click.option("--surface", default="1,2", show_default=True)
@click.option("--word-cap", type=int, default=WORD_CAP, show_default=True)
@click.option("--plots", type=click.Path(file_okay=False), default=None, help="Also write plot-ready CSVs here.")
@click.option("--sigma", default=None, help="Filling multicurve 'p,q:w;p,q:w' for torus-rho (default '1,0:1;0,1:1').")
@click.option("--eta", default=None, help="Filling multicurve paired with sigma (default '1,0:1;0,1:1').")
@output_options
def density(model, grid, weight, surface, word_cap, plots, sigma, eta, fmt, out, cache_dir, threads):
    """Non-pseudo-Anosov fraction of each ball in the grid."""
    report = _report(model, grid, weight, surface, word_cap, fmt, out, cache_dir, threads, "density", sigma, eta)
    emit(report.records(), report.columns, fmt, out)
    if not report.complete:
        raise BudgetExhaustedError("word cap reached; counts are lower bounds", partial=report)
    if plots:
        emit_plot_data(report, plots)


@click.command("exponent")
@click.option("--model", type=click.Choice(MODELS + ["multicurves"]), default="torus", show_default=True)
@grid_option(None)
@click.option("--F", "weight", type=click.Choice(["sum", "max"]), default="sum", show_default=True)
@click.option("--surface", default="1,2", show_default=True)
@click.option("--word-cap", type=int, default=WORD_CAP, show_default=True)
@click.option("--top-fraction", type=float, default=TOP_FRACTION, show_default=True)
@output_options
def exponent(model, grid, weight, surface, word_cap, top_fraction, fmt, out, cache_dir, threads):
    """Log-log growth exponent of ball counts (or of integral multicurve counts)."""
    if model == "multicurves":
        values = grid_values(grid or TORUS_GRID)
        build_spec(command="exponent", model=model, surface=surface, grid=values, threads=threads,
                   format=fmt, out=out, cache=cache_dir, params={"top_fraction": top_fraction})
        target = "torus" if surface == "1,1" else surface
        fit = growth_exponent(values, [count_integral_multicurves(target, L) for L in values], top_fraction)
    else:
        report = _report(model, grid, weight, surface, word_cap, fmt, out, cache_dir, threads, "exponent")
        fit = growth_exponent(report, top_fraction=top_fraction)
    emit([fit.model_dump()], ["slope", "stderr", "points"], fmt, out)


def _parse_box(text: str) -> Box:
    try:
        lower, upper = text.split(";")
        return Box(lower=[float(x) for x in lower.split(",")], upper=[float(x) for x in upper.split(",")])
    except ValueError as exc:
        raise InvalidInputError(f"box must look like 'lo1,lo2,..;hi1,hi2,..': {exc}")


@click.command("boxmass")
@click.option("--model", type=click.Choice(["torus", "lamination"]), default="torus", show_default=True)
@click.option("--restriction", type=click.Choice(["all", "nonPA", "isolated", "dense"]), default="all", show_default=True)
@click.option("--box", "boxes", multiple=True, help="Axis-aligned box 'lo1,..;hi1,..' in normalized coordinates.")
@click.option("--k", type=int, default=2, show_default=True)
@grid_option(None)
@click.option("--surface", default="1,2", show_default=True)
@click.option("--word-cap", type=int, default=WORD_CAP, show_default=True)
@output_options
def boxmass(model, restriction, boxes, k, grid, surface, word_cap, fmt, out, cache_dir, threads):
    """Empirical measure of normalized ball images in boxes."""
    values = grid_values(grid or (GENERAL_GRID if model == "lamination" else "200:1600:x2"))
    build_spec(command="boxmass", model=model, surface=surface, grid=values, word_cap=word_cap,
               threads=threads, format=fmt, out=out, cache=cache_dir,
               params={"restriction": restriction, "boxes": "|".join(boxes), "k": k})
    if boxes:
        parsed = [_parse_box(b) for b in boxes]
    elif model == "torus":
        parsed = [Box(lower=[-1.0] * 4, upper=[1.0] * 4)]
    else:
        raise InvalidInputError("--box is required for the lamination model")
    measure = box_mass_series(model, restriction, parsed, values, k=k, surface=surface, word_cap=word_cap)
    emit(measure.records(), ["L", "box", "count", "mass"], fmt, out)


@click.command("multicurves")
@click.option("--surface", default="torus", show_default=True, help="'torus' or 'g,r'.")
@grid_option("1:16:x2")
@output_options
def multicurves(surface, grid, fmt, out, cache_dir, threads):
    """Integral multicurves of weight at most L."""
    values = grid_values(grid)
    build_spec(command="multicurves", surface=surface if surface != "torus" else "1,1", grid=values,
               threads=threads, format=fmt, out=out, cache=cache_dir)
    records = [{"L": L, "count": count_integral_multicurves(surface, L)} for L in values]
    emit(records, ["L", "count"], fmt, out)


commands = [density, exponent, boxmass, multicurves]
