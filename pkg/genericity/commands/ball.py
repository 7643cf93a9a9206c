# genericity/commands/ball.py
from __future__ import annotations

import click

from genericity.commands.common import build_spec, emit, output_options
from genericity.core.config import WORD_CAP
from genericity.core.errors import BudgetExhaustedError, InvalidInputError
from genericity.models.surface import SurfaceSpec
from genericity.services.exact_torus import iter_l1_ball_entries
from genericity.services.experiments import lamination_ball
from genericity.services.orbit_ball import iter_orbit_ball


@click.command("ball")
@click.option("--model", type=click.Choice(["torus", "lamination"]), default="torus", show_default=True)
@click.option("--radius", "-R", type=int, required=True, help="l1 radius (torus) or F bound L (lamination).")
@click.option("--surface", default="1,2", show_default=True)
@click.option("--F", "weight", type=click.Choice(["sum", "max"]), default="sum", show_default=True)
@click.option("--word-cap", type=int, default=WORD_CAP, show_default=True)
@output_options
def ball(model, radius, surface, weight, word_cap, fmt, out, cache_dir, threads):
    """Stream the members of a ball."""
    build_spec(command="ball", model=model, surface=surface, F=weight, word_cap=word_cap,
               threads=threads, format=fmt, out=out, cache=cache_dir, params={"radius": radius})
    if radius < 1:
        raise InvalidInputError("radius must be positive")
    if model == "torus":
        records = [dict(zip("abcd", e)) for e in iter_l1_ball_entries(radius)]
        emit(records, ["a", "b", "c", "d"], fmt, out)
        return
    result = lamination_ball(SurfaceSpec.parse(surface), radius, word_cap, weight)
    records = [
        {"F": value, "word": " ".join(word), "key": ";".join(",".join(map(str, c)) for c in key),
         "complete": result.complete}
        for key, word, value in iter_orbit_ball(result)
    ]
    emit(records, ["F", "word", "key", "complete"], fmt, out)
    if not result.complete:
        raise BudgetExhaustedError(f"word cap {word_cap} reached; the ball is a lower bound", partial=len(records))


commands = [ball]
