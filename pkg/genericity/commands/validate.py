# genericity/commands/validate.py
from __future__ import annotations

import click

from genericity.commands.common import build_spec, emit, output_options
from genericity.core.config import SEED, WORD_CAP
from genericity.core.errors import GenericityError
from genericity.services.crossval import cross_validate_torus
from genericity.services.surveys import length_comparability, word_length_survey


@click.command("crossval")
@click.option("--samples", type=int, default=100, show_default=True)
@click.option("--max-length", type=int, default=12, show_default=True)
@click.option("--seed", type=int, default=SEED, show_default=True)
@output_options
def crossval(samples, max_length, seed, fmt, out, cache_dir, threads):
    """Run random torus words through both engines and compare."""
    build_spec(command="crossval", seed=seed, threads=threads, format=fmt, out=out, cache=cache_dir,
               params={"samples": samples, "max_length": max_length})
    result = cross_validate_torus(samples, max_length, seed)
    emit(result.records(), ["checked", "passed", "discrepancy"], fmt, out)
    if not result.passed:
        raise GenericityError(f"{len(result.discrepancies)} discrepancies between the engines")


@click.command("survey")
@click.option("--cap", type=int, default=WORD_CAP, show_default=True)
@output_options
def survey(cap, fmt, out, cache_dir, threads):
    """Word lengths of the two intro matrices over the candidate generating sets."""
    build_spec(command="survey", threads=threads, format=fmt, out=out, cache=cache_dir, params={"cap": cap})
    emit([r.record() for r in word_length_survey(cap=cap)], ["name", "generators", "length"], fmt, out)


@click.command("lengths")
@click.option("--radius", "-R", type=int, default=100, show_default=True)
@output_options
def lengths(radius, fmt, out, cache_dir, threads):
    """Comparability of intersection with a filling pair and hyperbolic length."""
    build_spec(command="lengths", threads=threads, format=fmt, out=out, cache=cache_dir, params={"radius": radius})
    emit(length_comparability(radius).records(), ["radius", "min_ratio", "max_ratio", "C1"], fmt, out)


commands = [crossval, survey, lengths]
