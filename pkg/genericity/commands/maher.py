# genericity/commands/maher.py
from __future__ import annotations

import click

from genericity.commands.common import build_spec, emit, output_options
from genericity.core.config import WINDOW
from genericity.models.torus import GeneratingSet, IntMatrix2
from genericity.services.maher import maher_proximity_profile, split_isolated_dense


@click.command("isolation")
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--radius", "-R", type=int, default=100, show_default=True)
@click.option("--generators", type=click.Choice(["ST", "TTt"]), default="ST", show_default=True)
@click.option("--phi0", multiple=True, help="Also report centralizer proximity to these 'a,b,c,d'.")
@click.option("--window", type=int, default=WINDOW, show_default=True)
@output_options
def isolation(k, radius, generators, phi0, window, fmt, out, cache_dir, threads):
    """k-isolated and k-dense non-pseudo-Anosov elements of the l1 ball."""
    build_spec(command="isolation", window=window, threads=threads, format=fmt, out=out, cache=cache_dir,
               params={"k": k, "radius": radius, "generators": generators, "phi0": "|".join(phi0)})
    profile = split_isolated_dense(
        k, radius, GeneratingSet.named(generators), [IntMatrix2.parse(p) for p in phi0], window
    )
    emit(profile.records(), ["set", "matrix", "kind", "nearest", "proximity"], fmt, out)


@click.command("maher")
@click.option("--radius", "-R", type=int, default=100, show_default=True)
@click.option("--phi0", multiple=True, default=("1,1,0,1", "1,0,-1,1"), show_default=True)
@click.option("--window", type=int, default=WINDOW, show_default=True)
@output_options
def maher(radius, phi0, window, fmt, out, cache_dir, threads):
    """Histogram of relative distances to centralizers."""
    build_spec(command="maher", window=window, threads=threads, format=fmt, out=out, cache=cache_dir,
               params={"radius": radius, "phi0": "|".join(phi0)})
    profile = maher_proximity_profile(radius, [IntMatrix2.parse(p) for p in phi0], window)
    emit(profile.records(), ["distance", "count"], fmt, out)


commands = [isolation, maher]
