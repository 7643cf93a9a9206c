# genericity/commands/classify.py
from __future__ import annotations

import json

import click

from genericity.commands.common import build_spec, output_options
from genericity.core.errors import InvalidInputError
from genericity.models.surface import MappingWord, SurfaceSpec
from genericity.models.torus import IntMatrix2
from genericity.services.exact_torus import classify_matrix
from genericity.services.generators import GeneratorLibrary, default_library
from genericity.services.nt_classifier import ClassifyBudget, classify_word
from genericity.services.triangulations import build_triangulation


@click.command("classify")
@click.option("--matrix", help="Torus mapping class as 'a,b,c,d'.")
@click.option("--surface", default=None, help="Surface 'g,r' for --word or --moves.")
@click.option("--word", default=None, help="Generator names from the library, e.g. 'a b^-1 a'.")
@click.option("--moves", default=None, help="Raw flip/relabel word, e.g. 'f0 p1,0,2'.")
@click.option("--library", "library_path", type=click.Path(dir_okay=False), default=None)
@click.option("--max-weight", type=int, default=8, show_default=True)
@output_options
def classify(matrix, surface, word, moves, library_path, max_weight, fmt, out, cache_dir, threads):
    """Nielsen-Thurston type of a torus matrix or of a word on a punctured surface."""
    build_spec(command="classify", model="torus" if matrix else "lamination", surface=surface or "1,1",
               threads=threads, format=fmt, out=out, cache=cache_dir,
               params={"matrix": matrix or "", "word": word or "", "moves": moves or ""})
    if sum(x is not None for x in (matrix, word, moves)) != 1:
        raise InvalidInputError("give exactly one of --matrix, --word or --moves")
    if matrix is not None:
        result = classify_matrix(IntMatrix2.parse(matrix))
        record = {"kind": result.kind.value, "order": result.order, "dilatation": result.dilatation}
    else:
        if surface is None:
            raise InvalidInputError("--surface is required with --word or --moves")
        spec = SurfaceSpec.parse(surface)
        if word is not None:
            library = GeneratorLibrary.load(library_path) if library_path else default_library()
            mapping = library.evaluate(spec, word.split())
        else:
            mapping = MappingWord.decode(build_triangulation(spec), moves)
        result = classify_word(mapping, ClassifyBudget(max_weight=max_weight))
        record = {
            "kind": result.kind.value,
            "order": result.order,
            "dilatation": result.dilatation,
            "multicurve": str(result.multicurve) if result.multicurve else None,
        }
    text = json.dumps(record, indent=2) + "\n" if fmt == "json" else f"{result}\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


commands = [classify]
