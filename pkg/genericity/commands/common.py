# genericity/commands/common.py
from __future__ import annotations

import csv
import io
import json
import logging
from functools import wraps
from pathlib import Path
from typing import Callable, Sequence

import click
from pydantic import ValidationError

from genericity.core.config import CACHE_DIR, LOG_LEVEL, THREADS
from genericity.core.errors import CacheIOError, InvalidInputError
from genericity.schemas.run_spec import RunSpec, parse_grid
from genericity.services.cache import ResultCache

logger = logging.getLogger("genericity.cli")
logger.setLevel(LOG_LEVEL)


def output_options(func: Callable) -> Callable:
    """--format, --out, --cache and --threads, shared by every subcommand."""
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write results here instead of stdout.")
    @click.option("--cache", "cache_dir", type=click.Path(file_okay=False), default=None, help="Result cache directory.")
    @click.option("--threads", type=int, default=THREADS, show_default=True)
    @wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)
    return wrapper


def grid_option(default: str) -> Callable:
    return click.option("--grid", default=default, show_default=True, help="'start:stop:xF', 'start:stop:+S' or 'a,b,c'.")


def build_spec(**fields) -> RunSpec:
    try:
        spec = RunSpec(**fields)
    except ValidationError as exc:
        raise InvalidInputError(f"invalid options: {exc.errors()[0]['msg']}")
    logger.debug(f"Run spec {spec.spec_hash()[:12]}: {spec.canonical_json()}")
    return spec


def grid_values(text: str) -> list[int]:
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise InvalidInputError(str(exc))


def open_cache(cache_dir: str | None) -> ResultCache:
    return ResultCache(cache_dir if cache_dir is not None else CACHE_DIR)


def render(records: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r.get(c) for c in columns} for r in records], indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow(["" if r.get(c) is None else _cell(r.get(c)) for c in columns])
    return buffer.getvalue()


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def emit(records: Sequence[dict], columns: Sequence[str], fmt: str, out: str | None) -> None:
    text = render(records, columns, fmt)
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CacheIOError(f"cannot write {out}: {exc}")
    logger.info(f"Wrote {len(records)} records to {out}")
