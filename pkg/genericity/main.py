# genericity/main.py
from __future__ import annotations

import logging
import sys

import click
from pydantic import ValidationError

from genericity import __version__
from genericity.commands import ball, classify, density, maher, validate
from genericity.core.config import LOG_LEVEL
from genericity.core.errors import GenericityError

logger = logging.getLogger("genericity.cli")
logger.setLevel(LOG_LEVEL)


class GenericityGroup(click.Group):
    """Turns domain failures into exit codes: 2 for bad input, 3 for budgets and I/O."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GenericityError as exc:
            click.echo(f"error: {exc.detail}", err=True)
            raise click.exceptions.Exit(exc.exit_code)
        except ValidationError as exc:
            click.echo(f"error: {exc.errors()[0]['msg']}", err=True)
            raise click.exceptions.Exit(2)


@click.group(cls=GenericityGroup)
@click.version_option(__version__, prog_name="genericity")
def cli():
    """Counting experiments on mapping class groups."""
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


for module in (classify, ball, density, maher, validate):
    for command in module.commands:
        cli.add_command(command)


def parse_and_run(argv: list[str] | None = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="genericity", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(parse_and_run())
