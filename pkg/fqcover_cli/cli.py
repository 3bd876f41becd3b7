import warnings

import click
from pydantic import ValidationError

from fqcover_cli.base import NAME, VERSION
from fqcover_cli.commands.cover import cover_exhaustive, cover_sample
from fqcover_cli.commands.d_of_eps import d_of_eps
from fqcover_cli.commands.geometry import geometry
from fqcover_cli.commands.selftest import selftest
from fqcover_cli.commands.sharpness import sharpness
from fqcover_cli.errors import BadSpec, FqCoverError, FqCoverWarning
from fqcover_cli.question import warning_message


def _error(message: str):
    error = click.style("ERROR", fg="red")
    click.echo(f"{error}: {message}", err=True)


class FqCoverGroup(click.Group):
    """Maps library errors and bad input to the documented exit codes."""

    def invoke(self, ctx):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", FqCoverWarning)
            try:
                return super().invoke(ctx)
            except FqCoverError as e:
                _error(str(e))
                ctx.exit(e.exit_code)
            except ValidationError as e:
                _error("; ".join(err["msg"] for err in e.errors()))
                ctx.exit(BadSpec.exit_code)
            except click.UsageError as e:
                _error(e.format_message())
                ctx.exit(BadSpec.exit_code)
            finally:
                for w in caught:
                    click.echo(warning_message(f"WARNING: {w.message}"), err=True)


@click.group(cls=FqCoverGroup)
@click.version_option(VERSION, prog_name=NAME)
def cli():
    pass


cli.add_command(selftest)

# coverage of F_q^* by dA^2
cli.add_command(cover_exhaustive)
cli.add_command(cover_sample)
cli.add_command(sharpness)
cli.add_command(d_of_eps)

# dot products of point sets
cli.add_command(geometry)


def main():  # pragma: no cover
    cli()
