from pathlib import Path

import click

from fqcover_cli.commands.common import emit
from fqcover_cli.harness import run_d_of_eps
from fqcover_cli.question import epsilon_question
from fqcover_cli.util import parse_fraction


@click.command(name="d-of-eps")
@click.option("--eps", help="Exponent gap, a rational in (0, 1/2] such as 1/4.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
def d_of_eps(eps, out):
    """
    Number of summands needed when |A| >= C q^(1/2 + eps).
    """
    eps = eps or epsilon_question().execute()
    emit(run_d_of_eps(parse_fraction(eps)), out)
