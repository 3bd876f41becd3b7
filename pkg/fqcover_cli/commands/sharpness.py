from pathlib import Path

import click
from tabulate import tabulate

from fqcover_cli.commands.common import emit
from fqcover_cli.harness import run_sharpness
from fqcover_cli.model import ExperimentSpec
from fqcover_cli.question import prime_question
from fqcover_cli.util import pp


@click.command()
@click.option("--p", type=int, help="Characteristic.")
@click.option("--n", type=int, default=2, show_default=True, help="Extension degree.")
@click.option("--d", type=int, default=2, show_default=True, help="Number of summands.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
def sharpness(p, n, d, out):
    """
    Show that sets of size about sqrt(q), such as a subfield, can miss
    nonzero elements of dA^2.
    """
    p = p if p is not None else prime_question().execute()

    spec = ExperimentSpec(p=p, n=n, d=d, mode="structured", samples=0)
    report = run_sharpness(spec)

    data = [
        {
            "family": row["name"],
            "|A|": row["size"],
            "covers": row["covers_units"],
            "|A| / q^(1/2+1/2d)": pp(row["ratio"]),
        }
        for row in report.results["families"]
    ]
    click.echo(tabulate(data, headers="keys"))
    click.echo()

    emit(report, out)
