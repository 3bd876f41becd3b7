from pathlib import Path

import click

from fqcover_cli.commands.common import emit
from fqcover_cli.harness import run_geometry
from fqcover_cli.model import ExperimentSpec
from fqcover_cli.question import dimension_question, prime_question, size_range_question
from fqcover_cli.util import parse_checks, parse_size_range

GEOMETRY_CHECKS = "cover,remainder,keylowerbound,identities,second_moment"


@click.command()
@click.option("--p", type=int, help="Characteristic.")
@click.option("--n", type=int, default=1, show_default=True, help="Extension degree.")
@click.option("--d", type=int, help="Dimension of the ambient space.")
@click.option(
    "--mode",
    type=click.Choice(["exhaustive", "sample", "structured"]),
    default="sample",
    show_default=True,
)
@click.option("--sizes", help="Size range of E, e.g. 6..9.")
@click.option("--samples", type=int, default=100, show_default=True, help="Draws per size.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--checks", default=GEOMETRY_CHECKS, show_default=True)
@click.option("--workers", type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--csv",
    "csv_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the nu profile of the sharpest set.",
)
@click.option("-i", "--interactive", is_flag=True)
def geometry(p, n, d, mode, sizes, samples, seed, checks, workers, out, csv_path, interactive):
    """
    Check the dot-product incidence bounds on point sets E in F_q^d.
    """
    p = p if p is not None else prime_question().execute()
    d = d if d is not None else dimension_question().execute()
    sizes = sizes or (size_range_question().execute() if interactive else None)

    spec = ExperimentSpec(
        p=p,
        n=n,
        d=d,
        mode=mode,
        sizes=parse_size_range(sizes),
        samples=samples,
        seed=seed,
        checks=parse_checks(checks),
    )

    emit(run_geometry(spec, csv_path=csv_path, workers=workers), out)
