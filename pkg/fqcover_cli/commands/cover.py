from pathlib import Path

import click

from fqcover_cli.commands.common import emit
from fqcover_cli.harness import run_cover_exhaustive, run_cover_sample
from fqcover_cli.model import ExperimentSpec
from fqcover_cli.question import dimension_question, prime_question, size_range_question
from fqcover_cli.util import parse_checks, parse_size_range


@click.command(name="cover-exhaustive")
@click.option("--p", type=int, help="Characteristic.")
@click.option("--n", type=int, default=1, show_default=True, help="Extension degree.")
@click.option("--d", type=int, help="Number of summands.")
@click.option("--sizes", help="Size range of A, e.g. 4..5.")
@click.option("--checks", default="cover", show_default=True)
@click.option("--workers", type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("-i", "--interactive", is_flag=True)
def cover_exhaustive(p, n, d, sizes, checks, workers, out, interactive):
    """
    Enumerate every A in F_q of the admitted sizes and check that
    dA^2 contains every nonzero element.
    """
    p = p if p is not None else prime_question().execute()
    d = d if d is not None else dimension_question().execute()
    sizes = sizes or (size_range_question().execute() if interactive else None)

    spec = ExperimentSpec(
        p=p,
        n=n,
        d=d,
        mode="exhaustive",
        sizes=parse_size_range(sizes),
        samples=0,
        checks=parse_checks(checks),
    )

    emit(run_cover_exhaustive(spec, workers=workers), out)


@click.command(name="cover-sample")
@click.option("--p", type=int, help="Characteristic.")
@click.option("--n", type=int, default=1, show_default=True, help="Extension degree.")
@click.option("--d", type=int, help="Number of summands.")
@click.option("--sizes", help="Size range of A, e.g. 33..40.")
@click.option("--samples", type=int, default=100, show_default=True, help="Draws per size.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--checks", default="cover", show_default=True)
@click.option("--structured", is_flag=True, help="Also check subfields and subgroups.")
@click.option("--workers", type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("-i", "--interactive", is_flag=True)
def cover_sample(p, n, d, sizes, samples, seed, checks, structured, workers, out, interactive):
    """
    Draw seeded random sets A of each admitted size and run the checks on them.
    """
    p = p if p is not None else prime_question().execute()
    d = d if d is not None else dimension_question().execute()
    sizes = sizes or (size_range_question().execute() if interactive else None)

    spec = ExperimentSpec(
        p=p,
        n=n,
        d=d,
        mode="structured" if structured else "sample",
        sizes=parse_size_range(sizes),
        samples=samples,
        seed=seed,
        checks=parse_checks(checks),
    )

    emit(run_cover_sample(spec, workers=workers), out)
