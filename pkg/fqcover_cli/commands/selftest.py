from pathlib import Path

import click

from fqcover_cli.commands.common import emit
from fqcover_cli.harness import run_selftest


@click.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--corrupt-modulus", is_flag=True, hidden=True)
def selftest(seed, workers, out, corrupt_modulus):
    """
    Check field axioms, character orthogonality and the Fourier identities on
    GF(2) .. GF(25) in dimensions 1 to 3.
    """
    report = run_selftest(seed=seed, corrupt_modulus=corrupt_modulus, workers=workers)
    emit(report, out)
