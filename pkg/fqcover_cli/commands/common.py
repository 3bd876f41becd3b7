from pathlib import Path
from typing import Optional

import click
from tabulate import tabulate

from fqcover_cli.model import RunReport
from fqcover_cli.question import warning_message
from fqcover_cli.util import format_field, pp, summary_rows, write_report

COUNTEREXAMPLES_SHOWN = 5


def emit(report: RunReport, out: Optional[Path] = None):
    """Prints the summary, writes the JSON report and exits with the report's code."""
    title = f"{report.command} {format_field(report.field)}".strip()
    click.echo(click.style(title, bold=True))
    click.echo()

    rows = summary_rows(report)
    if rows:
        click.echo(tabulate(rows, headers="keys"))
        click.echo()

    scalars = [
        {"key": key, "value": value}
        for key, value in sorted(report.results.items())
        if isinstance(value, (int, float, str)) or value is None
    ]
    if scalars:
        click.echo(tabulate(scalars))
        click.echo()

    click.echo(f"Elapsed: {pp(report.wall_clock, decimals=2)}s")

    if report.counterexamples:
        click.echo(
            warning_message(f"{len(report.counterexamples)} counterexample(s) found"),
            err=True,
        )
        for c in report.counterexamples[:COUNTEREXAMPLES_SHOWN]:
            click.echo(warning_message(f"  {c.check} |{c.size}| {c.detail}"), err=True)

    if out is not None:
        write_report(report, out)
        click.echo(f"Report written to {out}")

    if report.exit_code != 0:
        click.get_current_context().exit(report.exit_code)
