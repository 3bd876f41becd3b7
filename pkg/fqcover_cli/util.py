import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from fqcover_cli.errors import BadEpsilon, BadSpec
from fqcover_cli.model import ALL_CHECKS, FieldDescriptor, RunReport

size_range_regex = re.compile(r"^\s*(?P<lo>\d+)\s*(\.\.\s*(?P<hi>\d+))?\s*$")


def pp(x: Optional[float], decimals: int = 3) -> str:
    if x is None:
        return ""
    return f"{x:.{decimals}f}"


def format_field(field: Optional[FieldDescriptor]) -> str:
    if field is None:
        return ""
    if field.n == 1:
        return f"GF({field.p})"
    return f"GF({field.p}^{field.n})"


def parse_size_range(text: Optional[str]) -> Optional[Tuple[int, int]]:
    """'a..b' to (a, b); a single 'a' means a..a."""
    if text is None:
        return None

    parts = size_range_regex.match(text)

    if parts is None:
        raise BadSpec(f"Could not parse size range '{text}'. Examples: '4..5', '33'")

    lo = int(parts.group("lo"))
    hi = int(parts.group("hi")) if parts.group("hi") else lo

    if lo > hi:
        raise BadSpec(f"Empty size range '{text}'")

    return lo, hi


def parse_checks(text: Optional[str]) -> Optional[Tuple[str, ...]]:
    if text is None:
        return None

    checks = tuple(c.strip() for c in text.split(",") if c.strip())
    unknown = [c for c in checks if c not in ALL_CHECKS]

    if unknown:
        raise BadSpec(
            f"Unknown checks {', '.join(unknown)}. Known: {', '.join(ALL_CHECKS)}"
        )

    return checks


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise BadEpsilon(f"Could not read '{text}' as a rational number, e.g. '1/4'")


def summary_rows(report: RunReport) -> List[Dict[str, object]]:
    return [
        {
            "check": check,
            "passed": tally.passed,
            "failed": tally.failed,
            "sharpness": pp(report.sharpness.get(check)),
        }
        for check, tally in report.tallies.items()
    ]


def write_report(report: RunReport, path: Path) -> Path:
    with open(path, "w") as f:
        f.write(report.to_json())
    return path
