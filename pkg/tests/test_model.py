import json

import pytest
from pydantic import ValidationError

from fqcover_cli.errors import BoundViolated, IdentityViolated
from fqcover_cli.model import (
    CheckTally,
    Counterexample,
    ExperimentSpec,
    FieldDescriptor,
    IdentityReport,
    RemainderEntry,
    RemainderReport,
    RunReport,
)


def test_big_integers_become_strings():
    entry = RemainderEntry(t=1, nu=2**60, r_numerator=-3, holds=True)
    data = entry.model_dump(mode="json")
    assert data["nu"] == str(2**60)
    assert data["r_numerator"] == -3
    assert entry.model_dump()["nu"] == 2**60


@pytest.mark.parametrize(
    "kwargs",
    [
        {"p": 5, "d": 0},
        {"p": 5, "samples": -1},
        {"p": 5, "seed": 2**64},
        {"p": 5, "sizes": (4, 3)},
        {"p": 5, "checks": ("nope",)},
        {"p": 5, "mode": "random"},
    ],
)
def test_experiment_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        ExperimentSpec(**kwargs)


def test_experiment_spec_is_frozen():
    spec = ExperimentSpec(p=5)
    with pytest.raises(ValidationError):
        spec.p = 7


def test_remainder_report_raises():
    report = RemainderReport(
        field=FieldDescriptor(p=5, n=1, q=5, modulus=[0, 1]),
        d=2,
        size=3,
        entries=[],
        sharpness=1.5,
        zero_ratio=0.0,
        violations=[2],
    )
    assert not report.holds
    with pytest.raises(BoundViolated) as e:
        report.raise_for_violation()
    assert e.value.t == 2
    assert e.value.exit_code == 2


def test_identity_report():
    assert IdentityReport(name="x", max_error=1e-12, tolerance=1e-8).holds
    with pytest.raises(IdentityViolated):
        IdentityReport(name="x", max_error=1e-3, tolerance=1e-8).raise_for_violation()


def test_tally_merge():
    merged = CheckTally(passed=2, failed=1).merge(CheckTally(passed=3))
    assert (merged.passed, merged.failed) == (5, 1)


def test_run_report_exit_code_and_json():
    report = RunReport(command="x", wall_clock=12.5)
    assert report.exit_code == 0
    failing = RunReport(
        command="x",
        counterexamples=[Counterexample(check="cover", size=2, elements=[1, 2])],
    )
    assert failing.exit_code == 2
    text = failing.to_json()
    assert text.endswith("\n")
    data = json.loads(text)
    assert data["schema"] == 1
    assert "wall_clock" not in data
    assert list(data) == sorted(data)
