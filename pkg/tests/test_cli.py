import json

import pytest
from click.testing import CliRunner

from fqcover_cli.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "fqcover_cli" in result.output


def test_cover_exhaustive(runner):
    result = runner.invoke(
        cli, ["cover-exhaustive", "--p", "5", "--d", "2", "--out", "report.json"]
    )
    assert result.exit_code == 0, result.output
    assert "cover" in result.output
    with open("report.json") as f:
        data = json.load(f)
    assert data["schema"] == 1
    assert data["results"]["subsets"] == 6
    assert data["tallies"]["cover"] == {"failed": 0, "passed": 6}


def test_cover_exhaustive_budget_exit_code(runner, monkeypatch):
    monkeypatch.setenv("FQCOVER_ENUMERATION_BUDGET", "10")
    result = runner.invoke(cli, ["cover-exhaustive", "--p", "7", "--d", "2"])
    assert result.exit_code == 4
    assert "29" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["cover-exhaustive", "--p", "4", "--d", "2"],
        ["cover-exhaustive", "--p", "5", "--d", "0"],
        ["cover-exhaustive", "--p", "5", "--d", "2", "--sizes", "5..4"],
        ["cover-sample", "--p", "5", "--d", "2", "--checks", "cover,unknown"],
        ["cover-sample", "--p", "five", "--d", "2"],
        ["d-of-eps", "--eps", "3/4"],
        ["d-of-eps", "--eps", "abc"],
        ["geometry", "--p", "2", "--n", "30", "--d", "2"],
    ],
)
def test_bad_spec_exit_code(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 3, result.output
    assert "ERROR" in result.output


def test_cover_sample_reports_are_byte_identical(runner):
    args = ["cover-sample", "--p", "13", "--d", "2", "--samples", "30", "--seed", "42"]
    first = runner.invoke(cli, args + ["--workers", "1", "--out", "one.json"])
    second = runner.invoke(cli, args + ["--workers", "8", "--out", "eight.json"])
    assert first.exit_code == 0, first.output
    assert second.exit_code == 0, second.output
    with open("one.json") as a, open("eight.json") as b:
        assert a.read() == b.read()


def test_sharpness(runner):
    result = runner.invoke(cli, ["sharpness", "--p", "3", "--n", "2", "--d", "2"])
    assert result.exit_code == 0, result.output
    assert "subfield_3^1" in result.output


def test_sharpness_warns_without_subfield(runner):
    result = runner.invoke(cli, ["sharpness", "--p", "5", "--n", "1"])
    assert result.exit_code == 0, result.output
    assert "WARNING" in result.output


def test_geometry_csv(runner):
    result = runner.invoke(
        cli,
        ["geometry", "--p", "3", "--d", "2", "--mode", "structured", "--csv", "nu.csv"],
    )
    assert result.exit_code == 0, result.output
    with open("nu.csv") as f:
        assert f.readline().strip() == "t_index,nu,r_numerator"


def test_d_of_eps(runner):
    result = runner.invoke(cli, ["d-of-eps", "--eps", "1/4", "--out", "eps.json"])
    assert result.exit_code == 0, result.output
    with open("eps.json") as f:
        assert json.load(f)["results"] == {"eps": "1/4", "d_cover": 2, "d_proportion": 2}


def test_selftest_corrupted_modulus(runner):
    result = runner.invoke(cli, ["selftest", "--corrupt-modulus"])
    assert result.exit_code == 3
    assert "reducible" in result.output
