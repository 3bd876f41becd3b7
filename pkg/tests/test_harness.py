import json

import pytest

from fqcover_cli.errors import BudgetExceeded, FqCoverWarning, ReducibleModulus
from fqcover_cli.harness import (
    run_cover_exhaustive,
    run_cover_sample,
    run_d_of_eps,
    run_geometry,
    run_selftest,
    run_sharpness,
)
from fqcover_cli.model import ExperimentSpec


def spec(**kwargs):
    return ExperimentSpec(**kwargs)


@pytest.mark.parametrize("p,n,subsets", [(5, 1, 6), (7, 1, 29), (2, 2, 5)])
def test_cover_exhaustive_counts(p, n, subsets):
    report = run_cover_exhaustive(spec(p=p, n=n, d=2, mode="exhaustive"))
    assert report.results["subsets"] == subsets
    assert report.tallies["cover"].passed == subsets
    assert report.tallies["cover"].failed == 0
    assert report.counterexamples == []
    assert report.exit_code == 0


@pytest.mark.parametrize("p,n,d", [(3, 1, 2), (2, 3, 2), (3, 2, 2), (3, 1, 3)])
def test_cover_exhaustive_has_no_counterexamples(p, n, d):
    report = run_cover_exhaustive(spec(p=p, n=n, d=d, mode="exhaustive"))
    assert report.counterexamples == []


def test_empirical_threshold_below_theorem():
    report = run_cover_exhaustive(spec(p=7, d=2, mode="exhaustive", sizes=(1, 7)))
    empirical = report.results["empirical_threshold"]
    assert empirical is not None
    assert empirical <= report.results["theorem_threshold"] == 5
    assert report.results["non_covering_by_size"]["1"] > 0
    # sets below the threshold are enumerated but never asserted
    assert report.tallies["cover"].passed == 29


def test_empirical_threshold_descends_below_default_range():
    report = run_cover_exhaustive(spec(p=7, d=2, mode="exhaustive"))
    results = report.results
    assert results["sizes"] == [5, 6, 7]
    assert results["theorem_threshold"] == 5
    assert results["empirical_threshold"] == 4
    assert results["empirical_threshold_exact"]
    assert results["non_covering_below"]["4"] == 0
    assert results["non_covering_below"]["3"] > 0
    assert report.tallies["cover"].passed == 29


def test_empirical_threshold_descent_respects_budget(monkeypatch):
    # 29 sets in the default range, 35 four-element sets below it
    monkeypatch.setenv("FQCOVER_ENUMERATION_BUDGET", "63")
    results = run_cover_exhaustive(spec(p=7, d=2, mode="exhaustive")).results
    assert results["empirical_threshold"] == 5
    assert not results["empirical_threshold_exact"]
    assert results["non_covering_below"] == {}


def test_cover_exhaustive_all_checks():
    checks = ("cover", "keylowerbound", "bilinear", "remainder", "identities", "second_moment")
    report = run_cover_exhaustive(spec(p=5, d=2, mode="exhaustive", checks=checks))
    assert report.counterexamples == []
    assert {"cover", "keylowerbound", "bilinear", "remainder", "second_moment"} <= set(report.tallies)


def test_cover_exhaustive_budget(monkeypatch):
    monkeypatch.setenv("FQCOVER_ENUMERATION_BUDGET", "28")
    with pytest.raises(BudgetExceeded) as e:
        run_cover_exhaustive(spec(p=7, d=2, mode="exhaustive"))
    assert e.value.count == 29


def test_cover_sample_is_deterministic_across_workers():
    s = spec(p=13, d=2, samples=40, seed=42, sizes=(6, 8), checks=("cover", "keylowerbound"))
    one = run_cover_sample(s, workers=1)
    many = run_cover_sample(s, workers=8)
    assert one.to_json() == many.to_json()
    assert one.results["draws"] == 120
    assert one.counterexamples == []


def test_cover_sample_structured_includes_subfield():
    report = run_cover_sample(spec(p=3, n=2, d=2, mode="structured", samples=5))
    names = [row["name"] for row in report.results["structured"]]
    assert "subfield_3^1" in names
    assert report.counterexamples == []


def test_sharpness_gf4():
    report = run_sharpness(spec(p=2, n=2, d=2, mode="structured"))
    assert report.results["subfield"]["elements"] == [0, 1]
    assert report.results["subfield"]["missing_count"] == 2
    assert report.tallies["subfield_closure"].passed == 6
    assert report.tallies["subfield_noncover"].passed == 1
    assert report.exit_code == 0


def test_sharpness_gf25_ratio():
    report = run_sharpness(spec(p=5, n=2, d=2, mode="structured"))
    assert report.results["subfield"]["ratio"] == pytest.approx(5 / 25**0.75)
    assert report.results["subfield"]["ratio"] == pytest.approx(0.447, abs=1e-3)
    assert report.sharpness["largest_noncovering_ratio"] >= report.results["subfield"]["ratio"]


def test_sharpness_odd_degree_warns():
    with pytest.warns(FqCoverWarning):
        report = run_sharpness(spec(p=7, d=2, mode="structured"))
    assert "skipped" in report.results["subfield"]
    assert report.exit_code == 0


def test_geometry_exhaustive_plane_over_f3():
    report = run_geometry(spec(p=3, d=2, mode="exhaustive", checks=("cover",)))
    assert report.results["sets"] == 130
    assert report.tallies["cover"].passed == 130
    assert report.counterexamples == []


def test_geometry_structured_writes_csv():
    checks = ("cover", "remainder", "keylowerbound", "identities", "second_moment")
    report = run_geometry(spec(p=5, d=2, mode="structured", checks=checks), csv_path="worst.csv")
    assert report.counterexamples == []
    assert report.tallies["remainder"].passed == report.results["sets"]
    with open("worst.csv") as f:
        assert f.readline().strip() == "t_index,nu,r_numerator"


def test_geometry_sample():
    checks = ("cover", "remainder", "keylowerbound", "identities", "second_moment")
    report = run_geometry(spec(p=3, n=2, d=2, samples=10, seed=7, checks=checks), workers=2)
    assert report.counterexamples == []
    assert report.results["sets"] == 10


def test_d_of_eps():
    report = run_d_of_eps("1/10")
    assert report.results == {"eps": "1/10", "d_cover": 5, "d_proportion": 3}


def test_selftest_small_roster():
    report = run_selftest(roster=(2, 3, 4, 5), dims=(1, 2))
    assert report.counterexamples == []
    assert report.tallies["reducible_modulus_rejected"].passed == 1
    assert report.tallies["field_axioms"].passed == 4
    assert report.tallies["nu_consistency"].passed == 8


def test_selftest_corrupted_modulus_fails_fast():
    with pytest.raises(ReducibleModulus):
        run_selftest(roster=(2, 4), dims=(1,), corrupt_modulus=True)


def test_report_json_shape():
    report = run_cover_exhaustive(spec(p=5, d=2, mode="exhaustive"))
    data = json.loads(report.to_json())
    assert data["schema"] == 1
    assert data["field"]["modulus"] == [0, 1]
    assert "wall_clock" not in data
    assert data["spec"]["p"] == 5
