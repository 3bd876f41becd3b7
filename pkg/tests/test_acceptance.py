"""
Full-size runs over the field roster. Deselect with `pytest -m "not slow"`.
"""

import numpy as np
import pytest

from fqcover_cli.covering import (
    ScalarSet,
    covers_units,
    dot_product_set,
    key_lower_bound_check,
    sum_of_products,
)
from fqcover_cli.families import point_families, sample_rng
from fqcover_cli.gf import field_of_order
from fqcover_cli.harness import (
    HEAVY_POINTS,
    SELFTEST_ROSTER,
    run_cover_exhaustive,
    run_cover_sample,
    run_geometry,
    run_selftest,
    run_sharpness,
)
from fqcover_cli.incidence import (
    PointSet,
    nu_bruteforce,
    nu_spectral,
    remainder_bound_check,
    second_moment_check,
    strip_origin,
    verify_hyperplane_identity,
)
from fqcover_cli.model import ExperimentSpec

pytestmark = pytest.mark.slow

SPACES = [(q, d) for q in SELFTEST_ROSTER for d in (1, 2, 3) if q**d <= HEAVY_POINTS]


def random_sets(count, seed, dims=(1, 2, 3), origin=True):
    """`count` random point sets cycling through the roster spaces."""
    spaces = [(q, d) for q, d in SPACES if d in dims]
    for i in range(count):
        q, d = spaces[i % len(spaces)]
        F = field_of_order(q)
        rng = sample_rng(seed, i)
        bits = rng.random(q**d) < rng.random()
        if not origin:
            bits[0] = False
        yield PointSet(F, d, bits)


def structured_sets(dims=(2, 3)):
    for q, d in SPACES:
        if d in dims:
            for name, E in point_families(field_of_order(q), d):
                yield f"GF({q})^{d} {name}", E


def test_fourier_identities_on_roster():
    report = run_selftest()
    assert report.counterexamples == []
    for check in ("orthogonality", "inversion", "plancherel", "convolution_transform"):
        assert report.tallies[check].failed == 0
        assert report.tallies[check].passed > 0


def test_spectral_nu_matches_direct_count():
    for E in random_sets(500, seed=1):
        direct = nu_bruteforce(E)
        assert direct.total == E.count**2
        assert np.array_equal(nu_spectral(E).nu, direct.nu)


def test_remainder_bound():
    for E in random_sets(1000, seed=2):
        assert remainder_bound_check(E).holds

    structured = list(structured_sets())
    assert len(structured) >= 50
    for name, E in structured:
        assert remainder_bound_check(E).holds, name


def test_key_lower_bound_and_second_moment():
    sets = list(random_sets(1000, seed=3, origin=False))
    sets += [strip_origin(E) for _, E in structured_sets()]
    for E in sets:
        if E.count == 0:
            continue
        assert key_lower_bound_check(E).holds
        report = second_moment_check(E)
        assert report.holds
        assert report.plane_bound_holds
        assert report.cauchy_schwarz_holds


def test_hyperplane_identity():
    for E in random_sets(200, seed=4, dims=(2, 3), origin=False):
        if E.count == 0:
            continue
        report = verify_hyperplane_identity(E)
        assert report.holds
        assert report.max_error <= 1e-8


def test_dot_products_of_product_sets():
    spaces = [(q, d) for q in SELFTEST_ROSTER for d in (2, 3)]
    for i in range(200):
        q, d = spaces[i % len(spaces)]
        F = field_of_order(q)
        A = ScalarSet(F, sample_rng(5, i).random(q) < 0.5)
        E = PointSet.product(F, [A.elements] * d)
        assert dot_product_set(E) == sum_of_products(A, d)


@pytest.mark.parametrize("q,d", [(3, 2), (4, 2), (5, 2), (7, 2), (8, 2), (9, 2), (3, 3)])
def test_exhaustive_coverage(q, d):
    F = field_of_order(q)
    report = run_cover_exhaustive(ExperimentSpec(p=F.p, n=F.n, d=d, mode="exhaustive"))
    assert report.counterexamples == []
    assert report.tallies["cover"].passed == report.results["subsets"]


def test_exhaustive_dot_products_over_f3_plane():
    report = run_geometry(ExperimentSpec(p=3, d=2, mode="exhaustive", checks=("cover",)))
    assert report.results["sets"] == 130
    assert report.counterexamples == []


@pytest.mark.parametrize("q", [4, 9, 16, 25])
def test_half_degree_subfield_is_closed(q):
    F = field_of_order(q)
    A = ScalarSet.from_elements(F, F.subfield(F.n // 2))
    assert A.count**2 == q
    for d in range(1, 7):
        S = sum_of_products(A, d)
        assert S == A
        assert not covers_units(S)[0]

    report = run_sharpness(ExperimentSpec(p=F.p, n=F.n, d=2))
    assert report.tallies["subfield_closure"].passed == 6
    assert report.tallies["subfield_noncover"].passed == 1


def test_cover_sample_determinism_at_full_size():
    spec = ExperimentSpec(p=101, d=2, sizes=(33, 33), samples=2000, seed=42)
    one = run_cover_sample(spec, workers=1)
    eight = run_cover_sample(spec, workers=8)
    assert one.to_json() == eight.to_json()
    assert one.counterexamples == []
    assert one.results["non_covering_by_size"]["33"] == 0
