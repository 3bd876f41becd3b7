import sys

import numpy as np
import pytest

from fqcover_cli.gf import make_field
from fqcover_cli.incidence import PointSet


# each test runs on cwd to its temp dir
@pytest.fixture(autouse=True)
def go_to_tmpdir(request):
    # Get the fixture dynamically by its name.
    tmpdir = request.getfixturevalue("tmpdir")
    # ensure local test created packages can be imported
    sys.path.insert(0, str(tmpdir))
    # Chdir only for the duration of the test.
    with tmpdir.as_cwd():
        yield


@pytest.fixture
def gf4():
    return make_field(2, 2)


@pytest.fixture
def gf5():
    return make_field(5)


@pytest.fixture
def gf9():
    return make_field(3, 2)


@pytest.fixture(params=[(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)], ids=lambda pn: f"GF({pn[0]}^{pn[1]})")
def small_field(request):
    p, n = request.param
    return make_field(p, n)


def random_point_set(field, d, rng, density=0.5, origin=True):
    bits = rng.random(field.q**d) < density
    if not origin:
        bits[0] = False
    return PointSet(field, d, bits)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))
