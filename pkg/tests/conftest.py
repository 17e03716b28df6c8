import os

# keep test runs from filling logs/ with one file per session
os.environ.setdefault("LOG_TO_FILE", "false")

import numpy as np
import pytest

from common.settings import get_numeric_settings, get_sampler_settings
from delaunay_measure.fixtures import hexagon_patch, octahedron, tetrahedron
from delaunay_measure.mesh import delaunay_build


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    get_numeric_settings.cache_clear()
    get_sampler_settings.cache_clear()
    yield
    get_numeric_settings.cache_clear()
    get_sampler_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tetra():
    return tetrahedron()


@pytest.fixture
def octa():
    return octahedron()


@pytest.fixture
def hexagon():
    return hexagon_patch()


@pytest.fixture
def tetra_mesh(tetra):
    return delaunay_build(tetra)


@pytest.fixture
def octa_mesh(octa):
    return delaunay_build(octa)


@pytest.fixture
def hexagon_mesh(hexagon):
    return delaunay_build(hexagon)
