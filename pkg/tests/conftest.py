import random

import pytest

from genericity.models.surface import SurfaceSpec
from genericity.services.generators import default_library
from genericity.services.triangulations import build_triangulation


SHIPPED_SURFACES = [SurfaceSpec(1, 1), SurfaceSpec(0, 4), SurfaceSpec(1, 2), SurfaceSpec(0, 5), SurfaceSpec(2, 1)]


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def library():
    return default_library()


@pytest.fixture
def torus():
    return SurfaceSpec(1, 1)


@pytest.fixture
def torus_tri(torus):
    return build_triangulation(torus)


@pytest.fixture
def cache_dir(tmp_path):
    path = tmp_path / "cache"
    path.mkdir()
    return path
