import os

import pytest
from hypothesis import HealthCheck, settings

from vunfold.mesh import build_plane_graph
from vunfold.shapes import builtin_shape

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile(
    "ci", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Tetrahedron on vertices 1..4 shifted to 0..3, faces A=123, B=124, C=134,
# D=234 in that id order, wound counterclockwise from outside.
TETRA_FACES = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
A, B, C, D = range(4)


@pytest.fixture
def tetra():
    return build_plane_graph(TETRA_FACES)


@pytest.fixture(scope="session")
def pyramid4():
    return builtin_shape("pyramid:4")


@pytest.fixture(scope="session")
def octahedron():
    return builtin_shape("octahedron")


@pytest.fixture(scope="session")
def antiprism5():
    return builtin_shape("antiprism:5")
