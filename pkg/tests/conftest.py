"""Shared shape fixtures."""
import math

import pytest

from polar_containment.geometry import validate_polygon, validate_polyhedron

CUBE_VERTICES = [
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
]
CUBE_FACES = [
    (0, 3, 2, 1),  # z = 0
    (4, 5, 6, 7),  # z = 1
    (0, 1, 5, 4),  # y = 0
    (2, 3, 7, 6),  # y = 1
    (1, 2, 6, 5),  # x = 1
    (0, 4, 7, 3),  # x = 0
]
TETRA_VERTICES = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
TETRA_FACES = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]


def regular(n, radius=1.0):
    return [
        (radius * math.cos(2 * math.pi * k / n), radius * math.sin(2 * math.pi * k / n))
        for k in range(n)
    ]


@pytest.fixture
def square():
    """Axis-aligned square (0,0)-(2,2)."""
    return validate_polygon([(0, 0), (2, 0), (2, 2), (0, 2)])


@pytest.fixture
def unit_square():
    return validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def triangle():
    return validate_polygon([(0, 0), (4, 0), (0, 4)])


@pytest.fixture
def hexagon():
    """Regular hexagon on the unit circle starting at angle 0."""
    return validate_polygon(regular(6))


@pytest.fixture
def gon64():
    return validate_polygon(regular(64))


@pytest.fixture
def unit_cube():
    return validate_polyhedron(CUBE_VERTICES, CUBE_FACES)


@pytest.fixture
def tetrahedron():
    return validate_polyhedron(TETRA_VERTICES, TETRA_FACES)


@pytest.fixture
def sliver():
    """Quad whose bottom vertex dips 3e-12 below the chord joining (0,0) and (2,0)."""
    return validate_polygon([(0, 0), (1, -3e-12), (2, 0), (1, 1)])
