"""Tests for shape validation and the baseline containment tests."""
import math

import numpy as np
import pytest

from polar_containment.corpus import gen_polygon, gen_queries
from polar_containment.geometry import (
    DegenerateEdge,
    NonConvex,
    NonFiniteCoordinate,
    NonPlanarFace,
    OpenSurface,
    TooFewVertices,
    ZeroVector,
    half_plane_side,
    point_in_polygon_linear,
    point_in_polygon_logn,
    point_in_polyhedron_linear,
    polar_exact,
    spherical_exact,
    validate_polygon,
    validate_polyhedron,
)
from polar_containment.geometry.core import interior_box_radius, interior_box_radius3
from polar_containment.locators.polar import reference_point
from polar_containment.models import (
    Containment,
    CorpusSpec,
    EdgeLine,
    Plane,
    Point2,
    ShapeFamily,
    Tolerance,
)

from .conftest import CUBE_FACES, CUBE_VERTICES, regular


def _rotate(points, angle):
    c, s = math.cos(angle), math.sin(angle)
    return [(x * c - y * s, x * s + y * c) for x, y in points]


class TestValidatePolygon:
    """Tests for validate_polygon function."""

    def test_square(self, square):
        """Test a counterclockwise square is accepted as given."""
        assert square.n == 4
        assert square.vertices[0] == Point2(0.0, 0.0)
        assert square.diameter == pytest.approx(2 * math.sqrt(2))

    def test_clockwise_is_reversed(self):
        """Test clockwise input is reversed."""
        poly = validate_polygon([(0, 0), (0, 2), (2, 2), (2, 0)])
        assert poly.vertices == (Point2(2, 0), Point2(2, 2), Point2(0, 2), Point2(0, 0))

    def test_edges_point_inward(self, square):
        """Test every edge value is positive at the center."""
        for edge in square.edges:
            assert half_plane_side(edge, (1.0, 1.0)) > 0

    def test_collinear(self):
        """Test three collinear points are rejected."""
        with pytest.raises((TooFewVertices, DegenerateEdge)):
            validate_polygon([(0, 0), (1, 0), (2, 0)])

    def test_too_few(self):
        """Test two points are not a polygon."""
        with pytest.raises(TooFewVertices):
            validate_polygon([(0, 0), (1, 0)])

    def test_reflex(self):
        """Test the reflex vertex at (1,1) is rejected."""
        with pytest.raises(NonConvex, match=r"\(1\.0, 1\.0\)"):
            validate_polygon([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])

    def test_repeated_vertex(self):
        """Test a repeated vertex is rejected."""
        with pytest.raises(DegenerateEdge, match="Repeated"):
            validate_polygon([(0, 0), (2, 0), (2, 0), (2, 2), (0, 2)])

    def test_collinear_middle_vertex(self):
        """Test a vertex in the middle of a straight run is rejected."""
        with pytest.raises(DegenerateEdge, match="Collinear"):
            validate_polygon([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])

    def test_double_winding(self):
        """Test a pentagram-like double loop through convex turns is rejected."""
        pts = [(math.cos(4 * math.pi * k / 5), math.sin(4 * math.pi * k / 5)) for k in range(5)]
        with pytest.raises(NonConvex):
            validate_polygon(pts)

    def test_non_finite(self):
        """Test NaN coordinates are rejected."""
        with pytest.raises(NonFiniteCoordinate):
            validate_polygon([(0, 0), (1, float("nan")), (0, 1)])

    def test_tolerance_scales_with_diameter(self):
        """Test the absolute band scales with the diameter."""
        poly = validate_polygon([(0, 0), (2, 0), (2, 2), (0, 2)], Tolerance(1e-9))
        assert poly.eps == pytest.approx(1e-9 * 2 * math.sqrt(2))

    @pytest.mark.parametrize("angle", [0.3, 1.0, 2.5, 4.0])
    def test_rotation_invariant(self, angle):
        """Test rotated inputs keep their verdicts."""
        hexagon = validate_polygon(_rotate(regular(6), angle))
        assert hexagon.n == 6
        assert hexagon.diameter == pytest.approx(2.0)
        assert all(half_plane_side(edge, (0.0, 0.0)) > 0 for edge in hexagon.edges)

        random16 = gen_polygon(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, 16, seed=1))
        assert validate_polygon(_rotate(random16.vertices, angle)).n == 16

        with pytest.raises(NonConvex):
            validate_polygon(_rotate([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)], angle))
        with pytest.raises(DegenerateEdge, match="Repeated"):
            validate_polygon(_rotate([(0, 0), (2, 0), (2, 0), (2, 2), (0, 2)], angle))
        with pytest.raises(DegenerateEdge, match="Collinear"):
            validate_polygon(_rotate([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)], angle))


class TestValidatePolyhedron:
    """Tests for validate_polyhedron function."""

    def test_unit_cube(self, unit_cube):
        """Test six outward unit planes."""
        assert unit_cube.face_count == 6
        for plane in unit_cube.planes:
            assert math.hypot(plane.nx, plane.ny, plane.nz) == pytest.approx(1.0)
            assert plane.nx * 0.5 + plane.ny * 0.5 + plane.nz * 0.5 - plane.d < 0

    def test_tetrahedron(self, tetrahedron):
        """Test the tetrahedron is accepted."""
        assert tetrahedron.face_count == 4
        assert len(tetrahedron.vertices) == 4

    def test_reversed_ring_is_reoriented(self, unit_cube):
        """Test a reversed face ring is accepted and normalized."""
        faces = list(CUBE_FACES)
        faces[0] = tuple(reversed(faces[0]))
        cube = validate_polyhedron(CUBE_VERTICES, faces)
        assert cube.planes == unit_cube.planes

    def test_open_surface(self):
        """Test a missing face is rejected."""
        with pytest.raises(OpenSurface):
            validate_polyhedron(CUBE_VERTICES, CUBE_FACES[:5])

    def test_non_planar_face(self):
        """Test a warped face is rejected."""
        vertices = list(CUBE_VERTICES)
        vertices[6] = (1, 1, 1.1)
        with pytest.raises(NonPlanarFace):
            validate_polyhedron(vertices, CUBE_FACES)

    def test_non_convex(self):
        """Test a dented cube vertex is rejected."""
        vertices = list(CUBE_VERTICES)
        faces = [(0, 1, 2), (0, 2, 3), (4, 5, 6), (4, 6, 7), (0, 1, 5), (0, 5, 4),
                 (2, 3, 7), (2, 7, 6), (1, 2, 6), (1, 6, 5), (0, 4, 7), (0, 7, 3)]
        vertices[6] = (0.6, 0.6, 0.6)
        with pytest.raises(NonConvex):
            validate_polyhedron(vertices, faces)

    def test_too_few_vertices(self):
        """Test three vertices are not a polyhedron."""
        with pytest.raises(TooFewVertices):
            validate_polyhedron([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])


class TestHalfPlaneSide:
    """Tests for half_plane_side function."""

    edge = EdgeLine(0.0, 1.0, 0.0, 0.0)

    def test_inside(self):
        """Test a point on the inner side."""
        assert half_plane_side(self.edge, (0.5, 0.5)) == 0.5

    def test_on_edge(self):
        """Test a point on the line."""
        assert half_plane_side(self.edge, (0.5, 0.0)) == 0.0

    def test_outside(self):
        """Test a point on the outer side."""
        assert half_plane_side(self.edge, (0.5, -1.0)) == -1.0


class TestLinear:
    """Tests for the O(N) and O(F) baselines."""

    @pytest.mark.parametrize(
        "point, expected",
        [
            ((1, 1), Containment.INSIDE),
            ((3, 1), Containment.OUTSIDE),
            ((2, 1), Containment.BOUNDARY),
            ((2, 2), Containment.BOUNDARY),
        ],
    )
    def test_square(self, square, point, expected):
        """Test the three verdicts on the square."""
        assert point_in_polygon_linear(square, point) == expected

    @pytest.mark.parametrize(
        "point, expected",
        [
            ((0.5, 0.5, 0.5), Containment.INSIDE),
            ((1.5, 0.5, 0.5), Containment.OUTSIDE),
            ((1.0, 0.5, 0.5), Containment.BOUNDARY),
        ],
    )
    def test_unit_cube(self, unit_cube, point, expected):
        """Test the three verdicts on the unit cube."""
        assert point_in_polyhedron_linear(unit_cube, point) == expected

    def test_rejects_nan(self, square):
        """Test NaN query points are rejected."""
        with pytest.raises(NonFiniteCoordinate):
            point_in_polygon_linear(square, (float("nan"), 0.0))

    def test_edge_midpoints_are_boundary(self, triangle, hexagon, gon64):
        """Test every edge midpoint is Boundary."""
        for poly in (triangle, hexagon, gon64):
            for k in range(poly.n):
                a, b = poly.edge_endpoints(k)
                mid = ((a.x + b.x) / 2, (a.y + b.y) / 2)
                assert point_in_polygon_linear(poly, mid) == Containment.BOUNDARY

    def test_unit_cube_strict_interior(self, unit_cube):
        """Test a lattice strictly inside the cube, its face centers and points just outside."""
        steps = [i / 10 for i in range(1, 10)]
        for x in steps:
            for y in steps:
                for z in steps:
                    assert point_in_polyhedron_linear(unit_cube, (x, y, z)) == Containment.INSIDE
        for axis in range(3):
            for value in (0.0, 1.0):
                face_center = [0.5, 0.5, 0.5]
                face_center[axis] = value
                assert point_in_polyhedron_linear(unit_cube, face_center) == Containment.BOUNDARY
                face_center[axis] = value + (1e-6 if value else -1e-6)
                assert point_in_polyhedron_linear(unit_cube, face_center) == Containment.OUTSIDE


class TestLogN:
    """Tests for point_in_polygon_logn function."""

    def test_square(self, square):
        """Test the three verdicts on the square."""
        assert point_in_polygon_logn(square, (1, 1)) == Containment.INSIDE
        assert point_in_polygon_logn(square, (1.5, 0.5)) == Containment.INSIDE
        assert point_in_polygon_logn(square, (2, 1)) == Containment.BOUNDARY
        assert point_in_polygon_logn(square, (-1, 3)) == Containment.OUTSIDE

    def test_gon64(self, gon64):
        """Test points just inside and outside near 10 degrees."""
        a = math.radians(10)
        inside = (0.999 * math.cos(a), 0.999 * math.sin(a))
        outside = (1.001 * math.cos(a), 1.001 * math.sin(a))
        assert point_in_polygon_logn(gon64, inside) == Containment.INSIDE
        assert point_in_polygon_logn(gon64, outside) == Containment.OUTSIDE
        assert point_in_polygon_linear(gon64, inside) == Containment.INSIDE
        assert point_in_polygon_linear(gon64, outside) == Containment.OUTSIDE

    def test_vertices_are_boundary(self, gon64):
        """Test every vertex is Boundary."""
        for v in gon64.vertices:
            assert point_in_polygon_logn(gon64, v) == Containment.BOUNDARY

    def test_matches_linear_on_grid(self, hexagon):
        """Test agreement with the linear test over a lattice of points."""
        for i in range(-12, 13):
            for j in range(-12, 13):
                p = (i / 10, j / 10)
                assert point_in_polygon_logn(hexagon, p) == point_in_polygon_linear(hexagon, p)

    @pytest.mark.parametrize("n", [3, 7, 16, 48, 128])
    def test_matches_linear_on_random_polygons(self, n):
        """Test agreement on the query mixture of random convex polygons."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, n, seed=n))
        pivot = reference_point(poly)
        for p in gen_queries(poly, 1000, seed=n):
            assert point_in_polygon_logn(poly, p, pivot) == point_in_polygon_linear(poly, p)

    @pytest.mark.parametrize(
        "point, expected",
        [
            ((1.0, 0.0), Containment.INSIDE),
            ((1.0, -1.9e-12), Containment.BOUNDARY),
            ((0.9999999, -1.5e-12), Containment.BOUNDARY),
            ((1.0, -6e-12), Containment.OUTSIDE),
        ],
    )
    def test_near_pivot_of_sliver(self, sliver, point, expected):
        """Test points a few eps from a barely-interior pivot follow the linear test."""
        assert point_in_polygon_linear(sliver, point) == expected
        assert point_in_polygon_logn(sliver, point) == expected


class TestExactAngles:
    """Tests for the trigonometric oracles."""

    def test_polar(self):
        """Test the polar oracle on axis and diagonal points."""
        assert polar_exact((1, 0)) == (1.0, 0.0)
        r, phi = polar_exact((0, 2))
        assert (r, phi) == (2.0, pytest.approx(math.pi / 2))
        r, phi = polar_exact((-1, -1))
        assert r == pytest.approx(math.sqrt(2))
        assert phi == pytest.approx(5 * math.pi / 4)

    def test_polar_zero(self):
        """Test the zero vector has no angle."""
        with pytest.raises(ZeroVector):
            polar_exact((0, 0))

    def test_spherical(self):
        """Test the spherical oracle on axis and diagonal points."""
        assert spherical_exact((0, 0, 1)) == (1.0, 0.0, 0.0)
        r, theta, phi = spherical_exact((1, 0, 0))
        assert (r, theta, phi) == (1.0, pytest.approx(math.pi / 2), 0.0)
        r, theta, phi = spherical_exact((0, 1, 1))
        assert r == pytest.approx(math.sqrt(2))
        assert theta == pytest.approx(math.pi / 4)
        assert phi == pytest.approx(math.pi / 2)

    def test_polar_reconstructs_point(self):
        """Test (r cos phi, r sin phi) returns the input across magnitudes."""
        rng = np.random.default_rng(11)
        for angle, exponent in zip(rng.uniform(0, 2 * math.pi, 500), rng.uniform(-6, 6, 500)):
            size = 10.0 ** exponent
            x, y = size * math.cos(angle), size * math.sin(angle)
            r, phi = polar_exact((x, y))
            assert 0.0 <= phi < 2 * math.pi
            assert abs(r * math.cos(phi) - x) <= 1e-9 * r
            assert abs(r * math.sin(phi) - y) <= 1e-9 * r


class TestInteriorBoxRadius:
    """Tests for the shortcut box around a reference point."""

    def test_square_center_gets_full_eps(self, square):
        """Test a well-centered point gets the full eps."""
        assert interior_box_radius(square.edges, 1.0, 1.0, square.eps) == square.eps

    def test_shrinks_with_clearance(self):
        """Test a center 3e-12 from an edge with a 2e-12 band gets half the slack."""
        edges = [EdgeLine(0.0, 1.0, -3e-12, 2e-12)]
        assert interior_box_radius(edges, 0.0, 0.0, 1.0) == pytest.approx(5e-13, rel=1e-3)

    def test_negative_without_clearance(self):
        """Test a point inside the band gets a negative radius."""
        edges = [EdgeLine(0.0, 1.0, -1e-12, 2e-12)]
        assert interior_box_radius(edges, 0.0, 0.0, 1.0) < 0

    def test_planes(self):
        """Test the face-plane variant."""
        planes = [Plane(0.0, 0.0, 1.0, 0.5 + 3e-12)]
        assert interior_box_radius3(planes, 2e-12, (0.0, 0.0, 0.5)) == pytest.approx(5e-13, rel=1e-3)
        assert interior_box_radius3(planes, 2e-12, (0.0, 0.0, 0.0)) == 2e-12
