"""Tests for shape generation and query mixtures."""
import math

import pytest

from polar_containment.corpus import (
    CorpusError,
    default_corpus_2d,
    default_corpus_3d,
    gen_polygon,
    gen_polyhedron,
    gen_queries,
    geodesic_sphere,
    parse_corpus,
)
from polar_containment.geometry import point_in_polygon_linear, point_in_polyhedron_linear
from polar_containment.locators.slab import build_slabs, min_edge_rise
from polar_containment.models import Containment, CorpusSpec, ShapeFamily


class TestParseCorpus:
    """Tests for parse_corpus function."""

    def test_polygon(self):
        """Test a 2D corpus string."""
        spec = parse_corpus("needle-2d:n=16,k=4,rot=0.25,seed=9")
        assert spec == CorpusSpec(ShapeFamily.NEEDLE_2D, 16, rotation=0.25, seed=9, exponent=4)

    def test_defaults(self):
        """Test the default seed is applied when the string has none."""
        spec = parse_corpus("regular-ngon:n=8", default_seed=5)
        assert spec.seed == 5
        assert spec.rotation == 0.0

    def test_level(self):
        """Test a 3D corpus string takes a level."""
        assert parse_corpus("geodesic-sphere:level=3").size == 3

    def test_label_round_trip(self):
        """Test a spec label parses back to the same spec."""
        spec = CorpusSpec(ShapeFamily.TILTED_NGON, 24, rotation=0.1, seed=2, exponent=6)
        assert parse_corpus(spec.label()) == spec

    @pytest.mark.parametrize(
        "text, message",
        [
            ("hexagonal:n=6", "Unknown shape family"),
            ("regular-ngon:n", "key=value"),
            ("regular-ngon:n=8,size=3", "Unknown corpus parameter"),
            ("regular-ngon:n=eight", "Invalid number"),
            ("regular-ngon:n=2", "n >= 3"),
            ("geodesic-sphere:level=4", "0..3"),
        ],
    )
    def test_errors(self, text, message):
        """Test malformed corpus strings name the problem."""
        with pytest.raises(CorpusError, match=message):
            parse_corpus(text)


class TestGenPolygon:
    """Tests for gen_polygon function."""

    def test_regular_square(self):
        """Test the 4-gon is the square inscribed in the unit circle."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.REGULAR_NGON, 4))
        assert poly.n == 4
        assert poly.vertices[0] == (1.0, 0.0)
        assert poly.vertices[1].x == pytest.approx(0.0, abs=1e-15)
        assert poly.vertices[1].y == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [3, 5, 16, 64, 128])
    def test_random_convex_is_valid(self, n):
        """Test random convex polygons pass validation for every size."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, n, seed=n))
        assert poly.n == n

    def test_deterministic(self):
        """Test the same spec gives the same polygon."""
        spec = CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, 32, rotation=1.0, seed=77)
        assert gen_polygon(spec).vertices == gen_polygon(spec).vertices

    def test_seeds_differ(self):
        """Test different seeds give different polygons."""
        a = gen_polygon(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, 16, seed=1))
        b = gen_polygon(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, 16, seed=2))
        assert a.vertices != b.vertices

    def test_needle_is_flat(self):
        """Test needle polygons have the requested flatness."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.NEEDLE_2D, 16, exponent=6))
        assert max(abs(v.y) for v in poly.vertices) <= 1e-6
        assert min_edge_rise(poly) < 1e-5

    def test_tilted_edge_rise(self):
        """Test the top edge rises by 10^-k of the diameter."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.TILTED_NGON, 16, exponent=4))
        assert min_edge_rise(poly) == pytest.approx(1e-4 * poly.diameter, rel=1e-6)

    def test_tilted_k6_caps_slabs(self):
        """Test k=6 tilted polygons hit the slab cap."""
        poly = gen_polygon(CorpusSpec(ShapeFamily.TILTED_NGON, 16, exponent=6))
        assert build_slabs(poly).capped is True

    def test_rotation_preserves_shape(self):
        """Test rotation keeps the diameter."""
        base = gen_polygon(CorpusSpec(ShapeFamily.REGULAR_NGON, 7))
        turned = gen_polygon(CorpusSpec(ShapeFamily.REGULAR_NGON, 7, rotation=math.pi / 7))
        assert turned.diameter == pytest.approx(base.diameter)
        assert turned.vertices[0].x == pytest.approx(math.cos(math.pi / 7))

    def test_rejects_3d_family(self):
        """Test gen_polygon refuses a 3D family."""
        with pytest.raises(CorpusError):
            gen_polygon(CorpusSpec(ShapeFamily.GEODESIC_SPHERE, 1))


class TestGenPolyhedron:
    """Tests for gen_polyhedron function."""

    def test_icosahedron(self):
        """Test level 0 is the icosahedron."""
        ph = gen_polyhedron(CorpusSpec(ShapeFamily.GEODESIC_SPHERE, 0))
        assert ph.face_count == 20
        assert len(ph.vertices) == 12

    @pytest.mark.parametrize("level, faces", [(1, 80), (2, 320), (3, 1280)])
    def test_subdivision_counts(self, level, faces):
        """Test face and vertex counts per subdivision level."""
        verts, rings = geodesic_sphere(level)
        assert len(rings) == faces
        assert len(verts) == 10 * 4 ** level + 2

    def test_level2_validates(self):
        """Test a level 2 sphere passes validation."""
        assert gen_polyhedron(CorpusSpec(ShapeFamily.GEODESIC_SPHERE, 2)).face_count == 320

    def test_vertices_on_unit_sphere(self):
        """Test sphere vertices have unit length."""
        verts, _ = geodesic_sphere(2)
        for v in verts:
            assert math.sqrt(sum(c * c for c in v)) == pytest.approx(1.0)

    def test_affine_deterministic(self):
        """Test the same seed gives the same affine image."""
        spec = CorpusSpec(ShapeFamily.AFFINE_GEODESIC, 1, seed=6)
        a, b = gen_polyhedron(spec), gen_polyhedron(spec)
        assert a.vertices == b.vertices
        assert a.face_count == 80

    def test_rejects_2d_family(self):
        """Test gen_polyhedron refuses a 2D family."""
        with pytest.raises(CorpusError):
            gen_polyhedron(CorpusSpec(ShapeFamily.REGULAR_NGON, 8))


class TestGenQueries:
    """Tests for gen_queries function."""

    def test_one_vertex_per_block(self, unit_square):
        """Test each block of ten holds exactly one vertex."""
        points = gen_queries(unit_square, 10, seed=1)
        assert len(points) == 10
        assert sum(1 for p in points if p in unit_square.vertices) == 1

    def test_finite(self, hexagon):
        """Test every coordinate is finite."""
        assert all(p.is_finite() for p in gen_queries(hexagon, 100, seed=2))

    def test_count_not_multiple_of_ten(self, hexagon):
        """Test the count is honored when it is not a multiple of ten."""
        assert len(gen_queries(hexagon, 23, seed=2)) == 23

    def test_deterministic(self, hexagon):
        """Test the same seed gives the same points."""
        assert gen_queries(hexagon, 50, seed=3) == gen_queries(hexagon, 50, seed=3)

    def test_displaced_pairs_straddle_polygon_boundary(self, hexagon):
        """Test the outward point is Outside and the inward one Inside."""
        points = gen_queries(hexagon, 500, seed=4)
        for block in range(50):
            outward, inward = points[10 * block + 6], points[10 * block + 7]
            assert point_in_polygon_linear(hexagon, outward) == Containment.OUTSIDE
            assert point_in_polygon_linear(hexagon, inward) == Containment.INSIDE

    def test_boundary_samples(self, hexagon):
        """Test the exact boundary samples classify as Boundary."""
        points = gen_queries(hexagon, 200, seed=5)
        for block in range(20):
            assert point_in_polygon_linear(hexagon, points[10 * block + 8]) == Containment.BOUNDARY
            assert point_in_polygon_linear(hexagon, points[10 * block + 9]) == Containment.BOUNDARY

    def test_displaced_pairs_straddle_polyhedron_boundary(self, unit_cube):
        """Test the displaced pair straddles a face of the cube."""
        points = gen_queries(unit_cube, 300, seed=6)
        for block in range(30):
            outward, inward = points[10 * block + 6], points[10 * block + 7]
            assert point_in_polyhedron_linear(unit_cube, outward) == Containment.OUTSIDE
            assert point_in_polyhedron_linear(unit_cube, inward) == Containment.INSIDE


class TestDefaultCorpora:
    """Tests for the built-in corpora."""

    def test_2d_size_and_families(self):
        """Test the 2D corpus size and its families."""
        specs = default_corpus_2d()
        assert len(specs) >= 200
        families = {s.family for s in specs}
        assert {ShapeFamily.REGULAR_NGON, ShapeFamily.RANDOM_CONVEX_2D, ShapeFamily.NEEDLE_2D} <= families
        rotated = [s for s in specs if s.family == ShapeFamily.RANDOM_CONVEX_2D and s.rotation]
        assert len(rotated) == 100
        assert all(3 <= s.size <= 128 for s in specs)

    def test_3d(self):
        """Test the 3D corpus covers every level."""
        specs = default_corpus_3d()
        assert len(specs) == 24
        assert {s.size for s in specs} == {0, 1, 2, 3}
