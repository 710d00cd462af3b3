"""Deterministic shape families and query point mixtures."""
import logging
import math
from typing import Optional, Union

import numpy as np

from .geometry.core import GeometryError, validate_polygon, validate_polyhedron
from .models import (
    ConvexPolygon,
    ConvexPolyhedron,
    CorpusSpec,
    Point2,
    Point3,
    ShapeFamily,
    Tolerance,
)

logger = logging.getLogger(__name__)

Shape = Union[ConvexPolygon, ConvexPolyhedron]

MAX_ATTEMPTS = 1000
BOUNDARY_OFFSET = 1e-9
PHI = (1.0 + math.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = [
    (-1, PHI, 0), (1, PHI, 0), (-1, -PHI, 0), (1, -PHI, 0),
    (0, -1, PHI), (0, 1, PHI), (0, -1, -PHI), (0, 1, -PHI),
    (PHI, 0, -1), (PHI, 0, 1), (-PHI, 0, -1), (-PHI, 0, 1),
]
ICOSAHEDRON_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


class CorpusError(Exception):
    """Invalid corpus description or a generator that could not succeed."""
    pass


def parse_corpus(text: str, default_seed: int = 1) -> CorpusSpec:
    """Parse ``family:key=value,...`` (keys: n, level, k, rot, seed).

    Examples:
        regular-ngon:n=64
        needle-2d:n=16,k=6,rot=0.3
        geodesic-sphere:level=2
    """
    family_text, _, params = text.strip().partition(":")
    try:
        family = ShapeFamily(family_text)
    except ValueError:
        valid = ", ".join(f.value for f in ShapeFamily)
        raise CorpusError(f"Unknown shape family '{family_text}'. Valid families: {valid}")

    values = {}
    for item in filter(None, (p.strip() for p in params.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise CorpusError(f"Expected key=value in '{text}', got '{item}'")
        values[key.strip()] = value.strip()

    unknown = set(values) - {"n", "level", "k", "rot", "seed"}
    if unknown:
        raise CorpusError(f"Unknown corpus parameter(s) {sorted(unknown)} in '{text}'")

    try:
        size = int(values.get("level" if family.is_3d else "n", 0 if family.is_3d else 16))
        spec = CorpusSpec(
            family=family,
            size=size,
            rotation=float(values.get("rot", 0.0)),
            seed=int(values.get("seed", default_seed)),
            exponent=int(values.get("k", 6)),
        )
    except ValueError as e:
        raise CorpusError(f"Invalid number in '{text}': {e}")

    if family.is_3d and not 0 <= spec.size <= 3:
        raise CorpusError(f"Geodesic level must be in 0..3, got {spec.size}")
    if not family.is_3d and spec.size < 3:
        raise CorpusError(f"A polygon needs n >= 3, got {spec.size}")
    return spec


def _rotate(xy: np.ndarray, angle: float) -> np.ndarray:
    if not angle:
        return xy
    c, s = math.cos(angle), math.sin(angle)
    return xy @ np.array([[c, s], [-s, c]])


def _regular(n: int, start: float = 0.0) -> np.ndarray:
    theta = start + 2.0 * math.pi * np.arange(n) / n
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _random_convex(n: int, rng: np.random.Generator, tol: Tolerance) -> ConvexPolygon:
    for attempt in range(1, MAX_ATTEMPTS + 1):
        theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.diff(np.append(theta, theta[0] + 2.0 * math.pi))
        if gaps.min() < 1e-6:
            continue
        # Inward jitter bounded by the local sagitta keeps most draws convex.
        sagitta = gaps * np.roll(gaps, 1) / 2.0
        radius = 1.0 - 0.25 * rng.uniform(0.0, 1.0, n) * sagitta
        minor = rng.uniform(0.3, 1.0)
        xy = np.column_stack([radius * np.cos(theta), minor * radius * np.sin(theta)])
        try:
            return validate_polygon(xy.tolist(), tol)
        except GeometryError as e:
            logger.debug("random-convex-2d attempt %d rejected: %s", attempt, e)
    raise CorpusError(f"No convex polygon with n={n} after {MAX_ATTEMPTS} attempts")


def gen_polygon(spec: CorpusSpec, tolerance: Optional[Tolerance] = None) -> ConvexPolygon:
    """Generate the polygon described by ``spec``; identical specs give identical geometry."""
    tol = tolerance or Tolerance()
    n = spec.size
    rng = np.random.default_rng(spec.seed)

    if spec.family == ShapeFamily.RANDOM_CONVEX_2D:
        poly = _random_convex(n, rng, tol)
        if not spec.rotation:
            return poly
        xy = np.array(poly.vertices)
    elif spec.family == ShapeFamily.REGULAR_NGON:
        xy = _regular(n)
    elif spec.family == ShapeFamily.NEEDLE_2D:
        xy = _regular(n) * np.array([1.0, 10.0 ** -spec.exponent])
    elif spec.family == ShapeFamily.TILTED_NGON:
        # Edge 0 starts horizontal on top; the tilt lifts one end by 10^-k * diameter.
        diameter = 2.0 if n % 2 == 0 else 2.0 * math.cos(math.pi / (2 * n))
        chord = 2.0 * math.sin(math.pi / n)
        tilt = math.asin(min(1.0, 10.0 ** -spec.exponent * diameter / chord))
        xy = _regular(n, start=math.pi / 2 - math.pi / n + tilt)
    else:
        raise CorpusError(f"{spec.family.value} is not a 2D family")

    return validate_polygon(_rotate(xy, spec.rotation).tolist(), tol)


def geodesic_sphere(level: int) -> tuple[list[tuple[float, float, float]], list[tuple[int, int, int]]]:
    """Icosahedron subdivided ``level`` times, vertices projected to the unit sphere."""
    verts = [tuple(np.asarray(v, dtype=np.float64) / np.linalg.norm(v)) for v in ICOSAHEDRON_VERTICES]
    faces = list(ICOSAHEDRON_FACES)
    for _ in range(level):
        midpoints: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (min(a, b), max(a, b))
            if key not in midpoints:
                p = (np.asarray(verts[a]) + np.asarray(verts[b])) / 2.0
                verts.append(tuple(p / np.linalg.norm(p)))
                midpoints[key] = len(verts) - 1
            return midpoints[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = refined
    return [tuple(float(c) for c in v) for v in verts], faces


def _well_conditioned_map(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random linear map with singular values in [1, 10], plus a translation."""
    q1, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    q2, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    singular = rng.uniform(1.0, 10.0, 3)
    return q1 @ np.diag(singular) @ q2, rng.uniform(-2.0, 2.0, 3)


def gen_polyhedron(spec: CorpusSpec, tolerance: Optional[Tolerance] = None) -> ConvexPolyhedron:
    """Generate a geodesic sphere, optionally under a random well-conditioned affine map."""
    if not spec.family.is_3d:
        raise CorpusError(f"{spec.family.value} is not a 3D family")
    verts, faces = geodesic_sphere(spec.size)
    if spec.family == ShapeFamily.AFFINE_GEODESIC:
        linear, shift = _well_conditioned_map(np.random.default_rng(spec.seed))
        verts = (np.asarray(verts) @ linear.T + shift).tolist()
    return validate_polyhedron(verts, faces, tolerance)


def gen_shape(spec: CorpusSpec, tolerance: Optional[Tolerance] = None) -> Shape:
    """Generate a polygon or a polyhedron depending on the family."""
    if spec.family.is_3d:
        return gen_polyhedron(spec, tolerance)
    return gen_polygon(spec, tolerance)


def _face_fans(ph: ConvexPolyhedron) -> tuple[np.ndarray, np.ndarray]:
    """Fan triangles of every face and, per face, its (first triangle, count)."""
    tris, spans = [], []
    for ring in ph.faces:
        spans.append((len(tris), len(ring) - 2))
        tris.extend((ring[0], ring[t], ring[t + 1]) for t in range(1, len(ring) - 1))
    return np.asarray(tris, dtype=np.int64), np.asarray(spans, dtype=np.int64)


def _boundary_samples(shape: Shape, size: int, rng: np.random.Generator):
    """``size`` points on the boundary and the outward unit normal at each."""
    verts = np.asarray(shape.vertices, dtype=np.float64)
    if isinstance(shape, ConvexPolyhedron):
        tris, spans = _face_fans(shape)
        f = rng.integers(shape.face_count, size=size)
        first, count = spans[f, 0], spans[f, 1]
        t = first + np.minimum((rng.uniform(0.0, 1.0, size) * count).astype(np.int64), count - 1)
        r = rng.uniform(0.0, 1.0, (size, 2))
        s = np.sqrt(r[:, :1])
        a, b, c = (verts[tris[t, i]] for i in range(3))
        q = (1 - s) * a + s * (1 - r[:, 1:]) * b + s * r[:, 1:] * c
        normals = np.asarray(shape.planes, dtype=np.float64)[f, :3]
        return q, normals
    lines = np.asarray(shape.edges, dtype=np.float64)
    k = rng.integers(shape.n, size=size)
    a, b = verts[k], verts[(k + 1) % shape.n]
    q = a + rng.uniform(0.0, 1.0, (size, 1)) * (b - a)
    normals = -lines[k, :2] / np.hypot(lines[k, 0], lines[k, 1])[:, None]
    return q, normals


def gen_queries(shape: Shape, count: int, seed: int) -> list:
    """Query points in blocks of ten.

    Each block holds 6 uniform points in the bounding box scaled 2x about
    its center, a boundary sample displaced outward then inward by
    1e-9 * diameter along the normal, one exact vertex and one exact
    boundary sample.
    """
    rng = np.random.default_rng(seed)
    verts = np.asarray(shape.vertices, dtype=np.float64)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    mid, half = (lo + hi) / 2.0, (hi - lo)
    delta = BOUNDARY_OFFSET * shape.diameter
    blocks = -(-count // 10)
    dim = verts.shape[1]

    uniform = rng.uniform(mid - half, mid + half, size=(blocks, 6, dim))
    q, normals = _boundary_samples(shape, blocks, rng)
    corners = verts[rng.integers(len(verts), size=blocks)]
    exact, _ = _boundary_samples(shape, blocks, rng)
    block = np.concatenate(
        [
            uniform,
            (q + delta * normals)[:, None],
            (q - delta * normals)[:, None],
            corners[:, None],
            exact[:, None],
        ],
        axis=1,
    )
    make = Point3 if dim == 3 else Point2
    return [make(*row) for row in block.reshape(-1, dim)[:count].tolist()]


def default_corpus_2d(seed: int = 1) -> list[CorpusSpec]:
    """Regular, random, needle and tilted polygons plus 100 rotations of one 16-gon."""
    specs = [CorpusSpec(ShapeFamily.REGULAR_NGON, n, seed=seed) for n in (3, 4, 5, 6, 8, 12, 16, 32, 64, 128)]
    rng = np.random.default_rng(seed)
    sizes = [3, 4, 5, 7, 8, 11, 16, 24, 32, 48, 64, 96, 128]
    for i in range(60):
        specs.append(CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, sizes[i % len(sizes)], seed=seed + i))
    for n in (8, 16, 64):
        for k in (2, 4, 6):
            specs.append(CorpusSpec(ShapeFamily.NEEDLE_2D, n, seed=seed, exponent=k))
            specs.append(CorpusSpec(ShapeFamily.TILTED_NGON, n, seed=seed, exponent=k))
    for angle in rng.uniform(0.0, 2.0 * math.pi, 100):
        specs.append(
            CorpusSpec(ShapeFamily.RANDOM_CONVEX_2D, 16, rotation=float(angle), seed=seed)
        )
    for i in range(12):
        specs.append(CorpusSpec(ShapeFamily.REGULAR_NGON, 7 + 11 * i, rotation=0.1 * i, seed=seed))
    return specs


def default_corpus_3d(seed: int = 1) -> list[CorpusSpec]:
    """Geodesic spheres of levels 0..3 and 20 affine variants."""
    specs = [CorpusSpec(ShapeFamily.GEODESIC_SPHERE, level, seed=seed) for level in range(4)]
    specs.extend(
        CorpusSpec(ShapeFamily.AFFINE_GEODESIC, i % 4, seed=seed + i) for i in range(20)
    )
    return specs
