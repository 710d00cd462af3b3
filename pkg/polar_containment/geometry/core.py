"""Shape validation, shared predicates and the baseline containment tests."""
import logging
import math
from collections import Counter
from typing import Iterable, Optional, Sequence

import numpy as np

from ..models import (
    Containment,
    ConvexPolygon,
    ConvexPolyhedron,
    EdgeLine,
    Plane,
    Point2,
    Point3,
    Tolerance,
    Vector2,
    Vector3,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class GeometryError(Exception):
    """Invalid geometric input."""
    pass


class TooFewVertices(GeometryError):
    """Polygon with fewer than 3 vertices, or a face ring with fewer than 3 indices."""
    pass


class DegenerateEdge(GeometryError):
    """Repeated or collinear vertices, zero-length edges or zero-area shapes."""
    pass


class NonConvex(GeometryError):
    """Input is not (strictly) convex."""
    pass


class NonPlanarFace(GeometryError):
    """A polyhedron face ring does not lie in one plane."""
    pass


class OpenSurface(GeometryError):
    """A polyhedron edge is not shared by exactly two faces."""
    pass


class ZeroVector(GeometryError):
    """A direction was requested for the zero vector."""
    pass


class NonFiniteCoordinate(GeometryError):
    """NaN or infinity passed across an API boundary."""
    pass


class DegenerateInterior(GeometryError):
    """The reference point is not strictly inside the shape."""
    pass


def _point2(raw) -> Point2:
    p = Point2(*(float(c) for c in raw))
    if not p.is_finite():
        raise NonFiniteCoordinate(f"Non-finite 2D point: ({p.x}, {p.y})")
    return p


def _point3(raw) -> Point3:
    p = Point3(*(float(c) for c in raw))
    if not p.is_finite():
        raise NonFiniteCoordinate(f"Non-finite 3D point: ({p.x}, {p.y}, {p.z})")
    return p


def require_finite(p: Sequence[float]) -> None:
    """Raise NonFiniteCoordinate unless every component of ``p`` is finite."""
    for c in p:
        if not math.isfinite(c):
            raise NonFiniteCoordinate(f"Non-finite query point: {tuple(p)}")


def point_set_diameter(points: Sequence[Sequence[float]]) -> float:
    """Largest pairwise distance of a point set."""
    arr = np.asarray(points, dtype=np.float64)
    best = 0.0
    # Blocks keep the pairwise matrix small for large vertex counts.
    for start in range(0, len(arr), 512):
        block = arr[start:start + 512]
        diff = block[:, None, :] - arr[None, :, :]
        best = max(best, float(np.sqrt((diff * diff).sum(axis=-1)).max()))
    return best


def signed_area2(points: Sequence[Point2]) -> float:
    """Twice the signed area; positive for counterclockwise rings."""
    n = len(points)
    return sum(
        points[k].x * points[(k + 1) % n].y - points[(k + 1) % n].x * points[k].y
        for k in range(n)
    )


def validate_polygon(
    raw_vertices: Iterable[Sequence[float]],
    tolerance: Optional[Tolerance] = None,
) -> ConvexPolygon:
    """Validate a raw vertex list as a strictly convex polygon.

    Clockwise input is reversed to counterclockwise before the checks.
    Inward edge normals and offsets are precomputed so that a side test is
    two multiplications and two additions.

    Args:
        raw_vertices: Sequence of (x, y) pairs
        tolerance: Relative tolerance (default 1e-12)

    Returns:
        Validated ConvexPolygon

    Raises:
        TooFewVertices: Fewer than 3 vertices
        DegenerateEdge: Repeated, collinear or zero-area vertices
        NonConvex: A reflex vertex, or a boundary that winds more than once
        NonFiniteCoordinate: NaN or infinite coordinates
    """
    tol = tolerance or Tolerance()
    pts = [_point2(p) for p in raw_vertices]
    n = len(pts)
    if n < 3:
        raise TooFewVertices(f"A polygon needs at least 3 vertices, got {n}")

    diameter = point_set_diameter(pts)
    eps = tol.eps_rel * diameter
    if diameter == 0.0:
        raise DegenerateEdge("All vertices coincide")

    area2 = signed_area2(pts)
    if abs(area2) <= eps * diameter:
        raise DegenerateEdge("Polygon has zero area (collinear vertices)")
    if area2 < 0:
        pts.reverse()

    turning = 0.0
    for k in range(n):
        p0, p1, p2 = pts[k], pts[(k + 1) % n], pts[(k + 2) % n]
        ax, ay = p1.x - p0.x, p1.y - p0.y
        bx, by = p2.x - p1.x, p2.y - p1.y
        la, lb = math.hypot(ax, ay), math.hypot(bx, by)
        if lb <= eps:
            raise DegenerateEdge(f"Repeated vertex at index {(k + 2) % n}: {tuple(p2)}")
        cross = ax * by - ay * bx
        scale = eps * max(la, lb)
        if cross < -scale:
            raise NonConvex(f"Reflex vertex at {tuple(p1)}")
        if cross <= scale:
            raise DegenerateEdge(f"Collinear vertices around {tuple(p1)}")
        turning += math.atan2(cross, ax * bx + ay * by)

    if abs(turning - TWO_PI) > 1e-6:
        raise NonConvex(f"Boundary winds {turning / TWO_PI:.3f} times around its interior")

    edges = []
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        # Left normal of a counterclockwise edge points inward.
        nx, ny = -(b.y - a.y), b.x - a.x
        edges.append(EdgeLine(nx, ny, nx * a.x + ny * a.y, eps * math.hypot(nx, ny)))

    return ConvexPolygon(
        vertices=tuple(pts),
        edges=tuple(edges),
        diameter=diameter,
        tolerance=tol,
    )


def _newell_normal(ring: Sequence[Point3]) -> tuple[float, float, float]:
    nx = ny = nz = 0.0
    m = len(ring)
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        nx += (a.y - b.y) * (a.z + b.z)
        ny += (a.z - b.z) * (a.x + b.x)
        nz += (a.x - b.x) * (a.y + b.y)
    return nx, ny, nz


def validate_polyhedron(
    raw_vertices: Iterable[Sequence[float]],
    raw_faces: Iterable[Sequence[int]],
    tolerance: Optional[Tolerance] = None,
) -> ConvexPolyhedron:
    """Validate vertices and face rings as a closed convex polyhedron.

    Face rings are reoriented so that the vertex centroid lies on the inner
    side of every face plane; a reversed ring is not an error.

    Raises:
        TooFewVertices: Fewer than 4 vertices or a face with fewer than 3 indices
        DegenerateEdge: Repeated indices or zero-area faces
        OpenSurface: An edge not shared by exactly two faces
        NonPlanarFace: A face ring off its plane by more than the tolerance
        NonConvex: A vertex outside a face plane, or no interior
    """
    tol = tolerance or Tolerance()
    pts = [_point3(p) for p in raw_vertices]
    if len(pts) < 4:
        raise TooFewVertices(f"A polyhedron needs at least 4 vertices, got {len(pts)}")

    rings: list[tuple[int, ...]] = []
    for f, raw in enumerate(raw_faces):
        ring = tuple(int(i) for i in raw)
        if len(ring) < 3:
            raise TooFewVertices(f"Face {f} has {len(ring)} vertices")
        if len(set(ring)) != len(ring):
            raise DegenerateEdge(f"Face {f} repeats a vertex index")
        for i in ring:
            if not 0 <= i < len(pts):
                raise GeometryError(f"Face {f} references vertex {i}, have {len(pts)}")
        rings.append(ring)
    if len(rings) < 4:
        raise OpenSurface(f"A closed polyhedron needs at least 4 faces, got {len(rings)}")

    edge_use = Counter(
        (min(r[i], r[(i + 1) % len(r)]), max(r[i], r[(i + 1) % len(r)]))
        for r in rings
        for i in range(len(r))
    )
    for edge, count in edge_use.items():
        if count != 2:
            raise OpenSurface(f"Edge {edge} is shared by {count} faces")

    diameter = point_set_diameter(pts)
    eps = tol.eps_rel * diameter
    arr = np.asarray(pts, dtype=np.float64)
    centroid = arr.mean(axis=0)

    oriented: list[tuple[int, ...]] = []
    planes: list[Plane] = []
    for f, ring in enumerate(rings):
        ring_pts = [pts[i] for i in ring]
        nx, ny, nz = _newell_normal(ring_pts)
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if norm <= eps * eps:
            raise DegenerateEdge(f"Face {f} has zero area")
        nx, ny, nz = nx / norm, ny / norm, nz / norm
        fc = arr[list(ring)].mean(axis=0)
        d = nx * fc[0] + ny * fc[1] + nz * fc[2]
        if nx * centroid[0] + ny * centroid[1] + nz * centroid[2] > d:
            ring = tuple(reversed(ring))
            nx, ny, nz, d = -nx, -ny, -nz, -d
        for p in ring_pts:
            if abs(nx * p.x + ny * p.y + nz * p.z - d) > eps:
                raise NonPlanarFace(f"Face {f} is not planar within {eps:.3g}")
        oriented.append(ring)
        planes.append(Plane(float(nx), float(ny), float(nz), float(d)))

    normals = np.array([[p.nx, p.ny, p.nz] for p in planes])
    offsets = np.array([p.d for p in planes])
    excess = arr @ normals.T - offsets[None, :]
    if (excess > eps).any():
        v, f = np.unravel_index(int(np.argmax(excess)), excess.shape)
        raise NonConvex(f"Vertex {v} lies outside the plane of face {f}")
    if (normals @ centroid - offsets >= -eps).any():
        raise NonConvex("Polyhedron has no interior (vertex centroid on a face plane)")

    return ConvexPolyhedron(
        vertices=tuple(pts),
        faces=tuple(oriented),
        planes=tuple(planes),
        diameter=diameter,
        tolerance=tol,
    )


def half_plane_side(edge: EdgeLine, p: Point2) -> float:
    """Signed side value ``nx*px + ny*py - c``: positive inside, negative outside."""
    return edge.nx * p[0] + edge.ny * p[1] - edge.c


def classify_edges(edges: Iterable[EdgeLine], x: float, y: float) -> Containment:
    """Combine half-plane tests under the shared tolerance contract."""
    boundary = False
    for nx, ny, c, band in edges:
        s = nx * x + ny * y - c
        if s < -band:
            return Containment.OUTSIDE
        if s <= band:
            boundary = True
    return Containment.BOUNDARY if boundary else Containment.INSIDE


def classify_planes(planes: Iterable[Plane], eps: float, x: float, y: float, z: float) -> Containment:
    """Combine face-plane tests under the shared tolerance contract."""
    boundary = False
    for nx, ny, nz, d in planes:
        s = nx * x + ny * y + nz * z - d
        if s > eps:
            return Containment.OUTSIDE
        if s >= -eps:
            boundary = True
    return Containment.BOUNDARY if boundary else Containment.INSIDE


def interior_box_radius(edges: Iterable[EdgeLine], cx: float, cy: float, limit: float) -> float:
    """Half-width of an axis box around (cx, cy) whose points all classify Inside.

    At most ``limit``; negative when (cx, cy) itself is not strictly inside.
    """
    radius = limit
    for nx, ny, c, band in edges:
        reach = abs(nx) + abs(ny)
        radius = min(radius, 0.5 * (nx * cx + ny * cy - c - band) / reach)
    return radius


def interior_box_radius3(planes: Iterable[Plane], eps: float, c: Sequence[float]) -> float:
    """``interior_box_radius`` for face planes with outward unit normals."""
    radius = eps
    for nx, ny, nz, d in planes:
        reach = abs(nx) + abs(ny) + abs(nz)
        radius = min(radius, 0.5 * (d - nx * c[0] - ny * c[1] - nz * c[2] - eps) / reach)
    return radius


def point_in_polygon_linear(poly: ConvexPolygon, p: Point2) -> Containment:
    """O(N) test against every edge half-plane."""
    require_finite(p)
    return classify_edges(poly.edges, p[0], p[1])


def _angle_le(rx: float, ry: float, ax: float, ay: float, bx: float, by: float) -> bool:
    """Whether the angle of ``a`` measured from ``r`` is <= that of ``b`` (both in [0, 2pi))."""
    ca, cb = rx * ay - ry * ax, rx * by - ry * bx
    ha = 0 if ca > 0 or (ca == 0 and rx * ax + ry * ay > 0) else 1
    hb = 0 if cb > 0 or (cb == 0 and rx * bx + ry * by > 0) else 1
    if ha != hb:
        return ha < hb
    return ax * by - ay * bx >= 0


def point_in_polygon_logn(
    poly: ConvexPolygon,
    p: Point2,
    pivot: Optional[Point2] = None,
) -> Containment:
    """O(lg N) test: binary search of the vertex fan around an interior pivot.

    The wedge [v_k, v_k+1] holding ``p`` is found with orientation tests
    only; the wedge edge and its two neighbours are then classified. Pass a
    precomputed ``pivot`` (see ``reference_point``) to keep the query
    logarithmic; without it the pivot is computed in O(N).
    """
    require_finite(p)
    if pivot is None:
        from ..locators.polar import reference_point
        pivot = reference_point(poly)

    verts = poly.vertices
    n = len(verts)
    cx, cy = pivot
    px, py = p[0] - cx, p[1] - cy
    if px == 0.0 and py == 0.0:
        return classify_edges(poly.edges, p[0], p[1])

    rx, ry = verts[0].x - cx, verts[0].y - cy
    lo, hi = 0, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _angle_le(rx, ry, verts[mid].x - cx, verts[mid].y - cy, px, py):
            lo = mid
        else:
            hi = mid

    edges = poly.edges
    return classify_edges(
        (edges[(lo - 1) % n], edges[lo], edges[(lo + 1) % n]), p[0], p[1]
    )


def point_in_polyhedron_linear(ph: ConvexPolyhedron, p: Point3) -> Containment:
    """O(F) test against every face plane."""
    require_finite(p)
    return classify_planes(ph.planes, ph.eps, p[0], p[1], p[2])


def polar_exact(p_rel: Vector2) -> tuple[float, float]:
    """Exact polar coordinates (r, phi) with phi in [0, 2pi), counterclockwise from +x.

    Used as a test oracle only.
    """
    dx, dy = float(p_rel[0]), float(p_rel[1])
    if dx == 0.0 and dy == 0.0:
        raise ZeroVector("Polar angle of the zero vector is undefined")
    phi = math.atan2(dy, dx)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    return math.hypot(dx, dy), phi


def spherical_exact(p_rel: Vector3) -> tuple[float, float, float]:
    """Exact spherical coordinates (r, theta, phi); phi is 0 at the poles.

    Used as a test oracle only.
    """
    x, y, z = (float(c) for c in p_rel)
    r = math.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        raise ZeroVector("Spherical angles of the zero vector are undefined")
    theta = math.acos(max(-1.0, min(1.0, z / r)))
    phi = 0.0 if x == 0.0 and y == 0.0 else polar_exact((x, y))[1]
    return r, theta, phi


def vertex_centroid(points: Sequence[Sequence[float]]) -> tuple[float, ...]:
    """Arithmetic mean of a point list."""
    n = len(points)
    return tuple(sum(p[i] for p in points) / n for i in range(len(points[0])))
