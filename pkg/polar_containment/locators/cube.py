"""Cube-map cells around an interior point ("virtual cube").

A direction is assigned to the face of its dominant axis and to an (i, j)
cell of that face's m x m grid through two coordinate ratios. Preprocessing
clips every polyhedron face to each cube face's direction cone, projects the
clipped polygon onto the face square and marks every cell it touches.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ..geometry.core import (
    DegenerateInterior,
    ZeroVector,
    classify_planes,
    interior_box_radius3,
    require_finite,
    vertex_centroid,
)
from ..models import Containment, ConvexPolyhedron, Plane, Point3, Vector3

logger = logging.getLogger(__name__)

M_CAP = 256
INDEX_BYTES = 4
BUILD_SLACK = 1e-9


class CubeFace(IntEnum):
    """Faces of the virtual cube."""
    POS_X = 0
    NEG_X = 1
    POS_Y = 2
    NEG_Y = 3
    POS_Z = 4
    NEG_Z = 5

    @property
    def axis(self) -> int:
        return self.value // 2

    @property
    def sign(self) -> float:
        return -1.0 if self.value % 2 else 1.0

    @property
    def label(self) -> str:
        return ("+" if self.sign > 0 else "-") + "XYZ"[self.axis]


# (u, v) coordinate axes of the faces on each dominant axis.
UV_AXES = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


class CellId(NamedTuple):
    """One cell of the virtual cube."""
    face: CubeFace
    i: int
    j: int


def _bucket(w: float, m: int) -> int:
    k = int((w + 1.0) / 2.0 * m)
    return m - 1 if k >= m else (0 if k < 0 else k)


def cell_index(p_rel: Vector3, m: int) -> CellId:
    """Cell of a nonzero direction.

    The face is the dominant axis with its sign (ties prefer x, then y);
    ``u, v`` are the other two coordinates divided by the dominant one's
    magnitude, remapped from [-1, 1] to cell indices.

    Raises:
        ZeroVector: If ``p_rel`` is the zero vector
    """
    dx, dy, dz = p_rel[0], p_rel[1], p_rel[2]
    ax, ay, az = abs(dx), abs(dy), abs(dz)
    if ax >= ay and ax >= az:
        if not ax > 0:
            raise ZeroVector(f"Cell of a zero or non-finite direction: ({dx}, {dy}, {dz})")
        face = CubeFace.POS_X if dx > 0 else CubeFace.NEG_X
        u, v = dy / ax, dz / ax
    elif ay >= az:
        face = CubeFace.POS_Y if dy > 0 else CubeFace.NEG_Y
        u, v = dx / ay, dz / ay
    else:
        face = CubeFace.POS_Z if dz > 0 else CubeFace.NEG_Z
        u, v = dx / az, dy / az
    return CellId(face, _bucket(u, m), _bucket(v, m))


def cell_indices(d: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized ``cell_index`` over an (n, 3) array; returns (face, i, j)."""
    d = np.asarray(d, dtype=np.float64)
    a = np.abs(d)
    axis = np.where(
        (a[:, 0] >= a[:, 1]) & (a[:, 0] >= a[:, 2]), 0, np.where(a[:, 1] >= a[:, 2], 1, 2)
    )
    rows = np.arange(len(d))
    major = d[rows, axis]
    face = 2 * axis + (major < 0)
    u_axis = np.where(axis == 0, 1, 0)
    v_axis = np.where(axis == 2, 1, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.abs(major)
        u = d[rows, u_axis] / scale
        v = d[rows, v_axis] / scale
    i = np.clip(np.floor((u + 1.0) / 2.0 * m), 0, m - 1).astype(np.int64)
    j = np.clip(np.floor((v + 1.0) / 2.0 * m), 0, m - 1).astype(np.int64)
    return face, i, j


def face_direction(face: CubeFace, u: float, v: float) -> Vector3:
    """Direction through the point (u, v) of a cube face's square."""
    coords = [0.0, 0.0, 0.0]
    coords[face.axis] = face.sign
    bu, bv = UV_AXES[face.axis]
    coords[bu] = u
    coords[bv] = v
    return Point3(*coords)


def cell_bounds(cell: CellId, m: int) -> tuple[float, float, float, float]:
    """Closed (u_lo, u_hi, v_lo, v_hi) square of a cell."""
    h = 2.0 / m
    return (-1.0 + cell.i * h, -1.0 + (cell.i + 1) * h, -1.0 + cell.j * h, -1.0 + (cell.j + 1) * h)


def cell_cone(cell: CellId, m: int) -> list[Vector3]:
    """Corner directions of the pyramid spanned by a cell."""
    u_lo, u_hi, v_lo, v_hi = cell_bounds(cell, m)
    return [
        face_direction(cell.face, u, v)
        for u, v in ((u_lo, v_lo), (u_hi, v_lo), (u_hi, v_hi), (u_lo, v_hi))
    ]


def reference_point3(ph: ConvexPolyhedron) -> Point3:
    """Vertex centroid, verified strictly inside every face plane.

    Raises:
        DegenerateInterior: If the centroid is within the tolerance of a plane
    """
    c = Point3(*vertex_centroid(ph.vertices))
    eps = ph.eps
    for f, (nx, ny, nz, d) in enumerate(ph.planes):
        if nx * c.x + ny * c.y + nz * c.z - d >= -eps:
            raise DegenerateInterior(f"Vertex centroid lies on the plane of face {f}")
    return c


def _clip(points: list[tuple[float, float, float]], n: tuple[float, float, float]):
    """Keep the part of a polygon where ``n . p >= 0`` (plane through the origin)."""
    out = []
    prev = points[-1]
    dp = n[0] * prev[0] + n[1] * prev[1] + n[2] * prev[2]
    for cur in points:
        dc = n[0] * cur[0] + n[1] * cur[1] + n[2] * cur[2]
        if (dc >= 0) != (dp >= 0):
            t = dp / (dp - dc)
            out.append(tuple(prev[k] + t * (cur[k] - prev[k]) for k in range(3)))
        if dc >= 0:
            out.append(cur)
        prev, dp = cur, dc
    return out


def clip_face_to_cone(
    ph: ConvexPolyhedron,
    f: int,
    face: CubeFace,
    center: Point3,
    slack: float = 0.0,
) -> list[tuple[float, float]]:
    """Clip polyhedron face ``f`` to the direction cone of ``face`` and project it.

    The cone is widened by the relative ``slack``. Returns the convex (u, v)
    polygon on the face square, or an empty list when the face does not
    cover any area of the cone.
    """
    pts = [(v.x - center.x, v.y - center.y, v.z - center.z) for v in ph.face_points(f)]
    a = face.axis
    bu, bv = UV_AXES[a]
    k = face.sign * (1.0 + slack)
    for b in (bu, bv):
        for s in (1.0, -1.0):
            n = [0.0, 0.0, 0.0]
            n[a] = k
            n[b] = -s
            pts = _clip(pts, tuple(n))
            if not pts:
                return []

    uv = [(p[bu] / (face.sign * p[a]), p[bv] / (face.sign * p[a])) for p in pts]
    area2 = sum(
        uv[i][0] * uv[(i + 1) % len(uv)][1] - uv[(i + 1) % len(uv)][0] * uv[i][1]
        for i in range(len(uv))
    )
    if area2 == 0.0:
        return []
    return uv


def conservative_raster(
    polygon: Sequence[tuple[float, float]],
    m: int,
    slack: float = 0.0,
) -> set[tuple[int, int]]:
    """Cells of an m x m grid on [-1, 1]^2 whose closed box meets a closed convex polygon.

    Uses separating axes: the two box axes and every polygon edge normal.
    A positive ``slack`` (in u, v units) only ever adds cells.
    """
    if not polygon:
        return set()
    us = [p[0] for p in polygon]
    vs = [p[1] for p in polygon]
    half = m / 2.0
    i_lo = max(0, math.ceil((min(us) - slack + 1.0) * half) - 1)
    i_hi = min(m - 1, math.floor((max(us) + slack + 1.0) * half))
    j_lo = max(0, math.ceil((min(vs) - slack + 1.0) * half) - 1)
    j_hi = min(m - 1, math.floor((max(vs) + slack + 1.0) * half))

    axes = []
    count = len(polygon)
    for k in range(count):
        (x0, y0), (x1, y1) = polygon[k], polygon[(k + 1) % count]
        nx, ny = y0 - y1, x1 - x0
        length = math.hypot(nx, ny)
        if length == 0.0:
            continue
        proj = [nx * x + ny * y for x, y in polygon]
        axes.append((nx, ny, min(proj), max(proj), slack * length))

    h = 2.0 / m
    cells = set()
    for i in range(i_lo, i_hi + 1):
        u0, u1 = -1.0 + i * h, -1.0 + (i + 1) * h
        for j in range(j_lo, j_hi + 1):
            v0, v1 = -1.0 + j * h, -1.0 + (j + 1) * h
            for nx, ny, pmin, pmax, tol in axes:
                box = (nx * u0 + ny * v0, nx * u1 + ny * v0, nx * u0 + ny * v1, nx * u1 + ny * v1)
                if min(box) > pmax + tol or max(box) < pmin - tol:
                    break
            else:
                cells.add((i, j))
    return cells


def default_m3(face_count: int, m_cap: int = M_CAP) -> int:
    """Smallest power of two >= ceil(sqrt(F)), capped."""
    target = math.ceil(math.sqrt(face_count))
    m = 1
    while m < target and m < m_cap:
        m = min(2 * m, m_cap)
    return m


@dataclass(frozen=True)
class CubeGrid:
    """Candidate face lists for the 6 * m * m cells of the virtual cube."""
    polyhedron: ConvexPolyhedron
    center: Point3
    m: int
    cells: tuple[tuple[int, ...], ...]
    box_radius: float = 0.0
    cell_planes: tuple[tuple[Plane, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def cell_count(self) -> int:
        return 6 * self.m * self.m

    @property
    def max_candidates(self) -> int:
        return max(len(c) for c in self.cells)

    @property
    def table_bytes(self) -> int:
        """int32 offsets per cell plus one int32 per stored face index."""
        entries = sum(len(c) for c in self.cells)
        return (self.cell_count + 1) * INDEX_BYTES + entries * INDEX_BYTES

    def flat_index(self, cell: CellId) -> int:
        return (int(cell.face) * self.m + cell.i) * self.m + cell.j

    def candidates(self, cell: CellId) -> tuple[int, ...]:
        return self.cells[self.flat_index(cell)]

    def report_line(self) -> str:
        return (
            f"cube m={self.m} maxcand={self.max_candidates} "
            f"cells={self.cell_count} bytes={self.table_bytes}"
        )


def _cover_face(ph, f, center, m, slack):
    return [
        (face, conservative_raster(clip_face_to_cone(ph, f, face, center, slack), m, slack))
        for face in CubeFace
    ]


def build3(
    ph: ConvexPolyhedron,
    m: Optional[int] = None,
    m_cap: int = M_CAP,
    workers: int = 1,
    slack: float = BUILD_SLACK,
) -> CubeGrid:
    """Build the cell table of ``ph``.

    Per-face preprocessing is independent; with ``workers > 1`` it runs on a
    thread pool and the cell lists are merged in ascending face order.
    """
    center = reference_point3(ph)
    if m is None:
        m = default_m3(ph.face_count, m_cap)
    elif m < 1:
        raise ValueError(f"m must be >= 1, got {m}")

    faces = range(ph.face_count)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            covers = list(pool.map(lambda f: _cover_face(ph, f, center, m, slack), faces))
    else:
        covers = [_cover_face(ph, f, center, m, slack) for f in faces]

    lists: list[list[int]] = [[] for _ in range(6 * m * m)]
    for f, covered in enumerate(covers):
        for face, cells in covered:
            for i, j in cells:
                lists[(int(face) * m + i) * m + j].append(f)

    for index, members in enumerate(lists):
        if not members:
            logger.warning("cube cell %d received no faces; storing all faces", index)
            members.extend(faces)

    planes = ph.planes
    grid = CubeGrid(
        polyhedron=ph,
        center=center,
        m=m,
        cells=tuple(tuple(c) for c in lists),
        box_radius=interior_box_radius3(planes, ph.eps, center),
        cell_planes=tuple(tuple(planes[f] for f in c) for c in lists),
    )
    logger.debug("built %s for F=%d", grid.report_line(), ph.face_count)
    return grid


def query3(grid: CubeGrid, p: Point3) -> Containment:
    """O(1) containment: locate the cell of ``p`` and test its candidate planes."""
    require_finite(p)
    c = grid.center
    dx, dy, dz = p[0] - c.x, p[1] - c.y, p[2] - c.z
    eps = grid.polyhedron.eps
    r = grid.box_radius
    if abs(dx) < r and abs(dy) < r and abs(dz) < r:
        return Containment.INSIDE
    face, i, j = cell_index((dx, dy, dz), grid.m)
    m = grid.m
    return classify_planes(grid.cell_planes[(int(face) * m + i) * m + j], eps, p[0], p[1], p[2])
