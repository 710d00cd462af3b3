"""Tan-spaced angular sectors around an interior point ("virtual square").

Directions from the reference point are bucketed by the ratio of their
coordinates inside each octant, so a sector lookup costs one division and
no trigonometry. Each sector stores a cyclic range of candidate polygon
edges; a query tests only those edges.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import NewType, Optional

import numpy as np

from ..geometry.core import (
    TWO_PI,
    ZeroVector,
    classify_edges,
    interior_box_radius,
    polar_exact,
    require_finite,
    vertex_centroid,
)
from ..models import Containment, ConvexPolygon, EdgeLine, Point2, Vector2

logger = logging.getLogger(__name__)

SectorId = NewType("SectorId", int)

M_CAP = 4096
INDEX_BYTES = 4


def reference_point(poly: ConvexPolygon) -> Point2:
    """Midpoint of vertices 0 and N//2, or the vertex centroid if that is not strictly inside."""
    a = poly.vertices[0]
    b = poly.vertices[poly.n // 2]
    mid = Point2((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    if all(nx * mid.x + ny * mid.y - c > band for nx, ny, c, band in poly.edges):
        return mid
    cx, cy = vertex_centroid(poly.vertices)
    return Point2(cx, cy)


def _bucket(t: float, m: int) -> int:
    k = int(t * m)
    return m - 1 if k >= m else k


def sector_index(p_rel: Vector2, m: int) -> SectorId:
    """Sector of a nonzero direction; ids grow counterclockwise from the +x axis.

    Octant boundaries belong to the counterclockwise octant. Inside an
    octant the bucket is ``floor(t*m)`` of the coordinate ratio ``t`` in
    [0, 1], mirrored in odd octants so ids stay angle-ordered.

    Raises:
        ZeroVector: If ``p_rel`` is (0, 0)
    """
    dx, dy = p_rel[0], p_rel[1]
    if dx > 0 and 0 <= dy < dx:
        return SectorId(_bucket(dy / dx, m))
    if dy > 0 and 0 < dx <= dy:
        return SectorId(m + (m - 1 - _bucket(dx / dy, m)))
    if dy > 0 and -dy < dx <= 0:
        return SectorId(2 * m + _bucket(-dx / dy, m))
    if dy > 0 and dx <= -dy:
        return SectorId(3 * m + (m - 1 - _bucket(dy / (-dx), m)))
    if dx < 0 and 0 <= -dy < -dx:
        return SectorId(4 * m + _bucket((-dy) / (-dx), m))
    if dy < 0 and 0 < -dx <= -dy:
        return SectorId(5 * m + (m - 1 - _bucket((-dx) / (-dy), m)))
    if dy < 0 and 0 <= dx < -dy:
        return SectorId(6 * m + _bucket(dx / (-dy), m))
    if dx > 0 and 0 < -dy <= dx:
        return SectorId(7 * m + (m - 1 - _bucket((-dy) / dx, m)))
    raise ZeroVector(f"Sector of a zero or non-finite direction: ({dx}, {dy})")


def octant_conditions(dx: np.ndarray, dy: np.ndarray) -> list[np.ndarray]:
    """Membership masks of the eight octants, in the order ``sector_index`` tests them."""
    return [
        (dx > 0) & (dy >= 0) & (dy < dx),
        (dy > 0) & (dx > 0) & (dx <= dy),
        (dy > 0) & (-dy < dx) & (dx <= 0),
        (dy > 0) & (dx <= -dy),
        (dx < 0) & (-dy >= 0) & (-dy < -dx),
        (dy < 0) & (-dx > 0) & (-dx <= -dy),
        (dy < 0) & (dx >= 0) & (dx < -dy),
        (dx > 0) & (-dy > 0) & (-dy <= dx),
    ]


def sector_indices(dx: np.ndarray, dy: np.ndarray, m: int) -> np.ndarray:
    """Vectorized ``sector_index``; zero directions map to -1."""
    dx = np.asarray(dx, dtype=np.float64)
    dy = np.asarray(dy, dtype=np.float64)
    conditions = octant_conditions(dx, dy)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = [
            dy / dx,
            dx / dy,
            -dx / dy,
            dy / (-dx),
            (-dy) / (-dx),
            (-dx) / (-dy),
            dx / (-dy),
            (-dy) / dx,
        ]
        choices = []
        for octant, t in enumerate(ratios):
            t = np.clip(np.nan_to_num(t, nan=0.0, posinf=1.0, neginf=0.0), 0.0, 1.0)
            k = np.minimum(np.floor(t * m), m - 1).astype(np.int64)
            local = k if octant % 2 == 0 else m - 1 - k
            choices.append(octant * m + local)
    return np.select(conditions, choices, default=-1)


# Per octant, the ray through ratio t is (x0 + xt*t, y0 + yt*t).
_OCTANT_RAYS = (
    (1.0, 0.0, 0.0, 1.0),
    (0.0, 1.0, 1.0, 0.0),
    (0.0, -1.0, 1.0, 0.0),
    (-1.0, 0.0, 0.0, 1.0),
    (-1.0, 0.0, 0.0, -1.0),
    (0.0, -1.0, -1.0, 0.0),
    (0.0, 1.0, -1.0, 0.0),
    (1.0, 0.0, 0.0, -1.0),
)


def sector_rays(sector: int, m: int, frac):
    """Directions inside ``sector``; ``frac`` in [0, 1) walks it counterclockwise.

    ``frac`` may be a float or a numpy array; returns (dx, dy) of the same shape.
    ``frac=0`` gives the sector's starting boundary ray.
    """
    octant, local = divmod(int(sector) % (8 * m), m)
    if octant % 2 == 0:
        t = (local + frac) / m
    else:
        t = (m - local - frac) / m
    x0, xt, y0, yt = _OCTANT_RAYS[octant]
    return x0 + xt * t, y0 + yt * t


def sector_ray(sector: int, m: int, frac: float = 0.5) -> Vector2:
    """One direction inside ``sector`` (see ``sector_rays``)."""
    dx, dy = sector_rays(sector, m, frac)
    return Point2(float(dx), float(dy))


def angular_spans(poly: ConvexPolygon, center: Point2) -> list[float]:
    """Angle subtended by each edge as seen from ``center``."""
    angles = [polar_exact(v - center)[1] for v in poly.vertices]
    n = len(angles)
    return [(angles[(k + 1) % n] - angles[k]) % TWO_PI for k in range(n)]


def auto_m(poly: ConvexPolygon, center: Optional[Point2] = None, m_cap: int = M_CAP) -> int:
    """Smallest power of two whose widest sector, atan(1/m), fits the narrowest edge span."""
    if center is None:
        center = reference_point(poly)
    delta_min = min(angular_spans(poly, center))
    m = 1
    while m < m_cap and math.atan(1.0 / m) > delta_min:
        m = min(2 * m, m_cap)
    return m


@dataclass(frozen=True)
class PolarGrid:
    """Per-sector candidate edge ranges around an interior reference point."""
    polygon: ConvexPolygon
    center: Point2
    m: int
    first: tuple[int, ...]
    count: tuple[int, ...]
    capped: bool = False
    box_radius: float = 0.0
    sector_lines: tuple[tuple[EdgeLine, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def sectors(self) -> int:
        return 8 * self.m

    @property
    def max_candidates(self) -> int:
        return max(self.count)

    @property
    def table_bytes(self) -> int:
        """Two int32 per sector: first edge and range length."""
        return self.sectors * 2 * INDEX_BYTES

    def candidates(self, sector: int) -> list[int]:
        """Edge indices stored for ``sector``, in cyclic order."""
        n = self.polygon.n
        return [(self.first[sector] + i) % n for i in range(self.count[sector])]

    def report_line(self) -> str:
        return f"polar m={self.m} maxcand={self.max_candidates} bytes={self.table_bytes}"


def _cyclic_range(members: list[int], n: int) -> tuple[int, int]:
    """Smallest cyclic range [first, first+count) of edge indices covering ``members``."""
    ks = sorted(set(members))
    if len(ks) == n:
        return 0, n
    if len(ks) == 1:
        return ks[0], 1
    # The range starts right after the widest gap between consecutive members.
    gaps = [((ks[(i + 1) % len(ks)] - ks[i]) % n, i) for i in range(len(ks))]
    _, at = max(gaps)
    first = ks[(at + 1) % len(ks)]
    last = ks[at]
    return first, (last - first) % n + 1


def build(poly: ConvexPolygon, m: Optional[int] = None, m_cap: int = M_CAP) -> PolarGrid:
    """Build the sector table of ``poly``.

    Every edge is marked in all sectors of the cyclic range between its
    endpoints' sectors, both ends included, so sectors holding a vertex list
    both edges meeting there.

    Args:
        poly: Validated polygon
        m: Sectors per octant; defaults to ``auto_m``
        m_cap: Upper bound for the automatic choice of ``m``

    Returns:
        Immutable PolarGrid
    """
    center = reference_point(poly)
    if m is None:
        m = auto_m(poly, center, m_cap)
        capped = m >= m_cap and math.atan(1.0 / m) > min(angular_spans(poly, center))
        if capped:
            logger.warning("polar table capped at m=%d; candidate ranges grow instead", m)
    else:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        capped = False

    total = 8 * m
    n = poly.n
    ids = [sector_index(v - center, m) for v in poly.vertices]
    members: list[list[int]] = [[] for _ in range(total)]
    for k in range(n):
        sa, sb = ids[k], ids[(k + 1) % n]
        span = (sb - sa) % total
        # An edge subtends less than a half turn; a longer span means rounding
        # swapped the endpoint sectors of a tiny edge.
        if span > total // 2:
            sa, span = sb, (sa - sb) % total
        for step in range(span + 1):
            members[(sa + step) % total].append(k)

    first, count = [], []
    for s, ks in enumerate(members):
        if not ks:
            logger.warning("sector %d received no edges; storing the full range", s)
            ks = list(range(n))
        f, c = _cyclic_range(ks, n)
        first.append(f)
        count.append(c)

    edges = poly.edges
    lines = tuple(
        tuple(edges[(f + i) % n] for i in range(c)) for f, c in zip(first, count)
    )
    grid = PolarGrid(
        polygon=poly,
        center=center,
        m=m,
        first=tuple(first),
        count=tuple(count),
        capped=capped,
        box_radius=interior_box_radius(poly.edges, center.x, center.y, poly.eps),
        sector_lines=lines,
    )
    logger.debug("built %s for N=%d", grid.report_line(), n)
    return grid


def query(grid: PolarGrid, p: Point2) -> Containment:
    """O(1) containment: locate the sector of ``p`` and test its candidate edges."""
    require_finite(p)
    cx, cy = grid.center
    dx, dy = p[0] - cx, p[1] - cy
    r = grid.box_radius
    if abs(dx) < r and abs(dy) < r:
        return Containment.INSIDE
    if dx == 0.0 and dy == 0.0:
        return classify_edges(grid.polygon.edges, p[0], p[1])
    return classify_edges(grid.sector_lines[sector_index((dx, dy), grid.m)], p[0], p[1])
