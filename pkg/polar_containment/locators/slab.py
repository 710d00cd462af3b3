"""Uniform y-axis slabs with per-slab left/right boundary edges."""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from ..geometry.core import classify_edges, require_finite
from ..models import Containment, ConvexPolygon, EdgeLine, Point2

logger = logging.getLogger(__name__)

M_CAP = 65536
INDEX_BYTES = 4


@dataclass(frozen=True)
class SlabTable:
    """Slabs partitioning [y_min, y_max] with the chain edges crossing each."""
    polygon: ConvexPolygon
    y_min: float
    y_max: float
    slab_count: int
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    capped: bool = False
    slab_lines: tuple[tuple[EdgeLine, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def height(self) -> float:
        return (self.y_max - self.y_min) / self.slab_count

    @property
    def max_candidates(self) -> int:
        return max(len(lf) + len(rt) for lf, rt in zip(self.left, self.right))

    @property
    def table_bytes(self) -> int:
        """Two int32 offsets per slab plus one int32 per stored edge index."""
        entries = sum(len(lf) + len(rt) for lf, rt in zip(self.left, self.right))
        return (self.slab_count + 1) * 2 * INDEX_BYTES + entries * INDEX_BYTES

    def slab_of(self, y: float) -> int:
        """Slab holding ``y``, clamped into the end slabs."""
        k = math.floor((y - self.y_min) / self.height)
        return min(max(k, 0), self.slab_count - 1)

    def report_line(self) -> str:
        return f"slab M={self.slab_count} maxcand={self.max_candidates} bytes={self.table_bytes}"


def split_chains(poly: ConvexPolygon) -> tuple[list[int], list[int]]:
    """Split the edge cycle at the lowest and highest vertices.

    Ties go to the smaller x. Returns (left, right) edge indices; the right
    chain runs counterclockwise from the bottom vertex to the top vertex.
    """
    verts = poly.vertices
    n = poly.n
    bottom = min(range(n), key=lambda k: (verts[k].y, verts[k].x))
    top = min(range(n), key=lambda k: (-verts[k].y, verts[k].x))
    right, left = [], []
    k = bottom
    while k != top:
        right.append(k)
        k = (k + 1) % n
    while k != bottom:
        left.append(k)
        k = (k + 1) % n
    return left, right


def min_edge_rise(poly: ConvexPolygon) -> Optional[float]:
    """Smallest |dy| over edges, ignoring near-horizontal edges within the tolerance."""
    eps = poly.eps
    rises = [
        abs(b.y - a.y)
        for a, b in (poly.edge_endpoints(k) for k in range(poly.n))
        if abs(b.y - a.y) >= eps
    ]
    return min(rises) if rises else None


def build_slabs(poly: ConvexPolygon, slabs: Optional[int] = None, m_cap: int = M_CAP) -> SlabTable:
    """Build the slab table of ``poly``.

    The default slab count makes a slab no taller than the smallest edge
    rise, capped at ``m_cap``. Lists are variable length, so a capped table
    stays correct and only grows its lists.
    """
    ys = [v.y for v in poly.vertices]
    y_min, y_max = min(ys), max(ys)
    capped = False
    if slabs is None:
        rise = min_edge_rise(poly)
        wanted = math.ceil((y_max - y_min) / rise) if rise else 1
        slabs = max(1, min(wanted, m_cap))
        capped = wanted > m_cap
        if capped:
            logger.warning("slab table capped at M=%d (wanted %d)", m_cap, wanted)
    elif slabs < 1:
        raise ValueError(f"slab count must be >= 1, got {slabs}")

    height = (y_max - y_min) / slabs
    left_chain, right_chain = split_chains(poly)
    left: list[list[int]] = [[] for _ in range(slabs)]
    right: list[list[int]] = [[] for _ in range(slabs)]
    for chain, lists in ((left_chain, left), (right_chain, right)):
        for k in chain:
            a, b = poly.edge_endpoints(k)
            lo, hi = min(a.y, b.y), max(a.y, b.y)
            # Closed overlap: a slab whose top equals the edge's lowest y still lists it.
            s_lo = max(0, math.ceil((lo - y_min) / height) - 1)
            s_hi = min(slabs - 1, math.floor((hi - y_min) / height))
            for s in range(s_lo, s_hi + 1):
                lists[s].append(k)

    edges = poly.edges
    table = SlabTable(
        polygon=poly,
        y_min=y_min,
        y_max=y_max,
        slab_count=slabs,
        left=tuple(tuple(lf) for lf in left),
        right=tuple(tuple(rt) for rt in right),
        capped=capped,
        slab_lines=tuple(
            tuple(edges[k] for k in lf + rt) for lf, rt in zip(left, right)
        ),
    )
    logger.debug("built %s for N=%d", table.report_line(), poly.n)
    return table


def query_slab(table: SlabTable, p: Point2) -> Containment:
    """O(1) containment: y-range rejection, then the edges of one slab."""
    require_finite(p)
    y = p[1]
    eps = table.polygon.eps
    if y > table.y_max + eps or y < table.y_min - eps:
        return Containment.OUTSIDE
    return classify_edges(table.slab_lines[table.slab_of(y)], p[0], y)
