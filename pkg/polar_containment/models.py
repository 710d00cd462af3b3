"""Data models for shapes, verdicts and benchmark records."""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple


class Containment(str, Enum):
    """Three-valued verdict of a containment query."""
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Point2(NamedTuple):
    """A point (or vector) in the plane."""
    x: float
    y: float

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


class Point3(NamedTuple):
    """A point (or vector) in space."""
    x: float
    y: float
    z: float

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


Vector2 = Point2
Vector3 = Point3


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance shared by every predicate.

    The absolute band of a shape is ``eps_rel * diameter``.
    """
    eps_rel: float = 1e-12

    def __post_init__(self):
        if not (self.eps_rel > 0 and math.isfinite(self.eps_rel)):
            raise ValueError(f"eps_rel must be a positive finite number, got {self.eps_rel!r}")


class EdgeLine(NamedTuple):
    """Inward edge line ``nx*x + ny*y - c`` with its Boundary band.

    The normal is not normalized, its length equals the edge length, so the
    band is ``eps_rel * diameter * |edge|``.
    """
    nx: float
    ny: float
    c: float
    band: float


class Plane(NamedTuple):
    """Outward face plane, ``nx*x + ny*y + nz*z <= d`` inside; unit normal."""
    nx: float
    ny: float
    nz: float
    d: float


@dataclass(frozen=True)
class ConvexPolygon:
    """Validated strictly convex polygon with counterclockwise vertices."""
    vertices: tuple[Point2, ...]
    edges: tuple[EdgeLine, ...]
    diameter: float
    tolerance: Tolerance = field(default_factory=Tolerance)

    @property
    def n(self) -> int:
        """Number of vertices (and edges)."""
        return len(self.vertices)

    @property
    def eps(self) -> float:
        """Absolute tolerance, ``eps_rel * diameter``."""
        return self.tolerance.eps_rel * self.diameter

    def edge_endpoints(self, k: int) -> tuple[Point2, Point2]:
        """Endpoints of edge ``k`` running from vertex k to vertex k+1."""
        return self.vertices[k], self.vertices[(k + 1) % len(self.vertices)]


@dataclass(frozen=True)
class ConvexPolyhedron:
    """Validated convex polyhedron with outward oriented face rings."""
    vertices: tuple[Point3, ...]
    faces: tuple[tuple[int, ...], ...]
    planes: tuple[Plane, ...]
    diameter: float
    tolerance: Tolerance = field(default_factory=Tolerance)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def eps(self) -> float:
        """Absolute tolerance, ``eps_rel * diameter``."""
        return self.tolerance.eps_rel * self.diameter

    def face_points(self, f: int) -> list[Point3]:
        """Vertices of face ``f`` in ring order."""
        return [self.vertices[i] for i in self.faces[f]]


class ShapeFamily(str, Enum):
    """Generated shape families."""
    RANDOM_CONVEX_2D = "random-convex-2d"
    REGULAR_NGON = "regular-ngon"
    NEEDLE_2D = "needle-2d"
    TILTED_NGON = "tilted-ngon"
    GEODESIC_SPHERE = "geodesic-sphere"
    AFFINE_GEODESIC = "affine-geodesic"

    @property
    def is_3d(self) -> bool:
        return self in (ShapeFamily.GEODESIC_SPHERE, ShapeFamily.AFFINE_GEODESIC)


@dataclass(frozen=True)
class CorpusSpec:
    """Parameters that fully determine one generated shape.

    ``size`` is the vertex count for 2D families and the subdivision level
    for geodesic families; ``exponent`` is the k of the needle and tilted
    families.
    """
    family: ShapeFamily
    size: int
    rotation: float = 0.0
    seed: int = 1
    exponent: int = 6

    def label(self) -> str:
        """Compact, parseable description (``family:key=value,...``)."""
        key = "level" if self.family.is_3d else "n"
        parts = [f"{key}={self.size}"]
        if self.family in (ShapeFamily.NEEDLE_2D, ShapeFamily.TILTED_NGON):
            parts.append(f"k={self.exponent}")
        if self.rotation:
            parts.append(f"rot={self.rotation!r}")
        parts.append(f"seed={self.seed}")
        return f"{self.family.value}:{','.join(parts)}"


@dataclass
class BenchRecord:
    """One benchmark cell: an algorithm timed on one shape."""
    algorithm: str
    n: int
    param: int
    build_ns: int
    query_ns_mean: float
    query_ns_p99: float
    queries: int
    seed: int

    CSV_HEADER = "algorithm,n,param,build_ns,query_ns_mean,query_ns_p99,queries,seed"

    def csv_row(self) -> str:
        """Render the record as a CSV row matching ``CSV_HEADER``."""
        return (
            f"{self.algorithm},{self.n},{self.param},{self.build_ns},"
            f"{self.query_ns_mean:.2f},{self.query_ns_p99:.2f},{self.queries},{self.seed}"
        )
