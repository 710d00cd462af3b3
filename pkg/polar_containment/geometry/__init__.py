"""Validated shapes, baseline containment tests and file formats."""
from .core import (
    DegenerateEdge,
    DegenerateInterior,
    GeometryError,
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
from .formats import ShapeFormatError, read_shape, write_shape

__all__ = [
    "DegenerateEdge",
    "DegenerateInterior",
    "GeometryError",
    "NonConvex",
    "NonFiniteCoordinate",
    "NonPlanarFace",
    "OpenSurface",
    "ShapeFormatError",
    "TooFewVertices",
    "ZeroVector",
    "half_plane_side",
    "point_in_polygon_linear",
    "point_in_polygon_logn",
    "point_in_polyhedron_linear",
    "polar_exact",
    "read_shape",
    "spherical_exact",
    "validate_polygon",
    "validate_polyhedron",
    "write_shape",
]
