"""Polar Containment - O(1) point-in-convex-polygon and point-in-convex-polyhedron queries."""
__version__ = "0.1.0"
