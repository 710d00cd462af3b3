"""Preprocessed point locators: polar sectors, cube cells and y-slabs."""
from .cube import CellId, CubeFace, CubeGrid, build3, cell_index, query3, reference_point3
from .polar import PolarGrid, SectorId, auto_m, build, query, reference_point, sector_index
from .slab import SlabTable, build_slabs, query_slab

__all__ = [
    "CellId",
    "CubeFace",
    "CubeGrid",
    "PolarGrid",
    "SectorId",
    "SlabTable",
    "auto_m",
    "build",
    "build3",
    "build_slabs",
    "cell_index",
    "query",
    "query3",
    "query_slab",
    "reference_point",
    "reference_point3",
    "sector_index",
]
