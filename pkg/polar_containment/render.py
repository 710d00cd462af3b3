"""SVG diagrams of the 2D subdivisions, and guarded file output."""
import logging
from pathlib import Path
from typing import Union

import drawsvg as draw

from .locators.polar import PolarGrid, sector_ray
from .locators.slab import SlabTable
from .models import ConvexPolygon

logger = logging.getLogger(__name__)

Structure = Union[PolarGrid, SlabTable]

CANVAS = 640
MARGIN = 32
OUTLINE = "#1f2933"
SQUARE = "#7b8794"
RAY = "#3e7cb1"
SLAB = "#c05621"
CENTER = "#d64545"


class FileWriteError(Exception):
    """Output file could not be written."""
    pass


def write_output(path: Path, text: str) -> None:
    """Write ``text`` to ``path``, creating parent directories.

    Raises:
        FileWriteError: On any OSError
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise FileWriteError(f"Cannot write {path}: {e}")


class _Frame:
    """Maps world coordinates onto the canvas, y pointing up."""

    def __init__(self, xs: list[float], ys: list[float]):
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys)) or 1.0
        self.scale = (CANVAS - 2 * MARGIN) / span

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        return MARGIN + (x - self.x0) * self.scale, MARGIN + (self.y1 - y) * self.scale


def _opacity(count: int, most: int) -> float:
    return 0.08 + 0.5 * (count - 1) / max(1, most - 1)


def _polygon(d: draw.Drawing, poly: ConvexPolygon, frame: _Frame) -> None:
    coords = [c for v in poly.vertices for c in frame(v.x, v.y)]
    d.append(draw.Lines(*coords, close=True, fill="none", stroke=OUTLINE, stroke_width=2,
                        class_="polygon"))


def _polar(d: draw.Drawing, grid: PolarGrid) -> _Frame:
    cx, cy = grid.center
    half = max(max(abs(v.x - cx), abs(v.y - cy)) for v in grid.polygon.vertices)
    frame = _Frame([cx - half, cx + half], [cy - half, cy + half])
    origin = frame(cx, cy)

    def corner(s: int, frac: float) -> tuple[float, float]:
        dx, dy = sector_ray(s, grid.m, frac)
        return frame(cx + half * dx, cy + half * dy)

    most = grid.max_candidates
    for s in range(grid.sectors):
        d.append(draw.Lines(*origin, *corner(s, 0.0), *corner(s, 1.0), close=True,
                            fill=RAY, fill_opacity=_opacity(grid.count[s], most),
                            stroke="none", class_="sector-cell"))
    for s in range(grid.sectors):
        d.append(draw.Line(*origin, *corner(s, 0.0), stroke=RAY, stroke_width=0.75,
                           class_="sector-ray"))

    x, y = frame(cx - half, cy + half)
    side = 2 * half * frame.scale
    d.append(draw.Rectangle(x, y, side, side, fill="none", stroke=SQUARE,
                            stroke_dasharray="6,4", class_="virtual-square"))
    d.append(draw.Circle(*origin, 4, fill=CENTER, class_="reference-point"))
    return frame


def _slabs(d: draw.Drawing, table: SlabTable) -> _Frame:
    xs = [v.x for v in table.polygon.vertices]
    frame = _Frame(xs, [table.y_min, table.y_max])
    x_lo, x_hi = min(xs), max(xs)
    most = table.max_candidates
    for s in range(table.slab_count):
        y_lo = table.y_min + s * table.height
        left, top = frame(x_lo, y_lo + table.height)
        count = len(table.left[s]) + len(table.right[s])
        d.append(draw.Rectangle(left, top, (x_hi - x_lo) * frame.scale,
                                table.height * frame.scale, fill=SLAB,
                                fill_opacity=_opacity(count, most), stroke="none",
                                class_="slab-cell"))
        d.append(draw.Line(*frame(x_lo, y_lo), *frame(x_hi, y_lo), stroke=SLAB,
                           stroke_width=0.75, class_="slab-line"))
    return frame


def render_svg(poly: ConvexPolygon, structure: Structure, path: Path) -> None:
    """Write a diagram of ``structure`` over ``poly`` as a standalone SVG.

    PolarGrid: virtual square, 8m sector rays and sectors shaded by candidate
    count. SlabTable: one line per slab and slabs shaded by candidate count.

    Raises:
        FileWriteError: If the file cannot be written
    """
    d = draw.Drawing(CANVAS, CANVAS)
    d.append(draw.Rectangle(0, 0, CANVAS, CANVAS, fill="white"))
    if isinstance(structure, PolarGrid):
        frame = _polar(d, structure)
    elif isinstance(structure, SlabTable):
        frame = _slabs(d, structure)
    else:
        raise TypeError(f"Cannot render {type(structure).__name__}")
    _polygon(d, poly, frame)

    write_output(path, d.as_svg())
    logger.info("wrote %s (%s)", path, structure.report_line())
