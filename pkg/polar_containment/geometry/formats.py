"""Polygon text format and OFF polyhedron files."""
from pathlib import Path
from typing import Optional, Sequence

from ..models import ConvexPolygon, ConvexPolyhedron, Tolerance
from .core import validate_polygon, validate_polyhedron


class ShapeFormatError(Exception):
    """Malformed polygon or OFF file."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-blank lines with comments removed, paired with 1-based line numbers."""
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if fields:
            out.append((number, fields))
    return out


def _floats(fields: list[str], count: int, line: int) -> list[float]:
    if len(fields) < count:
        raise ShapeFormatError(f"expected {count} numbers, got {len(fields)}", line)
    try:
        return [float(f) for f in fields[:count]]
    except ValueError as e:
        raise ShapeFormatError(f"invalid number: {e}", line)


def _int(field: str, line: int) -> int:
    try:
        return int(field)
    except ValueError:
        raise ShapeFormatError(f"expected an integer, got {field!r}", line)


def parse_polygon_text(text: str) -> list[tuple[float, float]]:
    """Parse ``N`` followed by N lines of ``x y``."""
    lines = _content_lines(text)
    if not lines:
        raise ShapeFormatError("empty polygon file")
    number, fields = lines[0]
    count = _int(fields[0], number)
    if len(lines) - 1 < count:
        raise ShapeFormatError(f"expected {count} vertex lines, found {len(lines) - 1}")
    return [tuple(_floats(f, 2, ln)) for ln, f in lines[1:count + 1]]


def format_polygon_text(vertices: Sequence[Sequence[float]]) -> str:
    """Inverse of ``parse_polygon_text``; floats are written with ``repr``."""
    rows = [str(len(vertices))]
    rows.extend(f"{float(x)!r} {float(y)!r}" for x, y in vertices)
    return "\n".join(rows) + "\n"


def parse_off(text: str) -> tuple[list[tuple[float, float, float]], list[list[int]]]:
    """Parse an OFF file into vertices and face index rings."""
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != "OFF":
        raise ShapeFormatError("missing OFF header", lines[0][0] if lines else None)

    # The counts may share the header line ("OFF 8 6 12").
    header_number, header = lines[0]
    if len(header) > 1:
        counts, body = (header_number, header[1:]), lines[1:]
    else:
        if len(lines) < 2:
            raise ShapeFormatError("missing counts line")
        counts, body = lines[1], lines[2:]
    count_line, count_fields = counts
    if len(count_fields) < 2:
        raise ShapeFormatError("counts line needs 'V F E'", count_line)
    n_vertices = _int(count_fields[0], count_line)
    n_faces = _int(count_fields[1], count_line)
    if len(body) < n_vertices + n_faces:
        raise ShapeFormatError(
            f"expected {n_vertices} vertex and {n_faces} face lines, found {len(body)}"
        )

    vertices = [tuple(_floats(f, 3, ln)) for ln, f in body[:n_vertices]]
    faces = []
    for ln, fields in body[n_vertices:n_vertices + n_faces]:
        k = _int(fields[0], ln)
        if len(fields) < k + 1:
            raise ShapeFormatError(f"face lists {k} indices but has {len(fields) - 1}", ln)
        faces.append([_int(f, ln) for f in fields[1:k + 1]])
    return vertices, faces


def format_off(vertices: Sequence[Sequence[float]], faces: Sequence[Sequence[int]]) -> str:
    """Inverse of ``parse_off``; the edge count is derived from the faces."""
    edges = {
        (min(r[i], r[(i + 1) % len(r)]), max(r[i], r[(i + 1) % len(r)]))
        for r in faces
        for i in range(len(r))
    }
    rows = ["OFF", f"{len(vertices)} {len(faces)} {len(edges)}"]
    rows.extend(" ".join(repr(float(c)) for c in v) for v in vertices)
    rows.extend(" ".join(str(i) for i in [len(r), *r]) for r in faces)
    return "\n".join(rows) + "\n"


def read_polygon(path: Path, tolerance: Optional[Tolerance] = None) -> ConvexPolygon:
    """Read and validate a polygon file."""
    return validate_polygon(parse_polygon_text(Path(path).read_text()), tolerance)


def read_polyhedron(path: Path, tolerance: Optional[Tolerance] = None) -> ConvexPolyhedron:
    """Read and validate an OFF file."""
    vertices, faces = parse_off(Path(path).read_text())
    return validate_polyhedron(vertices, faces, tolerance)


def read_shape(path: Path, tolerance: Optional[Tolerance] = None):
    """Read a polygon or a polyhedron, chosen by the ``.off`` suffix."""
    path = Path(path)
    if path.suffix.lower() == ".off":
        return read_polyhedron(path, tolerance)
    return read_polygon(path, tolerance)


def write_shape(shape, path: Path) -> None:
    """Write a validated polygon (text format) or polyhedron (OFF)."""
    if isinstance(shape, ConvexPolyhedron):
        text = format_off(shape.vertices, shape.faces)
    else:
        text = format_polygon_text(shape.vertices)
    Path(path).write_text(text)
