"""Oracle verification, coverage sweeps, benchmarks and the slab sensitivity table.

Every locator is checked against the linear test (2D) or the linear plane
test (3D) on mixed query points; coverage sweeps cast rays with numpy and
compare the exit edge or face against the stored candidates.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .corpus import Shape, gen_polygon, gen_queries, gen_shape
from .geometry.core import (
    point_in_polygon_linear,
    point_in_polygon_logn,
    point_in_polyhedron_linear,
)
from .locators import cube, polar, slab
from .locators.cube import CubeGrid, build3, cell_indices, query3
from .locators.polar import (
    PolarGrid,
    build,
    octant_conditions,
    query,
    reference_point,
    sector_indices,
    sector_rays,
)
from .locators.slab import build_slabs, query_slab
from .models import (
    BenchRecord,
    Containment,
    ConvexPolygon,
    ConvexPolyhedron,
    CorpusSpec,
    ShapeFamily,
    Tolerance,
)
from .utils import chunked, format_ns, ratio

logger = logging.getLogger(__name__)

ALGORITHMS_2D = ("linear", "logn", "polar", "slab")
ALGORITHMS_3D = ("linear3", "cube")
ALGORITHMS = ALGORITHMS_2D + ALGORITHMS_3D

TIMING_CHUNK = 1000
RAY_CHUNK = 4096
CELL_TOLERANCE = 1e-12


class HarnessError(Exception):
    """Invalid harness request (unknown algorithm, empty corpus)."""
    pass


class MismatchFound(Exception):
    """A locator disagreed with the linear oracle.

    Carries everything needed to reproduce the failure.
    """

    def __init__(self, label: str, seed: int, point: tuple, verdicts: dict[str, Containment]):
        self.label = label
        self.seed = seed
        self.point = point
        self.verdicts = verdicts
        shown = ", ".join(f"{name}={v.value}" for name, v in verdicts.items())
        super().__init__(f"mismatch on {label} (query seed {seed}) at {tuple(point)!r}: {shown}")


class Case(NamedTuple):
    """One shape under test with the seed of its query points."""
    label: str
    shape: Shape
    seed: int


@dataclass(frozen=True)
class BuildOptions:
    """Table sizes for prepared locators; None picks the automatic size."""
    m: Optional[int] = None
    slabs: Optional[int] = None
    polar_cap: int = polar.M_CAP
    cube_cap: int = cube.M_CAP
    slab_cap: int = slab.M_CAP
    workers: int = 1


@dataclass
class Prepared:
    """A locator built for one shape, ready to classify points."""
    name: str
    param: int
    build_ns: int
    classify: Callable[[Sequence[float]], Containment]
    report: str = ""


def is_3d(shape: Shape) -> bool:
    return isinstance(shape, ConvexPolyhedron)


def shape_size(shape: Shape) -> int:
    """Vertex count of a polygon, face count of a polyhedron."""
    return shape.face_count if is_3d(shape) else shape.n


def applicable(algorithms: Sequence[str], shape: Shape) -> list[str]:
    """The subset of ``algorithms`` that runs on the dimension of ``shape``."""
    own = ALGORITHMS_3D if is_3d(shape) else ALGORITHMS_2D
    return [name for name in algorithms if name in own]


def check_algorithms(algorithms: Sequence[str]) -> None:
    unknown = [name for name in algorithms if name not in ALGORITHMS]
    if unknown:
        raise HarnessError(
            f"Unknown algorithm(s) {', '.join(unknown)}. Valid algorithms: {', '.join(ALGORITHMS)}"
        )


def prepare(name: str, shape: Shape, options: BuildOptions = BuildOptions()) -> Prepared:
    """Build the structure behind ``name`` for ``shape`` and time the build."""
    start = time.perf_counter_ns()
    if name == "linear":
        prepared = Prepared(name, 0, 0, lambda p: point_in_polygon_linear(shape, p))
    elif name == "linear3":
        prepared = Prepared(name, 0, 0, lambda p: point_in_polyhedron_linear(shape, p))
    elif name == "logn":
        pivot = reference_point(shape)
        prepared = Prepared(name, 0, 0, lambda p: point_in_polygon_logn(shape, p, pivot))
    elif name == "polar":
        grid = build(shape, options.m, options.polar_cap)
        prepared = Prepared(name, grid.m, 0, lambda p: query(grid, p), grid.report_line())
    elif name == "slab":
        table = build_slabs(shape, options.slabs, options.slab_cap)
        prepared = Prepared(
            name, table.slab_count, 0, lambda p: query_slab(table, p), table.report_line()
        )
    elif name == "cube":
        grid3 = build3(shape, options.m, options.cube_cap, workers=options.workers)
        prepared = Prepared(name, grid3.m, 0, lambda p: query3(grid3, p), grid3.report_line())
    else:
        raise HarnessError(f"Unknown algorithm '{name}'")
    prepared.build_ns = time.perf_counter_ns() - start
    return prepared


def cases_from_specs(specs: Sequence[CorpusSpec], tolerance: Optional[Tolerance] = None) -> list[Case]:
    """Generate every shape of a corpus; each shape's queries reuse its own seed."""
    return [Case(spec.label(), gen_shape(spec, tolerance), spec.seed) for spec in specs]


# ---------------------------------------------------------------------------
# Oracle verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    """Outcome of a verification sweep."""
    shapes: int = 0
    points: int = 0
    checks: dict[str, int] = field(default_factory=dict)

    def summary(self) -> str:
        """Success line; any mismatch raises before a report exists."""
        return f"{self.shapes} shapes, {self.points} points, 0 mismatches"


def verify_case(
    case: Case, classifiers: dict[str, Callable[[Sequence[float]], Containment]], queries: int
) -> int:
    """Compare every classifier with the linear oracle on the query points of ``case``.

    Returns:
        Number of points checked

    Raises:
        MismatchFound: On the first disagreement
    """
    shape = case.shape
    oracle = point_in_polyhedron_linear if is_3d(shape) else point_in_polygon_linear
    points = gen_queries(shape, queries, case.seed)
    for p in points:
        expected = oracle(shape, p)
        for name, classify in classifiers.items():
            if classify(p) != expected:
                verdicts = {"linear oracle": expected}
                verdicts.update((n, c(p)) for n, c in classifiers.items())
                raise MismatchFound(case.label, case.seed, p, verdicts)
    return len(points)


def run_verify(
    cases: Sequence[Case],
    algorithms: Sequence[str],
    queries: int = 10_000,
    options: BuildOptions = BuildOptions(),
    jobs: int = 1,
) -> VerifyReport:
    """Cross-check ``algorithms`` against the linear oracle over ``cases``.

    Shapes may be processed concurrently; the mismatch reported is always
    the first one in corpus order.

    Raises:
        MismatchFound: If any algorithm disagrees with the oracle
    """
    check_algorithms(algorithms)
    if not cases:
        raise HarnessError("Empty corpus")

    def one(case: Case):
        names = applicable(algorithms, case.shape)
        classifiers = {name: prepare(name, case.shape, options).classify for name in names}
        try:
            return names, verify_case(case, classifiers, queries), None
        except MismatchFound as e:
            return names, 0, e

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(one, cases))
    else:
        outcomes = map(one, cases)

    report = VerifyReport()
    for case, (names, points, error) in zip(cases, outcomes):
        if error is not None:
            raise error
        report.shapes += 1
        report.points += points
        for name in names:
            report.checks[name] = report.checks.get(name, 0) + points
        logger.info("verified %s: %d points", case.label, points)
    return report


# ---------------------------------------------------------------------------
# Coverage and index sweeps
# ---------------------------------------------------------------------------


def check_polar_coverage(grid: PolarGrid, rays_per_sector: int = 10_000, seed: int = 1) -> int:
    """Cast random rays in every sector; count exit edges missing from the candidates."""
    poly = grid.polygon
    n = poly.n
    normals = np.array([(e.nx, e.ny) for e in poly.edges])
    offsets = np.array([e.c for e in poly.edges])
    base = offsets - normals @ np.asarray(grid.center)
    first = np.asarray(grid.first)
    count = np.asarray(grid.count)
    rng = np.random.default_rng(seed)

    violations = 0
    for s in range(grid.sectors):
        dx, dy = sector_rays(s, grid.m, rng.uniform(0.0, 1.0, rays_per_sector))
        denom = np.outer(dx, normals[:, 0]) + np.outer(dy, normals[:, 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom < 0, base / denom, np.inf)
        hit = np.argmin(t, axis=1)
        sid = sector_indices(dx, dy, grid.m)
        violations += int(np.count_nonzero((hit - first[sid]) % n >= count[sid]))
    return violations


def check_cube_coverage(grid: CubeGrid, rays: int = 100_000, seed: int = 1) -> int:
    """Cast random rays from the reference point; count exit faces missing from the ray's cell."""
    ph = grid.polyhedron
    normals = np.array([(p.nx, p.ny, p.nz) for p in ph.planes])
    base = np.array([p.d for p in ph.planes]) - normals @ np.asarray(grid.center)
    rng = np.random.default_rng(seed)
    m = grid.m

    violations = 0
    remaining = rays
    while remaining > 0:
        size = min(RAY_CHUNK, remaining)
        remaining -= size
        d = rng.normal(size=(size, 3))
        denom = d @ normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom > 0, base / denom, np.inf)
        hit = np.argmin(t, axis=1)
        face, i, j = cell_indices(d, m)
        flat = (face * m + i) * m + j
        violations += sum(
            1 for h, cell in zip(hit.tolist(), flat.tolist()) if h not in grid.cells[cell]
        )
    return violations


def check_sector_totality(samples: int = 1_000_000, m: int = 16, seed: int = 1) -> tuple[int, int]:
    """Random directions: every one in exactly one octant with an id in range.

    Returns:
        (violations, wraps) where wraps counts descents of the ids sorted by arctan2 angle
    """
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(samples, 2))
    dx, dy = d[:, 0], d[:, 1]
    ids = sector_indices(dx, dy, m)
    members = sum(c.astype(np.int64) for c in octant_conditions(dx, dy))
    violations = int(np.count_nonzero((members != 1) | (ids < 0) | (ids >= 8 * m)))
    order = np.argsort(np.mod(np.arctan2(dy, dx), 2.0 * math.pi), kind="stable")
    wraps = int(np.count_nonzero(np.diff(ids[order]) < 0))
    return violations, wraps


def _cell_violations(d: np.ndarray, m: int) -> int:
    face, i, j = cell_indices(d, m)
    rows = np.arange(len(d))
    axis = face // 2
    major = d[rows, axis] * np.where(face % 2 == 1, -1.0, 1.0)
    u_axis = np.where(axis == 0, 1, 0)
    v_axis = np.where(axis == 2, 1, 2)
    du, dv = d[rows, u_axis], d[rows, v_axis]
    h = 2.0 / m
    with np.errstate(divide="ignore", invalid="ignore"):
        u, v = du / major, dv / major
    ok = (
        (major > 0)
        & (np.abs(du) <= major)
        & (np.abs(dv) <= major)
        & (i >= 0) & (i < m) & (j >= 0) & (j < m)
        & (u >= -1.0 + i * h - CELL_TOLERANCE) & (u <= -1.0 + (i + 1) * h + CELL_TOLERANCE)
        & (v >= -1.0 + j * h - CELL_TOLERANCE) & (v <= -1.0 + (j + 1) * h + CELL_TOLERANCE)
    )
    return int(np.count_nonzero(~ok))


def check_cell_totality(samples: int = 1_000_000, m: int = 8, seed: int = 1) -> int:
    """Random directions: each lies inside the cone rebuilt from its cell id."""
    rng = np.random.default_rng(seed)
    return _cell_violations(rng.normal(size=(samples, 3)), m)


def check_scale_invariance(samples: int = 100_000, m: int = 16, seed: int = 1) -> int:
    """Sector and cell ids must not change when a direction is scaled by λ > 0."""
    rng = np.random.default_rng(seed)
    d2 = rng.normal(size=(samples, 2))
    d3 = rng.normal(size=(samples, 3))
    lam = np.exp(rng.uniform(-20.0, 20.0, samples))

    s_before = sector_indices(d2[:, 0], d2[:, 1], m)
    s_after = sector_indices(lam * d2[:, 0], lam * d2[:, 1], m)
    before = np.column_stack(cell_indices(d3, m))
    after = np.column_stack(cell_indices(lam[:, None] * d3, m))
    return int(np.count_nonzero(s_before != s_after)) + int(
        np.count_nonzero(np.any(before != after, axis=1))
    )


# ---------------------------------------------------------------------------
# Benchmarks
# ---------------------------------------------------------------------------


def time_queries(
    classify: Callable[[Sequence[float]], Containment], points: Sequence, repetitions: int
) -> tuple[float, float]:
    """Warm up once, then time ``repetitions`` passes in chunks.

    Returns:
        (median over passes of the mean ns per query, 99th percentile of the per-chunk ns per query)
    """
    for p in points:
        classify(p)

    clock = time.perf_counter_ns
    pass_means, chunk_means = [], []
    for _ in range(repetitions):
        total = 0
        for block in chunked(points, TIMING_CHUNK):
            start = clock()
            for p in block:
                classify(p)
            elapsed = clock() - start
            total += elapsed
            chunk_means.append(elapsed / len(block))
        pass_means.append(total / len(points))
    return float(np.median(pass_means)), float(np.percentile(chunk_means, 99))


def bench_cases(sizes: Sequence[int], levels: Sequence[int], seed: int = 1) -> list[Case]:
    """Regular polygons of every size and geodesic spheres of every level."""
    specs = [CorpusSpec(ShapeFamily.REGULAR_NGON, n, seed=seed) for n in sizes]
    specs += [CorpusSpec(ShapeFamily.GEODESIC_SPHERE, level, seed=seed) for level in levels]
    return cases_from_specs(specs)


def run_bench(
    cases: Sequence[Case],
    algorithms: Sequence[str],
    queries: int = 100_000,
    repetitions: int = 5,
    options: BuildOptions = BuildOptions(),
) -> list[BenchRecord]:
    """Time every applicable algorithm on every shape."""
    check_algorithms(algorithms)
    records = []
    for case in cases:
        points = gen_queries(case.shape, queries, case.seed)
        for name in applicable(algorithms, case.shape):
            prepared = prepare(name, case.shape, options)
            mean, p99 = time_queries(prepared.classify, points, repetitions)
            record = BenchRecord(
                algorithm=name,
                n=shape_size(case.shape),
                param=prepared.param,
                build_ns=prepared.build_ns,
                query_ns_mean=mean,
                query_ns_p99=p99,
                queries=len(points),
                seed=case.seed,
            )
            logger.info("bench %s on %s: %s/query", name, case.label, format_ns(mean))
            records.append(record)
    return records


def bench_ratios(records: Sequence[BenchRecord]) -> dict[str, tuple[int, int, float]]:
    """Per algorithm: (smallest n, largest n, mean query time ratio largest/smallest)."""
    by_algorithm: dict[str, dict[int, float]] = {}
    for r in records:
        by_algorithm.setdefault(r.algorithm, {})[r.n] = r.query_ns_mean
    ratios = {}
    for name, times in by_algorithm.items():
        lo, hi = min(times), max(times)
        if lo != hi:
            ratios[name] = (lo, hi, ratio(times[hi], times[lo]))
    return ratios


def format_csv(records: Sequence[BenchRecord]) -> str:
    return "\n".join([BenchRecord.CSV_HEADER] + [r.csv_row() for r in records]) + "\n"


def format_ratios(ratios: dict[str, tuple[int, int, float]]) -> str:
    lines = ["# query time ratio (largest N / smallest N)"]
    for name, (lo, hi, value) in ratios.items():
        lines.append(f"# {name}: N={hi}/N={lo} = {value:.2f}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Slab sensitivity
# ---------------------------------------------------------------------------


@dataclass
class SensitivityRow:
    """Table sizes for one near-horizontal-edge polygon."""
    family: str
    n: int
    k: int
    slab_m: int
    slab_bytes: int
    slab_capped: bool
    polar_m: int
    polar_bytes: int
    regular_polar_bytes: int

    HEADER = "family,n,k,slab_m,slab_bytes,slab_capped,polar_m,polar_bytes,regular_polar_bytes"

    def csv_row(self) -> str:
        return (
            f"{self.family},{self.n},{self.k},{self.slab_m},{self.slab_bytes},"
            f"{str(self.slab_capped).lower()},{self.polar_m},{self.polar_bytes},"
            f"{self.regular_polar_bytes}"
        )


def run_sensitivity(
    n: int = 16,
    exponents: Sequence[int] = (2, 4, 6),
    families: Sequence[ShapeFamily] = (ShapeFamily.TILTED_NGON, ShapeFamily.NEEDLE_2D),
    options: BuildOptions = BuildOptions(),
) -> list[SensitivityRow]:
    """Slab and polar table sizes as the smallest edge rise shrinks to 10^-k of the diameter."""
    regular = gen_polygon(CorpusSpec(ShapeFamily.REGULAR_NGON, n))
    regular_bytes = build(regular, m_cap=options.polar_cap).table_bytes
    rows = []
    for family in families:
        for k in exponents:
            poly: ConvexPolygon = gen_polygon(CorpusSpec(family, n, exponent=k))
            table = build_slabs(poly, m_cap=options.slab_cap)
            grid = build(poly, m_cap=options.polar_cap)
            rows.append(
                SensitivityRow(
                    family=family.value,
                    n=n,
                    k=k,
                    slab_m=table.slab_count,
                    slab_bytes=table.table_bytes,
                    slab_capped=table.capped,
                    polar_m=grid.m,
                    polar_bytes=grid.table_bytes,
                    regular_polar_bytes=regular_bytes,
                )
            )
    return rows
