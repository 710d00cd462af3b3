"""Command handlers for the pcont subcommands."""
import argparse
import re
from pathlib import Path
from typing import Optional

from .config import AppConfig, write_default_config
from .corpus import default_corpus_2d, default_corpus_3d, gen_shape, parse_corpus
from .geometry import read_shape, write_shape
from .harness import (
    ALGORITHMS,
    BuildOptions,
    Case,
    SensitivityRow,
    bench_cases,
    bench_ratios,
    cases_from_specs,
    check_cell_totality,
    check_cube_coverage,
    check_polar_coverage,
    check_scale_invariance,
    check_sector_totality,
    format_csv,
    format_ratios,
    is_3d,
    run_bench,
    run_sensitivity,
    run_verify,
)
from .locators.cube import build3
from .locators.polar import build
from .locators.slab import build_slabs
from .models import Tolerance
from .render import FileWriteError, render_svg, write_output


class CLIError(Exception):
    """CLI error."""
    pass


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command; common flags work after the command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Path to config file")
    common.add_argument("--seed", type=int, help="Seed for generated shapes and queries")
    common.add_argument("--eps", type=float, help="Relative boundary tolerance (default 1e-12)")
    common.add_argument("--m", type=int, help="Sectors per octant (polar) or cells per side (cube)")
    common.add_argument("--slabs", type=int, help="Slab count for the slab locator")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    shapes = argparse.ArgumentParser(add_help=False)
    shapes.add_argument(
        "--corpus", action="append", default=[],
        help="Shape as family:key=value,... (repeatable), e.g. regular-ngon:n=64",
    )
    shapes.add_argument(
        "--input", action="append", default=[], type=Path,
        help="Polygon text or .off file (repeatable)",
    )

    parser = argparse.ArgumentParser(
        prog="pcont",
        description="Constant-time point containment for convex polygons and polyhedra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common, shapes], help="Write shapes to files")
    gen.add_argument("--out", type=Path, default=Path("."), help="Output directory")

    verify = sub.add_parser("verify", parents=[common, shapes], help="Check locators against the linear test")
    verify.add_argument("--algorithms", default=",".join(ALGORITHMS), help="Comma-separated algorithms")
    verify.add_argument("--queries", type=int, help="Query points per shape")
    verify.add_argument("--jobs", type=int, default=1, help="Shapes verified concurrently")
    verify.add_argument("--coverage", action="store_true", help="Also run ray coverage and index sweeps")
    verify.add_argument("--rays", type=int, default=10_000, help="Rays per sector for --coverage")
    verify.add_argument("--out", type=Path, help="Also write the report to this file")

    bench = sub.add_parser("bench", parents=[common, shapes], help="Time queries, CSV output")
    bench.add_argument("--algorithms", default="linear,logn,polar,slab,linear3,cube")
    bench.add_argument("--queries", type=int, help="Query points per shape")
    bench.add_argument("--repetitions", type=int, help="Timed passes per cell (median reported)")
    bench.add_argument("--out", type=Path, help="CSV file (default stdout)")

    render = sub.add_parser("render", parents=[common, shapes], help="SVG diagram of a 2D subdivision")
    render.add_argument("--structure", choices=["polar", "slab"], default="polar")
    render.add_argument("--out", type=Path, default=Path("diagram.svg"), help="SVG file")

    build_cmd = sub.add_parser("build", parents=[common, shapes], help="Print build reports")
    build_cmd.add_argument("--algorithms", default="polar,slab,cube")

    sens = sub.add_parser("sensitivity", parents=[common], help="Slab vs polar table sizes")
    sens.add_argument("--n", type=int, default=16, help="Vertex count")
    sens.add_argument("--k", default="2,4,6", help="Comma-separated exponents")

    config = sub.add_parser("config", parents=[common], help="Configuration helpers")
    config_sub = config.add_subparsers(dest="config_command", required=True)
    init = config_sub.add_parser("init", help="Write the default configuration")
    init.add_argument("--out", type=Path, help="Destination (default ./containment.yaml)")

    return parser


def _names(text: str) -> list[str]:
    return [name.strip() for name in text.split(",") if name.strip()]


def _seed(args: argparse.Namespace, config: AppConfig) -> int:
    return args.seed if args.seed is not None else config.seed


def _tolerance(args: argparse.Namespace, config: AppConfig) -> Tolerance:
    try:
        return Tolerance(args.eps if args.eps is not None else config.tolerance.eps_rel)
    except ValueError as e:
        raise CLIError(str(e))


def _options(args: argparse.Namespace, config: AppConfig) -> BuildOptions:
    return BuildOptions(
        m=args.m,
        slabs=args.slabs,
        polar_cap=config.polar.m_cap,
        cube_cap=config.cube.m_cap,
        slab_cap=config.slab.m_cap,
    )


def load_cases(args: argparse.Namespace, config: AppConfig, defaults: Optional[list] = None) -> list[Case]:
    """Shapes named by --corpus and --input, else ``defaults`` (corpus strings or specs)."""
    seed = _seed(args, config)
    tolerance = _tolerance(args, config)
    specs = [parse_corpus(text, seed) for text in args.corpus]
    cases = cases_from_specs(specs, tolerance)
    cases += [Case(str(path), read_shape(path, tolerance), seed) for path in args.input]
    if cases:
        return cases
    if not defaults:
        raise CLIError("No shapes given. Use --corpus <family:params> or --input <file>")
    specs = [parse_corpus(d, seed) if isinstance(d, str) else d for d in defaults]
    return cases_from_specs(specs, tolerance)


def _file_name(label: str, three_d: bool) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", label) + (".off" if three_d else ".poly")


def cmd_gen(args: argparse.Namespace, config: AppConfig) -> int:
    seed = _seed(args, config)
    tolerance = _tolerance(args, config)
    if not args.corpus:
        raise CLIError("gen needs at least one --corpus <family:params>")
    for text in args.corpus:
        spec = parse_corpus(text, seed)
        shape = gen_shape(spec, tolerance)
        path = args.out / _file_name(spec.label(), spec.family.is_3d)
        try:
            args.out.mkdir(parents=True, exist_ok=True)
            write_shape(shape, path)
        except OSError as e:
            raise FileWriteError(f"Cannot write {path}: {e}")
        print(path)
    return 0


def _coverage(cases: list[Case], args: argparse.Namespace, options: BuildOptions, seed: int) -> list[str]:
    failures = []
    lines = []
    for case in cases:
        if is_3d(case.shape):
            grid3 = build3(case.shape, options.m, options.cube_cap)
            bad = check_cube_coverage(grid3, 10 * args.rays, seed)
            lines.append(f"coverage {case.label}: {grid3.report_line()} violations={bad}")
        else:
            grid = build(case.shape, options.m, options.polar_cap)
            bad = check_polar_coverage(grid, args.rays, seed)
            if not grid.capped and options.m is None and grid.max_candidates > 2:
                failures.append(f"candidate bound exceeded on {case.label}: {grid.report_line()}")
            lines.append(f"coverage {case.label}: {grid.report_line()} violations={bad}")
        if bad:
            failures.append(f"{bad} coverage violations on {case.label}")

    sector_bad, wraps = check_sector_totality(seed=seed)
    cell_bad = check_cell_totality(seed=seed)
    scale_bad = check_scale_invariance(seed=seed)
    lines.append(f"sector totality: violations={sector_bad} wraps={wraps}")
    lines.append(f"cell totality: violations={cell_bad}")
    lines.append(f"scale invariance: violations={scale_bad}")
    if sector_bad or wraps > 1 or cell_bad or scale_bad:
        failures.append("direction index sweeps reported violations")
    for line in lines:
        print(line)
    return failures


def cmd_verify(args: argparse.Namespace, config: AppConfig) -> int:
    seed = _seed(args, config)
    defaults = config.verify.corpus or default_corpus_2d(seed) + default_corpus_3d(seed)
    cases = load_cases(args, config, defaults)
    options = _options(args, config)
    queries = args.queries or config.verify.queries

    report = run_verify(cases, _names(args.algorithms), queries, options, jobs=args.jobs)
    for name, count in report.checks.items():
        print(f"{name}: {count} points")
    print(report.summary())
    if args.out:
        write_output(args.out, report.summary() + "\n")

    if args.coverage:
        failures = _coverage(cases, args, options, seed)
        for failure in failures:
            print(f"Error: {failure}")
        if failures:
            return 1
    return 0


def cmd_bench(args: argparse.Namespace, config: AppConfig) -> int:
    seed = _seed(args, config)
    if args.corpus or args.input:
        cases = load_cases(args, config)
    else:
        cases = bench_cases(config.bench.sizes, config.bench.levels, seed)
    records = run_bench(
        cases,
        _names(args.algorithms),
        args.queries or config.bench.queries,
        args.repetitions or config.bench.repetitions,
        _options(args, config),
    )
    csv = format_csv(records)
    summary = format_ratios(bench_ratios(records))
    if args.out:
        write_output(args.out, csv)
        print(f"Wrote {len(records)} records to {args.out}")
    else:
        print(csv, end="")
    print(summary)
    return 0


def cmd_render(args: argparse.Namespace, config: AppConfig) -> int:
    cases = load_cases(args, config)
    if len(cases) != 1:
        raise CLIError("render takes exactly one shape")
    shape = cases[0].shape
    if is_3d(shape):
        raise CLIError("render supports polygons only")
    options = _options(args, config)
    if args.structure == "polar":
        structure = build(shape, options.m, options.polar_cap)
    else:
        structure = build_slabs(shape, options.slabs, options.slab_cap)
    render_svg(shape, structure, args.out)
    print(f"{structure.report_line()} -> {args.out}")
    return 0


def cmd_build(args: argparse.Namespace, config: AppConfig) -> int:
    options = _options(args, config)
    wanted = _names(args.algorithms)
    for case in load_cases(args, config):
        print(f"# {case.label}")
        if is_3d(case.shape):
            if "cube" in wanted:
                print(build3(case.shape, options.m, options.cube_cap).report_line())
            continue
        if "polar" in wanted:
            print(build(case.shape, options.m, options.polar_cap).report_line())
        if "slab" in wanted:
            print(build_slabs(case.shape, options.slabs, options.slab_cap).report_line())
    return 0


def cmd_sensitivity(args: argparse.Namespace, config: AppConfig) -> int:
    try:
        exponents = [int(k) for k in _names(args.k)]
    except ValueError:
        raise CLIError(f"--k must be comma-separated integers, got '{args.k}'")
    rows = run_sensitivity(args.n, exponents, options=_options(args, config))
    print(SensitivityRow.HEADER)
    for row in rows:
        print(row.csv_row())
    return 0


def cmd_config(args: argparse.Namespace, config: AppConfig) -> int:
    path = write_default_config(args.out)
    print(f"Wrote default configuration to {path}")
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "render": cmd_render,
    "build": cmd_build,
    "sensitivity": cmd_sensitivity,
    "config": cmd_config,
}


def handle_command(args: argparse.Namespace, config: AppConfig) -> int:
    """Dispatch a parsed command.

    Returns:
        Exit code (0 for success, 1 for failed checks)
    """
    return COMMANDS[args.command](args, config)
