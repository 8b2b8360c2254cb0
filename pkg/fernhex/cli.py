"""fernhex command line.

Subcommands:
  region   build a region and print it as JSON, CSV, ASCII art or SVG
  count    exact number of lozenge tilings of a region
  formula  evaluate one of the product formulas
  verify   run identity suites (formulas against counts, recurrences)
  bench    time the counting engines on a family of regions

Exit codes: 0 success, 1 failed verification or engine disagreement,
2 invalid input.

Typical use:
  fernhex region --x 2 --y 6 --z 4 --lobes 1,2,6,3 --format svg --out fc.svg
  fernhex count --hexagon 2,2,2,2,2,2
  fernhex formula cored 1 1 1 1
  fernhex verify --suite all --max-xyz 3 --max-lobe 2 --max-k 4 --report report.json
  fernhex bench --family hexagon --max 6 --engine dp --engine kasteleyn
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .cache import CountCache
from .config import FernhexConfig, get_config, load_config, set_config
from .counting import EngineKind, count_tilings
from .errors import EngineMismatch, FernDoesNotFit, FernhexError, InstanceTooLarge, InvalidInput
from .formulas import (
    cored_count_exact,
    fc_count_formula,
    g_function,
    hyperfactorial,
    macmahon_p,
    semihex_s,
    semihex_s_printed,
    theorem21_ratio,
    trapezoid_count,
    two_lobe_ratio,
)
from .lattice import TriRegion
from .metrics import init_metrics
from .regions import FernSpec, cored_layout, hexagon, semihexagon
from .render import render_ascii, render_svg
from .verifier import SUITES, GridConfig, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

ENGINES = [e.value for e in EngineKind]


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected at least 1")
    return value


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise InvalidInput(f"{what} must be comma-separated integers, got {text!r}")


# ---------------------------------------------------------------------------
# Region sources
# ---------------------------------------------------------------------------


def _add_source_flags(parser: argparse.ArgumentParser, with_file: bool = False):
    group = parser.add_argument_group("region source")
    group.add_argument("--x", type=_non_negative, help="x of the F-cored hexagon")
    group.add_argument("--y", type=_non_negative, help="y of the F-cored hexagon")
    group.add_argument("--z", type=_non_negative, help="z of the F-cored hexagon")
    group.add_argument("--lobes", help="fern lobe sizes, comma separated (default 0)")
    group.add_argument("--m", type=_non_negative, help="single triangular core of side m")
    group.add_argument("--hexagon", help="plain hexagon with sides a,b,c,d,e,f")
    group.add_argument("--semihex", help="dented semihexagon with blocks b1,b2,...")
    if with_file:
        group.add_argument("--region", dest="region_file", help="region JSON file")


def _load_region_file(path: str) -> TriRegion:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInput(f"cannot read region file {path}: {e}")
    try:
        return TriRegion.from_json(text)
    except ValidationError as e:
        raise InvalidInput(f"region file {path} does not match the region schema: {e}")


def build_region(args: argparse.Namespace) -> Tuple[TriRegion, Optional[TriRegion]]:
    """Region selected by the source flags, plus the fern cells to highlight if any."""
    if getattr(args, "region_file", None):
        return _load_region_file(args.region_file), None
    if args.hexagon:
        return hexagon(_int_list(args.hexagon, "--hexagon")), None
    if args.semihex:
        return semihexagon(_int_list(args.semihex, "--semihex")), None
    if args.x is None or args.y is None or args.z is None:
        raise InvalidInput("give --x, --y and --z, or one of --hexagon / --semihex / --region")
    if args.m is not None and args.lobes:
        raise InvalidInput("--m and --lobes are mutually exclusive")
    spec = FernSpec.of(args.m) if args.m is not None else FernSpec.parse(args.lobes or "0")
    layout = cored_layout(args.x, args.y, args.z, spec)
    return layout.region, layout.fern


def region_csv(region: TriRegion) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["u", "v", "orient"])
    for cell in region.sorted_cells():
        writer.writerow([cell.u, cell.v, cell.orient.value])
    return out.getvalue()


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_region(args: argparse.Namespace) -> int:
    region, fern = build_region(args)
    if args.format == "json":
        text = region.to_json(indent=2) + "\n"
    elif args.format == "csv":
        text = region_csv(region)
    elif args.format == "ascii":
        text = render_ascii(region, fern)
    else:
        text = render_svg(region, fern)
    _emit(text, args.out)
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    region, _ = build_region(args)
    engine = EngineKind(args.engine)
    cache = CountCache(get_config().storage_dir, persist=True) if args.cache else None
    value = cache.get(region, engine.value) if cache else None
    if value is None:
        value = count_tilings(region, engine, cross_check=args.cross_check)
        if cache:
            cache.put(region, engine.value, value)
            cache.flush()
    print(value)
    return EXIT_OK


def _arity(name: str, args: Sequence[int], exact: Optional[int] = None, at_least: int = 0):
    if exact is not None and len(args) != exact:
        raise InvalidInput(f"formula {name} takes {exact} arguments, got {len(args)}")
    if len(args) < at_least:
        raise InvalidInput(f"formula {name} takes at least {at_least} arguments, got {len(args)}")


def _fc_args(name: str, args: Sequence[int]) -> Tuple[int, int, int, FernSpec]:
    _arity(name, args, at_least=4)
    x, y, z, *lobes = args
    return x, y, z, FernSpec(tuple(lobes))


def _formula_trapezoid(args: Sequence[int]):
    _arity("trapezoid", args, at_least=2)
    m, n, *dents = args
    return trapezoid_count(m, n, dents)


def _formula_p(args: Sequence[int]):
    _arity("P", args, exact=3)
    return macmahon_p(*args)


def _formula_h(args: Sequence[int]):
    _arity("H", args, exact=1)
    return hyperfactorial(args[0])


def _formula_cored(args: Sequence[int]):
    _arity("cored", args, exact=4)
    return cored_count_exact(*args)


def _formula_two_lobe(args: Sequence[int]):
    _arity("two-lobe-ratio", args, exact=5)
    return two_lobe_ratio(*args)


FORMULAS: Dict[str, Callable[[Sequence[int]], object]] = {
    "P": _formula_p,
    "H": _formula_h,
    "s": lambda args: semihex_s(args),
    "s-printed": lambda args: semihex_s_printed(args),
    "trapezoid": _formula_trapezoid,
    "cored": _formula_cored,
    "two-lobe-ratio": _formula_two_lobe,
    "theorem21-ratio": lambda args: theorem21_ratio(*_fc_args("theorem21-ratio", args)),
    "fc-count": lambda args: fc_count_formula(*_fc_args("fc-count", args)),
    "g": lambda args: g_function(*_fc_args("g", args)),
}


def cmd_formula(args: argparse.Namespace) -> int:
    handler = FORMULAS.get(args.name)
    if handler is None:
        raise InvalidInput(f"unknown formula {args.name!r}; choose from {', '.join(FORMULAS)}")
    print(handler(args.args))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    metrics = init_metrics(f"verify-{args.suite}")
    grid = GridConfig.from_config(
        get_config(),
        max_xyz=args.max_xyz,
        max_lobe=args.max_lobe,
        max_k=args.max_k,
        jobs=args.jobs,
        engine=EngineKind(args.engine),
    )
    result = run_suite(grid, args.suite)
    if args.report:
        Path(args.report).write_text(result.to_json(), encoding="utf-8")
    for report in result.failures():
        print(f"FAIL {report.identity} {report.params}: {report.lhs} != {report.rhs} {report.reason or ''}".rstrip())
    s = result.summary
    print(f"{args.suite}: {s.total} instances, {s.passed} passed, {s.failed} failed, {s.skipped} skipped")
    if args.metrics:
        metrics.write(args.metrics)
    return EXIT_OK if result.ok else EXIT_FAILED


def _bench_regions(args: argparse.Namespace) -> List[Tuple[str, TriRegion]]:
    instances = []
    if args.family == "hexagon":
        for n in range(1, args.max + 1):
            instances.append((f"hexagon {n},{n},{n}", hexagon((n,) * 6)))
        return instances
    spec = FernSpec.parse(args.lobes or "1")
    for n in range(1, args.max + 1):
        try:
            instances.append((f"fc {n},{n},{n};{spec}", cored_layout(n, n, n, spec).region))
        except FernDoesNotFit as e:
            logger.warning(f"Skipping fc {n},{n},{n};{spec}: {e}")
    return instances


def cmd_bench(args: argparse.Namespace) -> int:
    metrics = init_metrics(f"bench-{args.family}")
    engines = [EngineKind(e) for e in (args.engine or ["dp", "kasteleyn"])]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["instance", "engine", "cells", "ms", "digits", "count", "status"])
    mismatched = False
    for name, region in _bench_regions(args):
        rows = []
        for engine in engines:
            started = time.perf_counter()
            try:
                value = count_tilings(region, engine)
            except InstanceTooLarge as e:
                logger.info(f"{name}: {e}")
                rows.append([name, engine.value, len(region), "", "", "", "skipped"])
                continue
            ms = (time.perf_counter() - started) * 1000
            rows.append([name, engine.value, len(region), f"{ms:.1f}", len(str(value)), value, "ok"])
        if len({row[5] for row in rows if row[6] == "ok"}) > 1:
            mismatched = True
            logger.error(f"{name}: engines disagree")
            for row in rows:
                if row[6] == "ok":
                    row[6] = "mismatch"
        writer.writerows(rows)
    _emit(out.getvalue(), args.out)
    if args.metrics:
        metrics.write(args.metrics)
    return EXIT_FAILED if mismatched else EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fernhex",
        description="Exact lozenge-tiling counts of F-cored hexagons",
        epilog=(
            "Examples:\n"
            "  fernhex region --x 1 --y 1 --z 1 --lobes 1,1 --format ascii\n"
            "  fernhex count --hexagon 2,2,2,2,2,2 --engine kasteleyn --cross-check\n"
            "  fernhex formula P 2 2 2\n"
            "  fernhex verify --suite kuo --max-xyz 2 --jobs 4\n"
            "  fernhex bench --family fc --lobes 1,1 --max 4\n"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", help="JSON config file (default configs/default.json)")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level (default from config)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    region = sub.add_parser("region", help="build and print a region")
    _add_source_flags(region)
    region.add_argument("--format", choices=["json", "csv", "ascii", "svg"], default="json")
    region.add_argument("--out", help="output file (default stdout)")
    region.set_defaults(handler=cmd_region)

    count = sub.add_parser("count", help="count lozenge tilings")
    _add_source_flags(count, with_file=True)
    count.add_argument("--engine", choices=ENGINES, default="auto")
    count.add_argument("--cross-check", action="store_true", help="also run a second engine")
    count.add_argument("--cache", action="store_true", help="use the persistent count cache")
    count.set_defaults(handler=cmd_count)

    formula = sub.add_parser("formula", help="evaluate a product formula")
    formula.add_argument("name", help=f"one of {', '.join(FORMULAS)}")
    formula.add_argument("args", nargs="*", type=int, help="integer arguments")
    formula.set_defaults(handler=cmd_formula)

    verify = sub.add_parser("verify", help="run identity suites")
    verify.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    verify.add_argument("--max-xyz", type=_non_negative)
    verify.add_argument("--max-lobe", type=_non_negative)
    verify.add_argument("--max-k", type=_non_negative)
    verify.add_argument("--jobs", type=_positive)
    verify.add_argument("--engine", choices=ENGINES, default="auto")
    verify.add_argument("--report", help="write the JSON report here")
    verify.add_argument("--metrics", help="write Prometheus metrics here")
    verify.set_defaults(handler=cmd_verify)

    bench = sub.add_parser("bench", help="time counting engines")
    bench.add_argument("--family", choices=["hexagon", "fc"], default="hexagon")
    bench.add_argument("--max", type=_positive, default=4, help="largest x = y = z (or a = b = c)")
    bench.add_argument("--lobes", help="fern for the fc family (default 1)")
    bench.add_argument("--engine", action="append", choices=ENGINES, help="repeat for several engines")
    bench.add_argument("--out", help="CSV file (default stdout)")
    bench.add_argument("--metrics", help="write Prometheus metrics here")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        cfg: FernhexConfig = load_config(args.config) if args.config else get_config()
    except InvalidInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    set_config(cfg)
    logging.basicConfig(
        level=args.log_level or cfg.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except InvalidInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except EngineMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except FernhexError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
