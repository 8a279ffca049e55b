"""
Command-line front end.

Exit codes: 0 success, 1 failed check or library error, 2 usage error.
"""
import argparse
import csv
import io
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from script import config as config_module
from script.averages import Axis, convergence_table, inner_product_floor, phi_estimate
from script.coding import (DomainError, TorusPoint, check_valid, factorization_holds, range_check,
                           window)
from script.documents import (DocumentError, dumps, load_document, partition_document, report_document,
                              substitution_document, substitution_text, tileset_document,
                              tileset_tsv, window_document, window_from_document)
from script.equations import InvalidPatternError, NotCylindricalError, tile_residual
from script.geometry import PartitionError, build_partitions, locate, refine_all, tiles_of_partition
from script.induction import RelabelingNotFound, ReturnTimeExceeded, self_similarity
from script.logger import logger, set_level, setup_logging
from script.quadfield import FieldMismatchError, field, parse, render
from script.render import RenderError, render_svg, svg_to_png
from script.substitution import (RaggedBlockError, find_label_bijection, incidence, printed_n3_substitution,
                                 spectral_check)
from script.tiles import (Corner, LabelError, check_deterministic, chip_tiles, extended_tiles,
                          metallic_tiles, psi, tileset)
from script.version import get_version

LIBRARY_ERRORS = (DomainError, DocumentError, FieldMismatchError, InvalidPatternError, LabelError,
                  NotCylindricalError, PartitionError, RaggedBlockError, RelabelingNotFound, RenderError,
                  ReturnTimeExceeded)


class UsageError(Exception):
    """Arguments are well formed for argparse but meaningless together."""


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metallic-tiler",
                                     description="Metallic mean Wang tiles, their codings and self-similarity")
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="console log level")
    parser.add_argument("--log-file", action="store_true", help="also write a timestamped log file")
    parser.add_argument("--workers", type=int, help="worker count for chunked computations (0 = all CPUs)")
    parser.add_argument("--config", help="path to a JSON configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tiles", help="list a tile set")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--set", dest="kind", choices=["base", "extended", "chip"], default="base")
    p.add_argument("--format", choices=["json", "tsv", "svg", "png"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--samples", type=_positive, default=100, help="random points per sampled check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the report document")
    p.add_argument("--out")

    p = sub.add_parser("window", help="sample the configuration of a torus point")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--x", required=True, help='"p/q" or "p/q+r/s*beta"')
    p.add_argument("--y", required=True)
    p.add_argument("--width", type=_positive, default=15)
    p.add_argument("--height", type=_positive, default=15)
    p.add_argument("--i0", type=int, default=0)
    p.add_argument("--j0", type=int, default=0)
    p.add_argument("--format", choices=["json", "svg", "png"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("average", help="finite-horizon label averages")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--axis", choices=["row", "col", "column"], default="row")
    p.add_argument("--csv", action="store_true", help="convergence table over the configured horizons")

    p = sub.add_parser("partition", help="coding partitions of the torus")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--which", choices=["east", "north", "west", "south", "refined"], default="refined")
    p.add_argument("--format", choices=["json", "svg", "png"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("selfsim", help="self-similarity from the induction pipeline")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "text", "svg"], default="text")
    p.add_argument("--match-paper", "--match-published", dest="match_published", action="store_true",
                   help="compare with the published n=3 table")
    p.add_argument("--spectral", action="store_true", help="check the incidence spectrum")
    p.add_argument("--out")

    p = sub.add_parser("check", help="validate a window document")
    p.add_argument("file")

    p = sub.add_parser("locate", help="bounding box of the points showing a window")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--size", type=_positive, default=5)
    return parser


def _point(n: int, args: argparse.Namespace) -> TorusPoint:
    spec = field(n)
    try:
        return TorusPoint.of(n, parse(args.x, spec), parse(args.y, spec))
    except ValueError as e:
        raise UsageError(f"bad coordinate: {e}") from e


def _emit(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
    else:
        stdout.write(text)


def _emit_figure(svg: str, args: argparse.Namespace, cfg: Dict[str, Any], stdout: TextIO) -> None:
    if args.format == "png":
        if not args.out:
            raise UsageError("--format png needs --out")
        svg_to_png(svg, args.out, int(config_module.setting(cfg, "render.png_density", 96)))
    else:
        _emit(svg, args.out, stdout)


def _style(cfg: Dict[str, Any]) -> Dict[str, Any]:
    return dict(config_module.setting(cfg, "render", {}) or {})


def _workers(args: argparse.Namespace, cfg: Dict[str, Any]) -> int:
    if args.workers is not None:
        return args.workers
    if not config_module.setting(cfg, "parallel.enabled", False):
        return 1
    return int(config_module.setting(cfg, "parallel.max_workers", 0))


def cmd_tiles(args, cfg, stdout) -> int:
    ts = tileset(args.n, args.kind)
    if args.format == "json":
        _emit(dumps(tileset_document(ts)), args.out, stdout)
    elif args.format == "tsv":
        _emit(tileset_tsv(ts), args.out, stdout)
    else:
        _emit_figure(render_svg(ts, style=_style(cfg)), args, cfg, stdout)
    return 0


def _random_points(rng: random.Random, count: int) -> List[Tuple[Fraction, Fraction]]:
    def coordinate() -> Fraction:
        den = rng.randint(2, 997)
        return Fraction(rng.randrange(den), den)
    return [(coordinate(), coordinate()) for _ in range(count)]


def verify_suite(n: int, samples: int = 100, seed: int = 0) -> Dict[str, bool]:
    """Every exact identity the tiles, codings and partitions must satisfy."""
    rng = random.Random(seed)
    chip = chip_tiles(n)
    base = metallic_tiles(n)
    points = _random_points(rng, samples)
    east, north, west, south = build_partitions(n)
    checks: Dict[str, Callable[[], bool]] = {
        "base count": lambda: len(base) == (n + 3) ** 2,
        "chip count": lambda: len(chip) == n * n + 8 * n + 13,
        "chip equals extended": lambda: chip.as_set() == extended_tiles(n).as_set(),
        "tile equations": lambda: all(tile_residual(n, t).is_zero for t in chip),
        "psi recovers left and bottom": lambda: all(
            psi(n, t.right, t.top) == t.left and psi(n, t.top, t.right) == t.bottom for t in chip),
        "SW deterministic": lambda: check_deterministic(chip, Corner.SW).holds,
        "NE deterministic": lambda: check_deterministic(chip, Corner.NE).holds,
        "lambda factorization": lambda: all(factorization_holds(n, x, y) for x, y in points),
        "d-inner product formula": lambda: all(inner_product_floor(n, x, y).holds for x, y in points),
        "partition areas": lambda: all(P.covers_domain() for P in (east, north, west, south)),
        "refined atoms are the base tiles": lambda: tiles_of_partition(n).as_set() == base.as_set(),
        "witness points": lambda: range_check(n),
    }
    results = {}
    for name, check in checks.items():
        try:
            results[name] = bool(check())
        except LIBRARY_ERRORS as e:
            logger.error(f"{name}: {e}")
            results[name] = False
        if not results[name]:
            logger.error(f"check failed: {name}")
    return results


def cmd_verify(args, cfg, stdout) -> int:
    results = verify_suite(args.n, args.samples, args.seed)
    if args.json or args.out:
        doc = report_document("verify", args.n, results)
        _emit(dumps(doc), args.out, stdout)
    if not args.json:
        width = max(len(name) for name in results)
        for name, ok in results.items():
            stdout.write(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}\n")
    return 0 if all(results.values()) else 1


def cmd_window(args, cfg, stdout) -> int:
    p = _point(args.n, args)
    w = window(args.n, p, range(args.i0, args.i0 + args.width), range(args.j0, args.j0 + args.height),
               max_workers=_workers(args, cfg))
    violations = check_valid(w)
    for v in violations:
        logger.error(f"invalid window at {v.position} ({v.direction})")
    if args.format == "json":
        _emit(dumps(window_document(w, p)), args.out, stdout)
    else:
        _emit_figure(render_svg(w, style=_style(cfg)), args, cfg, stdout)
    return 1 if violations else 0


def cmd_average(args, cfg, stdout) -> int:
    p = _point(args.n, args)
    axis = Axis.parse(args.axis)
    target = p.y if axis is Axis.ROW else p.x
    workers = _workers(args, cfg)
    if args.csv:
        horizons = [k for k in config_module.setting(cfg, "averages.horizons", []) if k < args.k] + [args.k]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["k", "value", "target", "error"])
        for row in convergence_table(args.n, p, horizons, axis, workers):
            writer.writerow([row.horizon, f"{float(row.value):.12f}", f"{float(row.target):.12f}",
                             f"{float(row.error):.3e}"])
        stdout.write(buffer.getvalue())
        return 0
    estimate = phi_estimate(args.n, p, args.k, axis, workers)
    error = estimate.error(target)
    tol = config_module.tolerance(cfg)
    stdout.write(f"axis={axis.value} k={args.k} value={estimate.value} (~{float(estimate.value):.12f}) "
                 f"target={render(target)} error={float(error):.3e}\n")
    if not estimate.within(target, tol):
        logger.warning(f"error {float(error):.3e} exceeds tolerance {tol}")
    return 0


def cmd_partition(args, cfg, stdout) -> int:
    if args.which == "refined":
        P = refine_all(args.n)
    else:
        P = getattr(build_partitions(args.n), args.which)
    if args.format == "json":
        _emit(dumps(partition_document(P, args.n)), args.out, stdout)
    else:
        _emit_figure(render_svg(P, args.n, style=_style(cfg)), args, cfg, stdout)
    return 0


def cmd_selfsim(args, cfg, stdout) -> int:
    if args.match_published and args.n != 3:
        raise UsageError("--match-paper compares against the n=3 table only")
    factor = int(config_module.setting(cfg, "induction.return_time_cap_factor", 10))
    result = self_similarity(args.n, factor)
    s = result.substitution
    ok = result.holds
    if args.format == "json":
        _emit(dumps(substitution_document(s, args.n)), args.out, stdout)
    elif args.format == "svg":
        _emit(render_svg(s, args.n, style=_style(cfg)), args.out, stdout)
    else:
        _emit(substitution_text(s), args.out, stdout)
    for report in result.stages:
        logger.info(report.summary())
    if args.spectral:
        spectral = spectral_check(incidence(s), args.n)
        stdout.write(f"spectral: divisible={spectral.divisible} rational roots={spectral.rational_roots} "
                     f"perron={spectral.perron_root:.9f}\n")
        ok = ok and spectral.holds
    if args.match_published:
        bijection = find_label_bijection(s, printed_n3_substitution())
        if bijection is None:
            logger.error("computed substitution does not match the published table")
            return 1
        stdout.write("label bijection (computed -> published):\n")
        for ours, theirs in sorted(bijection.items()):
            stdout.write(f"  {ours} -> {theirs}\n")
    return 0 if ok else 1


def cmd_check(args, cfg, stdout) -> int:
    w = window_from_document(load_document(args.file))
    violations = check_valid(w)
    if not violations:
        stdout.write(f"{args.file}: valid {w.width}x{w.height} window\n")
        return 0
    for v in violations:
        stdout.write(f"{v.position} {v.direction}: {v.expected} != {v.found}\n")
    return 1


def cmd_locate(args, cfg, stdout) -> int:
    p = _point(args.n, args)
    w = window(args.n, p, range(args.size), range(args.size), max_workers=_workers(args, cfg))
    box = locate(args.n, w)
    if box is None:
        logger.error("pattern region is empty")
        return 1
    x0, y0, x1, y1 = box
    stdout.write(f"x in [{render(x0)}, {render(x1)}]  (~[{float(x0):.9f}, {float(x1):.9f}])\n")
    stdout.write(f"y in [{render(y0)}, {render(y1)}]  (~[{float(y0):.9f}, {float(y1):.9f}])\n")
    inside = x0 <= p.x <= x1 and y0 <= p.y <= y1
    if not inside:
        logger.error("generating point lies outside the located box")
    return 0 if inside else 1


COMMANDS = {
    "tiles": cmd_tiles,
    "verify": cmd_verify,
    "window": cmd_window,
    "average": cmd_average,
    "partition": cmd_partition,
    "selfsim": cmd_selfsim,
    "check": cmd_check,
    "locate": cmd_locate,
}


def run(argv: Optional[Sequence[str]] = None, config: Optional[Dict[str, Any]] = None,
        stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.config:
        cfg = config_module.load_config(args.config)
    else:
        cfg = config if config is not None else config_module.load_config()
    if args.log_file:
        setup_logging(args.log_level or config_module.setting(cfg, "logging.level", "INFO"), to_file=True,
                      log_dir=config_module.setting(cfg, "logging.directory", "logs"),
                      max_files=int(config_module.setting(cfg, "logging.max_files", 10)))
    elif args.log_level:
        set_level(args.log_level)

    try:
        return COMMANDS[args.command](args, cfg, stdout)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error(str(e))
        return 2
    except LIBRARY_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return 1
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        return 1
