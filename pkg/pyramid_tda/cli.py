"""Command line: ``tda barcode|convert|distance|project|plot``.

Exit codes: 0 success, 1 internal error, 2 unreadable input, 3 a
precondition of the computation failed, 4 the request mixes incompatible
barcodes.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections import Counter
from pathlib import Path
from typing import Sequence

from joblib import Parallel, delayed

from .blocks import bottleneck_blocks, lzz_to_blocks
from .config import get_settings
from .errors import (
    DimensionTooHigh,
    FlavorMismatch,
    MissingCoordinates,
    ParseError,
    TDAError,
    UnsupportedConversion,
)
from .io import AnyBarcode, LoadedComplex, barcode_to_file, dump_barcode, flavor_of, load_barcode, load_complex
from .persistence import (
    Flavor,
    GradedBarcode,
    extended_barcode,
    lzz_barcode_graph,
    ordinary_barcode,
    zigzag_barcode,
)
from .plot import render_svg
from .pyramid import ep_to_lzz, lzz_to_ep
from .strip import StripDiagram, bottleneck_strip, ep_barcode_to_strip, lzz_to_strip, strip_to_lzz
from .transform import directions, project_barcodes

logger = logging.getLogger(__name__)

MODES = ("ordinary", "extended", "lzz", "zigzag")
TARGETS = ("lzz", "extended", "blocks", "strip")


def _per_degree(fn, degrees: Sequence[int], n_jobs: int) -> list[GradedBarcode]:
    if n_jobs == 1 or len(degrees) < 2:
        return [fn(p) for p in degrees]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(p) for p in degrees)


def _merge(flavor: Flavor, parts: Sequence[GradedBarcode], critical_values) -> GradedBarcode:
    counts: Counter = Counter()
    for part in parts:
        counts += part.counter()
    return GradedBarcode.build(flavor, counts, critical_values)


def compute_barcode(
    loaded: LoadedComplex,
    mode: str,
    degree: int | None = None,
    perturb: bool = False,
    via_pyramid: bool = False,
    n_jobs: int | None = None,
) -> GradedBarcode:
    """
    Barcode of a loaded complex file in one of the four flavors.

    :param mode: ordinary, extended, lzz or zigzag
    :param degree: a single homological degree; all degrees by default
    :param perturb: break ties between equal vertex values (extended flavors)
    :param via_pyramid: compute levelsets barcodes through the extended barcode
    :param n_jobs: workers for the per-degree loop; TDA_THREADS by default
    """
    n_jobs = n_jobs or get_settings().threads
    K, f = loaded.complex, loaded.function
    top = max(K.dim, 0)
    degrees = [degree] if degree is not None else list(range(top + 1))
    if mode == "ordinary":
        parts = _per_degree(lambda p: ordinary_barcode(K, f, p), degrees, n_jobs)
        return _merge(Flavor.ORDINARY, parts, f.critical_values())
    if mode == "extended":
        parts = _per_degree(lambda p: extended_barcode(K, f, p, perturb=perturb), degrees, n_jobs)
        return _merge(Flavor.EXTENDED, parts, tuple(f(v) for v in f.vertex_order()))
    if mode == "lzz":
        if via_pyramid:
            every = range(top + 2)
            ext = _merge(
                Flavor.EXTENDED,
                _per_degree(lambda p: extended_barcode(K, f, p, perturb=perturb), list(every), n_jobs),
                tuple(f(v) for v in f.vertex_order()),
            )
            lzz = ep_to_lzz(ext)
            return lzz if degree is None else lzz.in_degree(degree)
        if K.dim > 1:
            raise DimensionTooHigh(f"levelsets barcodes of a {K.dim}-dimensional complex need --via-pyramid")
        parts = _per_degree(lambda p: lzz_barcode_graph(K, f, p), degrees, n_jobs)
        return _merge(Flavor.LZZ, parts, f.critical_values())
    if mode == "zigzag":
        if loaded.zigzag is None:
            raise ParseError("zigzag mode needs a 'zigzag' section in the complex file")
        zz = loaded.zigzag
        top = max((s.ambient.dim for s in zz.spaces), default=0)
        degrees = [degree] if degree is not None else list(range(max(top, 0) + 1))
        return _merge(Flavor.ZIGZAG, _per_degree(lambda p: zigzag_barcode(zz, p), degrees, n_jobs), ())
    raise UnsupportedConversion(f"unknown mode {mode!r}")


def convert_barcode(bc: AnyBarcode, to: str) -> AnyBarcode:
    source = flavor_of(bc)
    if source == to:
        return bc
    if isinstance(bc, StripDiagram):
        lzz = strip_to_lzz(bc)
        if to == "lzz":
            return lzz
        if to == "extended":
            return lzz_to_ep(lzz)
        if to == "blocks":
            return lzz_to_blocks(lzz)
    elif isinstance(bc, GradedBarcode) and source in ("lzz", "extended"):
        lzz = bc if source == "lzz" else ep_to_lzz(bc)
        if to == "lzz":
            return lzz
        if to == "extended":
            return lzz_to_ep(lzz)
        if to == "blocks":
            return lzz_to_blocks(lzz)
        if to == "strip":
            return ep_barcode_to_strip(bc) if source == "extended" else lzz_to_strip(bc)
    raise UnsupportedConversion(f"cannot convert a {source} barcode to {to}")


def barcode_distance(a: AnyBarcode, b: AnyBarcode, kind: str, degree: int | None = None) -> float:
    if flavor_of(a) != flavor_of(b):
        raise FlavorMismatch(f"cannot compare a {flavor_of(a)} barcode with a {flavor_of(b)} barcode")
    if kind == "blocks":
        return bottleneck_blocks(convert_barcode(a, "blocks"), convert_barcode(b, "blocks"), degree)
    if kind == "strip":
        return bottleneck_strip(convert_barcode(a, "strip"), convert_barcode(b, "strip"))
    raise UnsupportedConversion(f"unknown distance kind {kind!r}")


def format_number(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def parse_directions(text: str, dim: int) -> list[tuple[float, ...]]:
    """Either a count ("8") or explicit vectors ("1,0;0,1")."""
    text = text.strip()
    try:
        if ";" not in text and "," not in text:
            return directions(int(text), dim)
        return [tuple(float(c) for c in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise ParseError(f"cannot read directions {text!r}") from None


def project_document(loaded: LoadedComplex, direction_text: str, perturb: bool = True, n_jobs: int | None = None) -> str:
    if loaded.coordinates is None:
        raise MissingCoordinates("projection needs coordinates on every vertex")
    dim = len(next(iter(loaded.coordinates.values()), ()))
    dirs = parse_directions(direction_text, dim)
    results = project_barcodes(loaded.complex, loaded.coordinates, dirs, perturb=perturb, n_jobs=n_jobs)
    doc = {
        "projections": [
            {"direction": list(u), "barcode": barcode_to_file(bc).model_dump(mode="json", by_alias=True, exclude_none=True)}
            for u, bc in results
        ]
    }
    return json.dumps(doc, indent=2) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tda", description="Barcodes of levelsets, extended and zigzag persistence")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level on stderr")
    parser.add_argument("--threads", type=int, default=None, help="worker count (default: TDA_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("barcode", help="compute a barcode from a complex file")
    p.add_argument("input", help="complex JSON file, '-' for standard input")
    p.add_argument("--mode", choices=MODES, default="extended")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--perturb", action="store_true", help="break ties between equal vertex values")
    p.add_argument("--via-pyramid", action="store_true", help="levelsets barcode through the extended barcode")
    p.add_argument("--out", default=None)

    p = sub.add_parser("convert", help="convert a barcode file to another flavor")
    p.add_argument("input")
    p.add_argument("--to", choices=TARGETS, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("distance", help="bottleneck distance between two barcode files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--kind", choices=("blocks", "strip"), default="blocks")
    p.add_argument("--degree", type=int, default=None)

    p = sub.add_parser("project", help="extended barcodes of directional height functions")
    p.add_argument("input")
    p.add_argument("--directions", default="8", help="a count, or vectors like '1,0;0,1'")
    p.add_argument("--out", default=None)

    p = sub.add_parser("plot", help="render a barcode file as SVG")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    return parser


def run(args: argparse.Namespace) -> None:
    n_jobs = args.threads
    if args.command == "barcode":
        loaded = load_complex(_read(args.input))
        bc = compute_barcode(loaded, args.mode, args.degree, args.perturb, args.via_pyramid, n_jobs)
        _emit(dump_barcode(bc), args.out)
    elif args.command == "convert":
        _emit(dump_barcode(convert_barcode(load_barcode(_read(args.input)), args.to)), args.out)
    elif args.command == "distance":
        a, b = load_barcode(_read(args.first)), load_barcode(_read(args.second))
        print(format_number(barcode_distance(a, b, args.kind, args.degree)))
    elif args.command == "project":
        _emit(project_document(load_complex(_read(args.input)), args.directions, n_jobs=n_jobs), args.out)
    elif args.command == "plot":
        _emit(render_svg(load_barcode(_read(args.input))), args.out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else get_settings().log_level.upper()
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        run(args)
    except TDAError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except Exception:
        logger.exception("unexpected failure")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
