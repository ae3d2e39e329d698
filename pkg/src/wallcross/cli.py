"""Command-line front end: ``wallcross walls|sod|plot|window|graded``.

Exit codes: 0 success, 1 invalid input, 2 degenerate segment.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import Sequence

from .exact import format_fraction
from .graded import (
    ModuleFormatError,
    check_valid,
    koszul_tor,
    load_module,
    module_to_json,
    restrict_to_fixed,
    truncate_ge,
    weights_concentrated_in,
)
from .lattice import DivisorClass, LatticeError, load_surface
from .plot import PlotSpec, render_svg
from .selftest import run_selftest
from .sod import render_sod, sod_chain, wall_numerology
from .walls import DegenerateSegment, WallError, WallSpec, enumerate_walls, group_and_sort
from .windows import StratumWeights, WeightError, classify_crossing, peel_window, weight_series

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _interval(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected lo,hi, got {text!r}")
    return vals[0], vals[1]


def _cls(v: Sequence[int]) -> str:
    return "(" + ",".join(map(str, v)) + ")"


# -- walls / sod ----------------------------------------------------------

def _segment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--surface", required=True, help="preset (p2, p1xp1, hirzebruch:n) or surface JSON file")
    p.add_argument("--c1", required=True, type=_int_list)
    p.add_argument("--c2", required=True, type=int)
    p.add_argument("--from", dest="l_minus", required=True, type=_int_list, help="endpoint L-")
    p.add_argument("--to", dest="l_plus", required=True, type=_int_list, help="endpoint L+")


def _wall_spec(args) -> WallSpec:
    s = load_surface(args.surface)
    return WallSpec(s, DivisorClass(args.c1), args.c2, DivisorClass(args.l_minus),
                    DivisorClass(args.l_plus))


WALL_COLUMNS = ("xi", "t*", "xi^2", "l", "mu", "F", "r-", "r+")


def cmd_walls(args) -> int:
    spec = _wall_spec(args)
    rows = []
    for r in enumerate_walls(spec):
        num = wall_numerology(spec.surface, spec.c1, spec.c2, r.xi, spec.l_plus)
        rows.append((r, num))
    if args.json:
        out = [
            dict(r.to_json(), numerology=num.to_json())
            for r, num in rows
        ]
        print(json.dumps(out, indent=2, sort_keys=True))
        return EXIT_OK
    table = [WALL_COLUMNS] + [
        (_cls(r.xi), format_fraction(r.t_star), str(r.xi_sq), str(num.l_xi), str(num.mu_xi),
         _cls(num.F), str(num.r_minus), str(num.r_plus))
        for r, num in rows
    ]
    widths = [max(len(row[k]) for row in table) for k in range(len(WALL_COLUMNS))]
    for row in table:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return EXIT_OK


def cmd_sod(args) -> int:
    spec = _wall_spec(args)
    groups = group_and_sort(enumerate_walls(spec))
    chain = sod_chain(spec.surface, spec.c1, spec.c2, groups, spec.l_minus, spec.l_plus)
    sys.stdout.write(render_sod(chain, args.format) + ("\n" if args.format == "json" else ""))
    return EXIT_OK


def cmd_plot(args) -> int:
    spec = _wall_spec(args)
    corners = None
    if args.corners:
        vals = _int_list(args.corners)
        if len(vals) != 4:
            raise InputError("--corners expects a1,b1,a2,b2")
        corners = (DivisorClass(vals[:2]), DivisorClass(vals[2:]))
    svg = render_svg(PlotSpec(spec.surface, spec.c1, spec.c2, spec.l_minus, spec.l_plus,
                              corners, args.size))
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        Path(args.out).write_text(svg)
    return EXIT_OK


# -- window ---------------------------------------------------------------

def cmd_window(args) -> int:
    minus = StratumWeights(tuple(args.conormal_minus), tuple(args.fiber_minus))
    plus = StratumWeights(tuple(args.conormal_plus), tuple(args.fiber_plus))
    report = classify_crossing(minus, plus, args.d)
    out = report.to_json()
    # the wider window peels down to the narrower one
    t_small, t_big = sorted((report.t_minus, report.t_plus))
    if t_small < t_big and t_big < 0:
        peeled, core = peel_window(t_big, (args.d, args.d - t_small - 1))
        out["peeled"] = {"weights": peeled, "core": list(core)}
    if args.series_order is not None:
        out["series"] = {
            side: {str(k): v for k, v in sorted(weight_series(w, args.series_order).items())}
            for side, w in (("minus", minus), ("plus", plus))
        }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


# -- graded ---------------------------------------------------------------

def _resolve_seed(seed: int) -> int:
    env = os.environ.get("WALLCROSS_SEED")
    if env is None or env.strip() == "":
        return seed
    try:
        return int(env)
    except ValueError:
        raise InputError(f"WALLCROSS_SEED must be an integer, got {env!r}") from None


def cmd_graded(args) -> int:
    if args.selftest:
        seed = _resolve_seed(args.seed)
        if args.iters < 1:
            raise InputError("--iters must be positive")
        start = time.perf_counter()
        report = run_selftest(seed, args.iters)
        sys.stdout.write(report.render())
        print(f"elapsed={time.perf_counter() - start:.1f}s", file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_INPUT
    if not args.module:
        raise InputError("graded needs --module FILE or --selftest")
    m = load_module(args.module)
    check_valid(m)
    out: dict = {}
    if args.truncate is not None:
        m = truncate_ge(m, args.truncate)
        out["module"] = module_to_json(m)
    if args.tor:
        out["tor"] = koszul_tor(m).to_json()
    if args.restrict:
        out["restrict_to_fixed"] = {str(w): d for w, d in restrict_to_fixed(m).items()}
    if args.concentrated is not None:
        verdict = weights_concentrated_in(m, args.concentrated)
        out["concentrated"] = {"interval": list(args.concentrated),
                               "verdict": "unknown" if verdict is None else verdict}
    if not out:
        out["module"] = module_to_json(m)
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallcross", description="Wall crossing numerology for surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("walls", help="walls crossed by a segment of polarizations")
    _segment_args(w)
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_walls)

    s = sub.add_parser("sod", help="semi-orthogonal decompositions along the segment")
    _segment_args(s)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_sod)

    pl = sub.add_parser("plot", help="SVG chamber diagram (rank 2)")
    _segment_args(pl)
    pl.add_argument("--out", required=True, help="output path, or - for stdout")
    pl.add_argument("--corners", help="boundary rays a1,b1,a2,b2 (default: nef cone of the preset)")
    pl.add_argument("--size", type=int, default=400)
    pl.set_defaults(func=cmd_plot)

    wi = sub.add_parser("window", help="window arithmetic for an elementary crossing")
    wi.add_argument("--conormal-minus", required=True, type=_int_list)
    wi.add_argument("--conormal-plus", required=True, type=_int_list)
    wi.add_argument("--fiber-minus", type=_int_list, default=[])
    wi.add_argument("--fiber-plus", type=_int_list, default=[])
    wi.add_argument("--d", type=int, default=0)
    wi.add_argument("--series-order", type=int)
    wi.set_defaults(func=cmd_window)

    g = sub.add_parser("graded", help="truncated graded modules and the property suite")
    g.add_argument("--module", help="module JSON file")
    g.add_argument("--truncate", type=int, metavar="A")
    g.add_argument("--tor", action="store_true")
    g.add_argument("--restrict", action="store_true", help="dimensions of the restriction to the fixed locus")
    g.add_argument("--concentrated", type=_interval, metavar="LO,HI")
    g.add_argument("--selftest", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--iters", type=int, default=1000)
    g.set_defaults(func=cmd_graded)
    return p


_NEG_VALUE = re.compile(r"^-\d")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """``--flag -1,-2`` -> ``--flag=-1,-2`` so argparse does not read an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except DegenerateSegment as e:
        print(f"error: degenerate segment: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ModuleFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (LatticeError, WallError, WeightError, InputError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
