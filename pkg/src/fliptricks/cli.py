"""Command-line interface.

Exit codes: 0 on success, 1 on a domain error (bad curve, failed lift,
degenerate projection, failed verification), 2 on a usage or expression
syntax error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from .errors import FlipTrickError
from .exports import (
    export_frames,
    homotopy_document,
    lift_document,
    projection_document,
)
from .homotopy import NAMED_HOMOTOPIES, verify
from .lifting import SHEET_MARGIN, classify
from .quat import UnitQuaternion, rho
from .stabilize import AxisFrame, WobbleParams, stabilize, wobble_shuvit
from .tricks import TrickSyntaxError, catalog, format_expr, make_flip, parse

GRAMMAR = """\
expression grammar:
  expr    := concat
  concat  := product ("#" product)*
  product := shifted ("*" shifted)*
  shifted := scaled ("!O")?
  scaled  := power ("@" RATIONAL)?
  power   := atom ("^" INTEGER)?
  atom    := "O" | "S" | "K" | "U" | "rev" "(" expr ")" | "(" expr ")"
"""


def _write(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_grid(spec: str) -> tuple[int, int]:
    try:
        s_part, t_part = spec.lower().split("x")
        return int(s_part), int(t_part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 101x101, got {spec!r}") from None


def _flip(expr_src: str):
    return make_flip(parse(expr_src))


def _cmd_tricks(args) -> int:
    for name, expr in catalog():
        cls = classify(make_flip(expr), n_samples=args.n)
        print(f"{name:<18} {format_expr(expr):<14} {cls}")
    return 0


def _cmd_eval(args) -> int:
    r = _flip_or_curve_eval(args.expr, args.t)
    for row in r:
        print(" ".join(f"{x: .17g}" for x in row))
    return 0


def _flip_or_curve_eval(expr_src: str, t: float) -> np.ndarray:
    from .tricks import evaluate

    return evaluate(parse(expr_src), t).m


def _cmd_classify(args) -> int:
    print(classify(_flip(args.expr), n_samples=args.n))
    return 0


def _cmd_lift(args) -> int:
    _write(lift_document(_flip(args.expr), args.n, name=args.expr), args.out)
    return 0


def _cmd_project(args) -> int:
    _write(projection_document(_flip(args.expr), args.n, name=args.expr), args.out)
    return 0


def _cmd_frames(args) -> int:
    _write(export_frames(_flip(args.expr), args.n, fmt=args.format, name=args.expr), args.out)
    return 0


def _cmd_homotopy(args) -> int:
    grid_s, grid_t = args.grid
    h = NAMED_HOMOTOPIES[args.name]()
    _write(homotopy_document(h, grid_s, grid_t, name=args.name), args.out)
    return 0


def _cmd_stabilize(args) -> int:
    grid_s, grid_t = args.grid
    flip = wobble_shuvit(WobbleParams(a=args.a, omega=args.omega))
    frame = AxisFrame.from_axis([0.0, 0.0, -1.0])
    h = stabilize(flip, frame, n_samples=args.n)
    name = f"stabilize(a={args.a}, omega={args.omega})"
    _write(homotopy_document(h, grid_s, grid_t, name=name), args.out)
    return 0


def _cmd_verify(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("s_grid", "t_grid", "quat"):
        if key not in doc:
            raise FlipTrickError(f"homotopy document is missing the {key!r} key")
    ss = np.asarray(doc["s_grid"], dtype=float)
    ts = np.asarray(doc["t_grid"], dtype=float)
    qs = np.asarray(doc["quat"], dtype=float)
    if qs.shape != (len(ss) * len(ts), 4):
        raise FlipTrickError(
            f"quat grid has shape {qs.shape}, expected ({len(ss) * len(ts)}, 4)"
        )
    qs = qs.reshape(len(ss), len(ts), 4)

    ok = True

    def check(label: str, value: float, bound: float) -> None:
        nonlocal ok
        good = value <= bound
        ok = ok and good
        print(f"{'pass' if good else 'FAIL'}  {label}: {value:.3e} (bound {bound:.3e})")

    check("unit norm deviation", float(np.abs(np.linalg.norm(qs, axis=2) - 1.0).max()), 1e-9)
    check("basepoint deviation", float(np.abs(qs[:, 0] - [1, 0, 0, 0]).max()), 1e-9)
    endings = np.stack(
        [rho(UnitQuaternion(*q)).m for q in qs[:, -1]]
    )
    check("landing constancy", float(np.abs(endings - endings[0]).max()), 1e-9)
    steps = np.linalg.norm(np.diff(qs, axis=1), axis=2)
    check("largest lift step", float(steps.max()) if steps.size else 0.0, SHEET_MARGIN)

    name = doc.get("name", "")
    if name in NAMED_HOMOTOPIES:
        h = NAMED_HOMOTOPIES[name]()
        dev = 0.0
        for i, s in enumerate(ss):
            for j, t in enumerate(ts):
                expected = h.map(float(s), float(t)).m
                got = rho(UnitQuaternion(*qs[i, j])).m
                dev = max(dev, float(np.abs(expected - got).max()))
        check(f"grid matches {name}", dev, 1e-9)
        report = verify(h, len(ss) - 1, len(ts) - 1, 1e-9)
        print(report)
        ok = ok and report.passed

    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fliptricks",
        description="flip tricks as rotation curves: evaluate, lift, classify, deform",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tricks = sub.add_parser("tricks", help="catalog operations")
    tricks_sub = p_tricks.add_subparsers(dest="tricks_command", required=True)
    p_list = tricks_sub.add_parser("list", help="list catalog tricks with their classes")
    p_list.add_argument("--n", type=int, default=1024, help="lift samples for classification")
    p_list.set_defaults(func=_cmd_tricks)

    p_eval = sub.add_parser("eval", help="evaluate an expression at a time")
    p_eval.add_argument("expr")
    p_eval.add_argument("--t", type=float, required=True)
    p_eval.set_defaults(func=_cmd_eval)

    p_cls = sub.add_parser("classify", help="homotopy class of an expression")
    p_cls.add_argument("expr")
    p_cls.add_argument("--n", type=int, default=1024)
    p_cls.set_defaults(func=_cmd_classify)

    p_lift = sub.add_parser("lift", help="export the lift of an expression as JSON")
    p_lift.add_argument("expr")
    p_lift.add_argument("--n", type=int, default=1024)
    p_lift.add_argument("--out", default=None)
    p_lift.set_defaults(func=_cmd_lift)

    p_proj = sub.add_parser("project", help="export the sphere projection of a lift as JSON")
    p_proj.add_argument("expr")
    p_proj.add_argument("--n", type=int, default=1024)
    p_proj.add_argument("--out", default=None)
    p_proj.set_defaults(func=_cmd_project)

    p_frames = sub.add_parser("frames", help="export sampled configuration matrices")
    p_frames.add_argument("expr")
    p_frames.add_argument("--n", type=int, default=120)
    p_frames.add_argument("--format", choices=("json", "csv"), default="json")
    p_frames.add_argument("--out", default=None)
    p_frames.set_defaults(func=_cmd_frames)

    p_hom = sub.add_parser("homotopy", help="export a named homotopy as a lift grid")
    p_hom.add_argument("name", choices=sorted(NAMED_HOMOTOPIES))
    p_hom.add_argument("--grid", type=_parse_grid, default=(50, 100), metavar="SxT")
    p_hom.add_argument("--out", default=None)
    p_hom.set_defaults(func=_cmd_homotopy)

    p_stab = sub.add_parser("stabilize", help="stabilize a wobbling shove-it about -k")
    p_stab.add_argument("--a", type=float, required=True, help="wobble amplitude in [0, 1)")
    p_stab.add_argument("--omega", type=float, required=True, help="wobble frequency")
    p_stab.add_argument("--n", type=int, default=2048, help="lift samples")
    p_stab.add_argument("--grid", type=_parse_grid, default=(50, 100), metavar="SxT")
    p_stab.add_argument("--out", default=None)
    p_stab.set_defaults(func=_cmd_stabilize)

    p_ver = sub.add_parser("verify", help="verify an exported homotopy grid")
    p_ver.add_argument("file")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TrickSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(GRAMMAR, file=sys.stderr, end="")
        return 2
    except FlipTrickError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


cli = main

if __name__ == "__main__":
    sys.exit(main())
