"""Command line: pyviz <kind> --in <json> --out <file> [--fps N] [--camera az,el]."""

from __future__ import annotations

import argparse
import sys

from .render import RENDERERS, PlotSpec, SchemaError, render


def _camera(text: str) -> tuple[float, float]:
    try:
        az, el = (float(x) for x in text.split(","))
        return az, el
    except ValueError:
        raise argparse.ArgumentTypeError(f"camera must be 'azimuth,elevation', got {text!r}") from None


def _resolution(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
        return w, h
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must be 'WxH', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyviz",
        description="render exported flip-trick JSON as figures and animations",
    )
    parser.add_argument("kind", choices=sorted(RENDERERS))
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, metavar="JSON",
        help="input document; repeat to overlay curves",
    )
    parser.add_argument("--out", required=True, help="output image/animation file")
    parser.add_argument("--fps", type=int, default=30)
    parser.add_argument(
        "--camera", type=_camera, default=(-60.0, 25.0), metavar="AZ,EL",
        help="azimuth,elevation; use --camera=-60,25 for negative azimuths",
    )
    parser.add_argument("--resolution", type=_resolution, default=(800, 800), metavar="WxH")
    parser.add_argument("--title", default="")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    spec = PlotSpec(
        inputs=args.inputs,
        kind=args.kind,
        output=args.out,
        resolution=args.resolution,
        camera=args.camera,
        fps=args.fps,
        title=args.title,
    )
    try:
        render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
