"""plotkit command line: `plotkit render <figure-spec.yaml>`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .render import render
from .spec import FigureSpecError, load_figure_spec


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="plotkit")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render a figure spec to SVG/PNG")
    p_render.add_argument("figure_spec", type=Path)
    sub.add_parser("version", help="print version")
    args = parser.parse_args(argv)

    if args.command == "version":
        print(f"plotkit {__version__}")
        return 0
    try:
        out = render(load_figure_spec(args.figure_spec))
    except FigureSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
