"""Entry points: one script per preset plus a generic dispatcher.

Every script takes the CSV directory written by ``afcdlcz reproduce`` and an
output directory for the PNG/SVG panels.
"""

from __future__ import annotations

import argparse
import sys

from .data import RenderError
from .render import PRESETS, render_preset


def _run(preset: str, argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog=f"afcdlcz-{preset}",
        description=f"render the {preset} preset CSV bundle to PNG and SVG panels",
    )
    parser.add_argument("csv_dir", help="directory containing the preset CSVs")
    parser.add_argument("out_dir", help="directory for the rendered images")
    args = parser.parse_args(argv)
    try:
        paths = render_preset(preset, args.csv_dir, args.out_dir)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="afcdlcz-figures",
        description="render afcdlcz reproduce-preset CSV bundles to figures",
    )
    parser.add_argument("preset", choices=sorted(PRESETS))
    parser.add_argument("csv_dir")
    parser.add_argument("out_dir")
    args = parser.parse_args(argv)
    return _run(args.preset, [args.csv_dir, args.out_dir])


def main_fig2c(argv=None) -> int:
    return _run("fig2c", argv)


def main_fig3b(argv=None) -> int:
    return _run("fig3b", argv)


def main_fig3c(argv=None) -> int:
    return _run("fig3c", argv)


def main_fig4a(argv=None) -> int:
    return _run("fig4a", argv)


def main_fig4c(argv=None) -> int:
    return _run("fig4c", argv)


if __name__ == "__main__":
    sys.exit(main())
