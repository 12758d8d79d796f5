"""Command line: plot <figure-kind> --in results.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from hubfleet results CSVs",
    )
    parser.add_argument("figure_kind", choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="input_csv", required=True, help="results CSV")
    parser.add_argument("--out", dest="output", required=True, help="image path")
    parser.add_argument(
        "--group-by",
        default=None,
        help="comma-separated grouping columns (default depends on the kind)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    group_by = ()
    if args.group_by:
        group_by = tuple(c.strip() for c in args.group_by.split(",") if c.strip())
    spec = FigureSpec(
        input_csv=args.input_csv,
        figure_kind=args.figure_kind,
        group_by=group_by,
        output=args.output,
    )
    try:
        path = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
