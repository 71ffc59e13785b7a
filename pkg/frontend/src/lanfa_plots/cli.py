"""Command line entry point: lanfa-plots --figure N --runs dir... --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, render
from .reader import PlotsError


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lanfa-plots",
        description="Render figures from lanfa run directories.",
    )
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS, help="figure id")
    parser.add_argument("--runs", required=True, nargs="+", help="run directories")
    parser.add_argument("--out", required=True, help="output image path (png/svg)")
    args = parser.parse_args(argv)
    try:
        render(args.figure, args.runs, args.out)
    except PlotsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
