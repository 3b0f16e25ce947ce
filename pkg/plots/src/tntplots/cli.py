"""render_figs: draw one figure image from a preset's output directory.

Exit codes: 0 success, 1 data or rendering failure, 2 usage error.
"""

import argparse
import sys

from .figures import RENDERERS, render
from .reading import DataError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Render a figure image from simulator preset outputs.")
    parser.add_argument("figure", choices=sorted(RENDERERS))
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the preset's output files")
    parser.add_argument("--out", required=True, help="image file to write")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        path = render(args.figure, args.in_dir, args.out)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
