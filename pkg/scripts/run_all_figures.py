#!/usr/bin/env python3
"""Regenerate every figure dataset into out/<preset>/.

Thin driver over the CLI so a full reproduction is one command:

    python3 scripts/run_all_figures.py --out out --threads 4

fig4 sweeps 46 noise values with a nested echo-time optimization and
dominates the runtime; everything else finishes in seconds.
"""

import argparse
import sys
import time

from tntsim.cli import main as tntsim_main
from tntsim.presets import PRESETS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out", help="parent output directory")
    parser.add_argument("--threads", type=int, default=4)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--only", choices=sorted(PRESETS), nargs="*",
                        help="subset of presets to run")
    args = parser.parse_args()

    presets = args.only or sorted(PRESETS)
    for preset in presets:
        t0 = time.time()
        rc = tntsim_main(["fig", preset, "--out", f"{args.out}/{preset}",
                          "--threads", str(args.threads), "--format", args.format])
        if rc != 0:
            print(f"{preset} failed with exit code {rc}", file=sys.stderr)
            return rc
        print(f"{preset} done in {time.time() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
