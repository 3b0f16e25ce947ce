#!/usr/bin/env python3
"""Tabulate the shot-noise-limited detection threshold sigma* versus
preparation time, for each readout strategy.

sigma* is the blur width at which the optimized classical Fisher
information falls to F = N; larger is better.  The asymmetric echo
re-optimizes its readout duration at every noise value, so its column
shows what the extra knob buys over the plain echo.

    python3 scripts/noise_threshold_scan.py --N 100 --threads 4
"""

import argparse
import sys

import numpy as np

from tntsim import (
    HamiltonianSpec,
    ReadoutKind,
    SpinSystem,
    noise_sweep,
)

KINDS = (ReadoutKind.NONE, ReadoutKind.ECHO, ReadoutKind.ASYMMETRIC_ECHO)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--N", type=int, default=100)
    parser.add_argument("--lam", type=float, default=2.0)
    parser.add_argument("--t1", type=float, nargs="*",
                        default=(0.01, 0.027, 0.05, 0.072))
    parser.add_argument("--sigma-max", type=float, default=60.0)
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()

    ham = HamiltonianSpec(SpinSystem(args.N), kind="tnt", lambda_param=args.lam)
    grid = np.round(np.arange(0.5, args.sigma_max + 1e-9, 0.5), 12)

    header = ["chi*t1"] + [f"sigma*_{k.value}" for k in KINDS]
    print("  ".join(f"{h:>18s}" for h in header))
    for t1 in args.t1:
        res = noise_sweep(ham, t1, grid, kinds=KINDS, threads=args.threads)
        row = [f"{t1:>18.4f}"]
        for kind in KINDS:
            star = res.notes.get(f"sigma_star_{kind.value}")
            row.append(f"{star:>18.3f}" if star is not None else f"{'> grid':>18s}")
        print("  ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
