#!/usr/bin/env python3
"""Convergence of the finite chain towards its infinite-cycle cat state.

Scans a geometric grid of cycle counts at the default angle pi/(2L) and
emits L, fidelity-to-limit, survival as CSV.
"""

import argparse
import sys

from cfqsim.states import Qubit
from cfqsim.zeno import convergence_scan, scan_to_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--layers", type=int, default=1, help="stacked mode layers")
    parser.add_argument("--max-exponent", type=int, default=12, help="largest L is 2**this")
    parser.add_argument("--pass-amp", type=float, default=None, help="obstacle pass amplitude")
    parser.add_argument(
        "--readout",
        choices=("after_final_bs", "after_final_obstacle"),
        default="after_final_bs",
    )
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    if args.pass_amp is None:
        obstacle = Qubit.balanced(("pass", "block"))
    else:
        a = args.pass_amp
        obstacle = Qubit(("pass", "block"), a, (1.0 - a * a) ** 0.5)
    grid = [2**k for k in range(args.max_exponent + 1)]
    text = scan_to_csv(convergence_scan(obstacle, args.layers, grid, args.readout))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
