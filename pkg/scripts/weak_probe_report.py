#!/usr/bin/env python3
"""Quadrature probes of the printed contact Hamiltonian operators.

All probe data is windowed in x by ((1 - cos x)/2)^4 so integration-by-
parts boundary terms at the x-seam vanish; with the window in place a
residual above the tolerance is an operator-level discrepancy, not a
quadrature artifact.  Residuals are reported, never asserted.
"""

import argparse

from liftlab.verify import suite_operators_weak


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--probe-n", type=int, default=48)
    args = ap.parse_args()
    report = suite_operators_weak(args.trials, degree=3, seed=args.seed,
                                  probe_n=args.probe_n)
    print(report.render())


if __name__ == "__main__":
    main()
