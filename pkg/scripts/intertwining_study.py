#!/usr/bin/env python3
"""Two-path discrete intertwining study for the contact model with K = z.

Evolves alpha0 = (0, -cos x sin y sin z, -1) under contact-momentum, maps
through the discretized density formula at each output time, and compares
against directly evolving L0 = 2 + sin x sin y sin z under contact-density.

Reports the global max-norm gap and the gap away from the x-seam bands.
The global number does not converge: the bare Darboux coefficient x is
aperiodic on the torus, so both discretizations develop an O(1) band at
the x-seam whose mismatch is resolution independent; the interior gap
shows the two paths agreeing at scheme accuracy.
"""

import argparse

from liftlab.sim import discrete_intertwining_error

ALPHA0 = ("0", "-cos(x)*sin(y)*sin(z)", "-1")
L0 = "2 + sin(x)*sin(y)*sin(z)"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-end", type=float, default=0.1)
    ap.add_argument("--ns", type=int, nargs="+", default=[16, 32, 64])
    args = ap.parse_args()
    print(f"t_end = {args.t_end}; alpha0 = {ALPHA0}; L0 = {L0!r}; K = z")
    print(f"{'n':>4} {'dt':>9} {'global gap':>12} {'interior gap':>13}")
    for n in args.ns:
        dt = 5e-4 * (64 / n)
        steps = round(args.t_end / dt)
        gap, interior = discrete_intertwining_error(
            "z", ALPHA0, L0, n=n, dt=dt, steps=steps,
            cadence=max(1, steps // 10))
        print(f"{n:>4} {dt:>9.2e} {gap:>12.4e} {interior:>13.4e}")


if __name__ == "__main__":
    main()
