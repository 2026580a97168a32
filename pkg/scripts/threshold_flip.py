"""Bisect the front amplitude at which the breaking condition first holds."""
import argparse
import math

from breakwave.kernel import WhithamExp
from breakwave.profiles import TanhFront
from breakwave.threshold import optimize_mu
from scipy.optimize import brentq


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--s", type=float, default=20.0)
    ap.add_argument("--w", type=float, default=0.5)
    ap.add_argument("--grid-points", type=int, default=128)
    args = ap.parse_args()
    kernel = WhithamExp(math.pi / 4, math.pi / 2)

    def margin(A):
        p = TanhFront(A=A, s=args.s, w=args.w, L=16.0)
        return optimize_mu(p.stats(), kernel, args.grid_points).margin

    A = brentq(margin, 0.01, 0.5, xtol=1e-15)
    print(f"flip amplitude A = {A!r}  (margin just below {margin(A * (1 - 1e-6)):.3g}, "
          f"just above {margin(A * (1 + 1e-6)):.3g})")


if __name__ == "__main__":
    main()
