"""Grid refinement of the wave-breaking signal on the ce98 scenario.

For each N: detection interval, peak |m1| at detection and the ratio to the
previous grid.  A captured shock has |m1| ~ osc / h, so the ratio per
doubling sits near 2 and not higher.

    python scripts/refinement_study.py [scenario.json] [--grids 1024 2048 4096]
"""
import argparse
from pathlib import Path

from breakwave.errors import UnderResolvedError
from breakwave.scenario import load
from breakwave.solver import simulate

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "scenarios" / "ce98.json"))
    ap.add_argument("--grids", type=int, nargs="+", default=[1024, 2048, 4096, 8192, 16384])
    args = ap.parse_args()
    base = load(args.config)

    print(f"{'N':>6} {'t_lo':>9} {'t_hi':>9} {'peak|m1|':>10} {'ratio':>6} {'G':>9}")
    prev = None
    for N in args.grids:
        sc = base.with_overrides({"solver.N": N})
        try:
            r = simulate(sc.profile, sc.flux, sc.kernel, sc.horizon, sc.record_every,
                         sc.solver_params())
        except UnderResolvedError:
            print(f"{N:>6}  initial data under-resolved")
            continue
        lo, hi = r.breaking_time_interval or (float("nan"),) * 2
        ratio = r.peak_abs_m1 / prev if prev else float("nan")
        print(f"{N:>6} {lo:>9.4f} {hi:>9.4f} {r.peak_abs_m1:>10.4g} {ratio:>6.2f} "
              f"{r.gradient_threshold:>9.4g}")
        prev = r.peak_abs_m1


if __name__ == "__main__":
    main()
