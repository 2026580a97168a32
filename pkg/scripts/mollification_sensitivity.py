"""Sensitivity of sup|K'|, the threshold and the sampled F11 rate to the mollifier width.

Box kernel on the Arrhenius traffic flux and the Keller-Segel derivative
kernel; eps is swept over a decade around the default h-free choice.
"""
import numpy as np

from breakwave.flux import KellerSegelLogistic, TrafficArrhenius
from breakwave.kernel import KellerSegelDeriv, LookAheadBox
from breakwave.profiles import GaussianBump
from breakwave.solver import SolverParams, simulate

EPS = (0.02, 0.05, 0.1, 0.2)


def run(model, kernel, profile, horizon):
    params = SolverParams(stop_on_breaking=False)
    r = simulate(profile, model, kernel, horizon, 5, params)
    rates = np.array([s["f11_rate"] for s in r.f11_samples])
    return r, rates.min() if rates.size else float("nan")


def main():
    prof = GaussianBump(A=0.8, L=16.0, N=2048)
    print("Keller-Segel, u0 = 0.8 exp(-x^2)")
    print(f"{'eps':>6} {'sup|K`|':>9} {'min rate':>9} {'breaks':>7} {'mass drift':>11}")
    for eps in EPS:
        k = KellerSegelDeriv(eps=eps)
        r, lo = run(KellerSegelLogistic(), k, prof, 2.0)
        print(f"{eps:>6} {k.deriv_sup():>9.4g} {lo:>9.4f} {str(r.breaking_detected):>7} "
              f"{r.mass_drift:>11.2e}")

    prof = GaussianBump(A=0.9, w=2.0, x0=-3.0, L=20.0, N=2048)
    print("\nlook-ahead box (K0 = 1, gamma = 1), traffic")
    print(f"{'eps':>6} {'sup|K`|':>9} {'min u':>8} {'max u':>8} {'breaks':>7}")
    for frac in EPS:
        k = LookAheadBox(1.0, 1.0).mollified(frac)
        r, _ = run(TrafficArrhenius(), k, prof, 4.0)
        print(f"{k.eps:>6.3g} {k.deriv_sup():>9.4g} {r.min_u_reached:>8.4f} "
              f"{r.max_u_reached:>8.4f} {str(r.breaking_detected):>7}")


if __name__ == "__main__":
    main()
