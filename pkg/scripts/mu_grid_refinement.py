"""How the optimal-mu margin settles as the mu grid is refined."""
import argparse
from pathlib import Path

from breakwave.scenario import load
from breakwave.threshold import optimize_mu

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "scenarios" / "tanh-steep.json"))
    args = ap.parse_args()
    sc = load(args.config)
    stats = sc.profile.stats()
    print(f"{'points':>7} {'mu':>12} {'margin':>12} {'bound':>10}")
    for n in (8, 16, 32, 64, 128, 256, 512, 1024):
        rep = optimize_mu(stats, sc.kernel, n)
        bound = f"{rep.blowup_bound:.6f}" if rep.blowup_bound else "-"
        print(f"{n:>7} {rep.mu_used:>12.6f} {rep.margin:>12.6g} {bound:>10}")


if __name__ == "__main__":
    main()
