"""breakwave command-line front end.

    breakwave threshold --config scenarios/tanh-steep.json
    breakwave simulate  --config scenarios/ce98.json --out runs/ce98 --grid 4096
    breakwave verify    --config scenarios/ramp-theorem.json
    breakwave riccati   --config scenarios/ramp-theorem.json --out runs/ric
    breakwave sweep     --config scenarios/tanh-amplitude-sweep.json --out runs/sweep
    breakwave selftest  --seed 7

Exit codes: 0 ok, 2 config error, 3 runtime/solver error, 4 verification FAIL.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import riccati, scenario as scn, selftest, threshold
from .errors import BreakwaveError, ConfigError
from .solver import HISTORY_COLUMNS, simulate

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_FAIL = 0, 2, 3, 4
VERIFY_SLACK = 0.1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return v


class Output:
    """Writes named artifacts under --out; ``echo`` also sends one to stdout."""

    def __init__(self, out_dir: str | None):
        self.dir = Path(out_dir) if out_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str, echo: bool = False) -> None:
        if self.dir:
            (self.dir / name).write_text(text)
        if echo:
            sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def run_threshold(sc: scn.Scenario) -> dict:
    stats = sc.profile.stats()
    mu = sc.threshold["mu"]
    if mu == "auto":
        report = threshold.optimize_mu(stats, sc.kernel, sc.threshold["grid_points"])
    else:
        report = threshold.check_theorem(stats, sc.kernel, float(mu))
    ce_ok, ce_margin = threshold.ce98_condition(stats, sc.kernel)
    return {
        "scenario": sc.name,
        "mu_mode": "auto" if mu == "auto" else "fixed",
        "grid_points": sc.threshold["grid_points"],
        "profile_stats": _stats_json(stats),
        "report": report.to_json(),
        "m0": report.m0,
        "ce98": {"satisfied": ce_ok, "margin": ce_margin},
        "_report": report,
    }


def _stats_json(stats) -> dict:
    d = dataclasses.asdict(stats)
    d["xi1_candidates"] = list(d["xi1_candidates"])
    d["xi2_candidates"] = list(d["xi2_candidates"])
    return d


def _public(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if not k.startswith("_")}


def cmd_threshold(sc, out: Output) -> int:
    doc = run_threshold(sc)
    out.write("threshold.json", dumps(_public(doc)), echo=True)
    return EXIT_OK


def run_simulate(sc: scn.Scenario):
    return simulate(sc.profile, sc.flux, sc.kernel, sc.horizon, sc.record_every,
                    sc.solver_params())


def simulation_artifacts(sc, result) -> dict[str, str]:
    files = {}
    doc = {"scenario": sc.name, "N": sc.profile.N, "L": sc.profile.L, "seed": sc.seed,
           **result.to_json()}
    files["result.json"] = dumps(doc)
    files["history.csv"] = csv_text(HISTORY_COLUMNS, result.gradient_history.tolist())
    files["plot_m1.csv"] = csv_text(("t", "m1"), result.gradient_history[:, :2].tolist())
    if result.f11_samples:
        keys = ("t", "curve", "x", "u", "ubar", "ubar_x", "ubar_t", "f11_rate")
        files["f11.csv"] = csv_text(keys, ([s[k] for k in keys] for s in result.f11_samples))
    x = result.final_state.u.x
    for t, values in result.snapshots:
        files[f"snapshot_t{t:.6g}.csv"] = csv_text(("x", "u"), zip(x.tolist(), values.tolist()))
    return files


def cmd_simulate(sc, out: Output) -> int:
    result = run_simulate(sc)
    files = simulation_artifacts(sc, result)
    for name, text in files.items():
        out.write(name, text, echo=name == "result.json")
    return EXIT_OK


def verify_table(th: dict, result) -> tuple[str, dict]:
    rep = th["_report"]
    interval = result.breaking_time_interval
    if not rep.satisfied:
        verdict = "NO PREDICTION"
    elif result.breaking_detected and interval[0] <= rep.blowup_bound * (1 + VERIFY_SLACK):
        verdict = "PASS"
    else:
        verdict = "FAIL"

    def show(v):
        return "no prediction" if v is None else f"{v:.6g}"

    sim = ("no breaking" if not result.breaking_detected
           else f"[{interval[0]:.6g}, {interval[1]:.6g}] ({result.detection_signal})")
    rows = [
        ("scenario", th["scenario"]),
        ("condition satisfied", str(rep.satisfied)),
        ("CE98 condition", f"{th['ce98']['satisfied']} (margin {th['ce98']['margin']:.4g})"),
        ("mu", f"{rep.mu_used:.6g}"),
        ("blowup_bound", show(rep.blowup_bound)),
        ("t_star", show(rep.t_star if rep.satisfied else None)),
        ("t_double_star", show(rep.t_double_star if rep.satisfied else None)),
        ("simulated breaking", sim),
        ("simulated horizon", f"{result.final_state.t:.6g}"),
        ("verdict", verdict),
    ]
    width = max(len(k) for k, _ in rows)
    table = "".join(f"{k:<{width}}  {v}\n" for k, v in rows)
    doc = {
        "scenario": th["scenario"], "verdict": verdict, "threshold": th["report"],
        "simulation": result.to_json(),
        "bound_with_slack": (rep.blowup_bound * (1 + VERIFY_SLACK)
                             if rep.blowup_bound is not None else None),
    }
    return table, doc


def cmd_verify(sc, out: Output) -> int:
    th = run_threshold(sc)
    result = run_simulate(sc)
    table, doc = verify_table(th, result)
    out.write("verify.txt", table, echo=True)
    out.write("verify.json", dumps(doc))
    return EXIT_FAIL if doc["verdict"] == "FAIL" else EXIT_OK


def cmd_riccati(sc, out: Output) -> int:
    th = run_threshold(sc)
    rep = th["_report"]
    K0 = sc.kernel.at_zero()
    pair = riccati.RiccatiPair(rep.mu_used, K0, rep.inf_slope, rep.sup_slope)
    pole = riccati.blowup_time(pair.shifted_m0, pair.mu)
    horizon = sc.riccati["horizon"]
    if horizon is None:
        horizon = 1.5 * pole if pole is not None else sc.horizon
    traj = riccati.integrate_pair(pair, sc.riccati["dt"], horizon)
    summary = {
        "scenario": sc.name, "mu": pair.mu, "K0": K0, "m1_0": pair.m1_0, "m2_0": pair.m2_0,
        "m0": pair.shifted_m0, "comparison_pole": pole, "horizon": horizon,
        "dt": sc.riccati["dt"], "blowup": traj.blowup,
        "blowup_interval": list(traj.blowup_interval) if traj.blowup_interval else None,
        "sum_condition": bool(pair.m1_0 + pair.m2_0 <= 2.0 * K0 / pair.mu),
        "samples": int(traj.t.size),
    }
    out.write("riccati.json", dumps(summary), echo=True)
    out.write("riccati.csv", csv_text(("t", "m1", "m2"), riccati.trajectory_csv_rows(traj)))
    return EXIT_OK


def axis_values(ax: dict) -> list:
    if "values" in ax:
        return list(ax["values"])
    return np.linspace(ax["start"], ax["stop"], ax["count"]).tolist()


def _sweep_point(sc, paths, values, with_sim):
    point = sc.with_overrides(dict(zip(paths, values)))
    th = run_threshold(point)
    rep = th["_report"]
    row = list(values) + [rep.satisfied, rep.mu_used, rep.margin, rep.blowup_bound,
                          rep.t_star, th["ce98"]["satisfied"], th["ce98"]["margin"]]
    if with_sim:
        res = run_simulate(point)
        iv = res.breaking_time_interval or (None, None)
        row += [res.breaking_detected, iv[0], iv[1]]
    return row


def thread_cap() -> int:
    env = os.environ.get("BREAKWAVE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"BREAKWAVE_THREADS: expected a positive integer, got {env!r}")
        if n < 1:
            raise ConfigError(f"BREAKWAVE_THREADS: expected a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def cmd_sweep(sc, out: Output, axes_override=None) -> int:
    spec = sc.sweep
    if axes_override:
        spec = {"axes": axes_override, "simulate": bool(spec and spec["simulate"])}
    if not spec:
        raise ConfigError("sweep: scenario has no sweep section and no --axis given")
    paths = [ax["path"] for ax in spec["axes"]]
    grid = list(itertools.product(*(axis_values(ax) for ax in spec["axes"])))
    # surface unknown paths as config errors before fanning out
    sc.with_overrides(dict(zip(paths, grid[0])))
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        rows = list(pool.map(lambda v: _sweep_point(sc, paths, v, spec["simulate"]), grid))
    header = paths + ["satisfied", "mu", "margin", "blowup_bound", "t_star",
                      "ce98_satisfied", "ce98_margin"]
    if spec["simulate"]:
        header += ["breaking_detected", "t_lo", "t_hi"]
    text = csv_text(header, rows)
    out.write("sweep.csv", text, echo=out.dir is None)
    return EXIT_OK


def cmd_selftest(seed: int, out: Output) -> int:
    results = selftest.run_all(seed)
    width = max(len(r.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}\n" for r in results]
    out.write("selftest.txt", "".join(lines), echo=True)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ------------------------------------------------------------------ argument handling

def parse_axis(text: str) -> dict:
    """path=start:stop:count"""
    try:
        path, rng = text.split("=", 1)
        start, stop, count = rng.split(":")
        return {"path": path, "start": float(start), "stop": float(stop), "count": int(count)}
    except ValueError:
        raise ConfigError(f"--axis {text!r}: expected path=start:stop:count") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="breakwave", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("threshold", "simulate", "verify", "riccati", "sweep", "selftest"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=name != "selftest", help="scenario JSON file")
        sp.add_argument("--out", help="output directory (default: stdout only)")
        sp.add_argument("--mu", help="fixed mu (negative float) or 'auto'")
        sp.add_argument("--grid", type=int, help="spatial grid size N (power of two)")
        sp.add_argument("--seed", type=int, help="seed for randomized checks")
        if name == "sweep":
            sp.add_argument("--axis", action="append", help="path=start:stop:count")
    return p


def apply_overrides(sc: scn.Scenario, args) -> scn.Scenario:
    over = {}
    if args.mu is not None:
        if args.mu == "auto":
            over["threshold.mu"] = "auto"
        else:
            try:
                over["threshold.mu"] = float(args.mu)
            except ValueError:
                raise ConfigError(f"--mu: expected a float or 'auto', got {args.mu!r}") from None
    if args.grid is not None:
        over["solver.N"] = args.grid
    if args.seed is not None:
        over["seed"] = args.seed
    if not over:
        return sc
    for path in over:
        section = path.split(".")[0]
        if "." in path and section not in sc.raw:
            sc.raw[section] = {}
    return sc.with_overrides(over)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.out)
    try:
        if args.command == "selftest":
            seed = args.seed if args.seed is not None else 0
            if args.config:
                seed = apply_overrides(scn.load(args.config), args).seed
            return cmd_selftest(seed, out)
        sc = apply_overrides(scn.load(args.config), args)
        if args.command == "threshold":
            return cmd_threshold(sc, out)
        if args.command == "simulate":
            return cmd_simulate(sc, out)
        if args.command == "verify":
            return cmd_verify(sc, out)
        if args.command == "riccati":
            return cmd_riccati(sc, out)
        axes = [parse_axis(a) for a in args.axis] if args.axis else None
        return cmd_sweep(sc, out, axes)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BreakwaveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
