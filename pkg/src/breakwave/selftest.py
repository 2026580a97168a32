"""Quick seeded sanity checks, runnable without a scenario file."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import riccati, threshold
from .flux import RevertedWhithamDrift, WhithamLinear
from .grid import GridFunction, grid_nodes
from .kernel import WhithamExp, convolve
from .profiles import GaussianBump
from .solver import simulate


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def random_admissible(rng: np.random.Generator, n: int):
    """(mu, um, uM, M) with -1 < um <= uM and mu strictly inside its band."""
    um = rng.uniform(-0.9, 5.0, n)
    uM = um + rng.uniform(0.0, 5.0, n)
    lo = -1.5 / np.sqrt(1.0 + uM)
    mu = lo * rng.uniform(1e-6, 1.0 - 1e-6, n)
    M = rng.uniform(1e-3, 10.0, n)
    return mu, um, uM, M


def check_lemma_kappa(rng, n=10_000) -> Check:
    A = rng.uniform(0, 10, n)
    B = rng.uniform(0, 10, n)
    A, B = np.where(A == 0, 10.0, A), np.where(B == 0, 10.0, B)
    kappa = (0.75 / np.sqrt(A)) / (B + 0.75 / np.sqrt(A))
    bad = int(np.sum(~(0.75 / (kappa * A) ** 1.5 > B / (A - A * kappa))))
    return Check("kappa inequality", bad == 0, f"{bad} violations in {n} draws")


def check_time_order(rng, n=10_000) -> Check:
    bad = 0
    for mu, um, uM, M in zip(*random_admissible(rng, n)):
        kappa = threshold.compute_kappa(mu, um, uM)
        _, ts, tss = threshold.compute_times(mu, kappa, um, uM, M)
        bad += not tss > ts
    return Check("t** > t*", bad == 0, f"{bad} violations in {n} draws")


def check_kappa_endpoint(rng, n=100) -> Check:
    uM = rng.uniform(-0.9, 10.0, n)
    err = max(abs(threshold.compute_kappa(threshold.mu_lower(v), v, v) - 1.0) for v in uM)
    return Check("kappa endpoint", err < 1e-12, f"max |kappa - 1| = {err:.2e}")


def check_riccati() -> Check:
    m0, mu = -2.0, -1.0
    pole = riccati.blowup_time(m0, mu)
    pair = riccati.RiccatiPair(mu, 0.0, m0, 1.0)
    errs = []
    for dt in (2e-3, 1e-3):
        tr = riccati.integrate_pair(pair, dt, 0.9 * pole)
        errs.append(np.max(np.abs(tr.m1 - riccati.closed_form(m0, mu, tr.t))))
    ok = errs[0] < 1e-6 and errs[1] < 1e-6 and errs[0] / errs[1] >= 8
    return Check("riccati closed form", ok,
                 f"errors {errs[0]:.2e}, {errs[1]:.2e}, ratio {errs[0] / errs[1]:.1f}")


def check_convolution() -> Check:
    L, N = 20.0, 256
    u = GridFunction(np.exp(-grid_nodes(L, N) ** 2), L)
    k = WhithamExp()
    fast = convolve(k, u, backend="fft").values
    slow = convolve(k, u, backend="direct").values
    d = float(np.max(np.abs(fast - slow)))
    return Check("fft vs direct convolution", d < 1e-10, f"max diff {d:.2e}")


def check_kernel_constants() -> Check:
    k = WhithamExp()
    err = max(abs(k.at_zero() - math.pi / 4), abs(k.deriv_sup() - math.pi**2 / 8),
              abs(k.l1_norm() - 1.0))
    return Check("Whitham kernel constants", err < 1e-15, f"max err {err:.1e}")


def check_mass() -> Check:
    prof = GaussianBump(A=0.05, w=1.0, L=20.0, N=512)
    res = simulate(prof, RevertedWhithamDrift(), WhithamExp(), horizon=1.0, record_every=50)
    ok = res.mass_drift <= 1e-8 and not res.breaking_detected
    return Check("mass conservation", ok, f"drift {res.mass_drift:.1e} over {res.steps} steps")


def check_ce98_baseline() -> Check:
    sat, _ = threshold.ce98_condition(GaussianBump(A=1.0, L=20.0).stats(), WhithamExp())
    return Check("CE98 rejects symmetric bump", not sat, f"satisfied={sat}")


def check_linear_zero() -> Check:
    prof = GaussianBump(A=0.0, L=20.0, N=256)
    res = simulate(prof, WhithamLinear(), WhithamExp(), horizon=0.5)
    ok = not res.breaking_detected and np.all(res.gradient_history[:, 1:3] == 0)
    return Check("rest state stays at rest", bool(ok), f"steps {res.steps}")


def run_all(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    return [
        check_kernel_constants(),
        check_kappa_endpoint(rng),
        check_lemma_kappa(rng),
        check_time_order(rng),
        check_riccati(),
        check_convolution(),
        check_ce98_baseline(),
        check_linear_zero(),
        check_mass(),
    ]
