"""Wave-breaking sufficient condition for the reverted Whitham equation

    u_t + f(u) u_x + K * u_x = 0,    f(u) = 3 sqrt(1 + u) - 2,

together with the Constantin-Escher baseline for the linear-drift equation.

Notation: um, uM are min/max of u0 over the two slope-extremum points,
M = sup|K'| * ||u0||_1, and mu < 0 is a short-time negative upper bound of
-f'(u) along the extremum curves, admissible on [-1.5/sqrt(1+uM), 0).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ThresholdError
from .kernel import Kernel
from .profiles import ProfileStats

ENDPOINT_MARGIN = 1e-3


def mu_lower(uM: float) -> float:
    """Left end of the admissible band, -f'(uM) = -1.5/sqrt(1 + uM)."""
    if uM <= -1:
        raise ThresholdError(f"uM = {uM} must exceed -1")
    return -1.5 / math.sqrt(1.0 + uM)


def band_gap(mu: float, uM: float) -> float:
    """B = mu + 1.5/sqrt(1 + uM); positive strictly inside the band."""
    return mu + 1.5 / math.sqrt(1.0 + uM)


@dataclass(frozen=True)
class ThresholdInputs:
    stats: ProfileStats
    kernel_K0: float
    kernel_deriv_sup: float
    mu: float

    def __post_init__(self):
        um, uM = self.stats.u0_min_at_extrema, self.stats.u0_max_at_extrema
        if um <= -1:
            raise ThresholdError(f"u0 at the slope extrema must exceed -1, got um = {um}")
        lo = mu_lower(uM)
        if not (lo * (1 + 1e-12) <= self.mu < 0):
            raise ThresholdError(f"mu = {self.mu} outside admissible band [{lo}, 0)")


@dataclass(frozen=True)
class ThresholdReport:
    M: float
    kappa: float
    E: float
    M_tilde: float | None
    t_star: float | None
    t_double_star: float | None
    rhs_condition_1: float
    rhs_condition_2: float
    satisfied: bool
    m0: float
    blowup_bound: float | None
    mu_used: float
    inf_slope: float
    sup_slope: float

    @property
    def margin(self) -> float:
        return min(self.rhs_condition_1, self.rhs_condition_2) - self.inf_slope

    def to_json(self) -> dict:
        """Public report schema."""
        return {
            "mu": self.mu_used, "kappa": self.kappa, "E": self.E, "M": self.M,
            "M_tilde": self.M_tilde, "t_star": self.t_star,
            "t_double_star": self.t_double_star, "rhs1": self.rhs_condition_1,
            "rhs2": self.rhs_condition_2, "inf_slope": self.inf_slope,
            "sup_slope": self.sup_slope, "satisfied": self.satisfied,
            "blowup_bound": self.blowup_bound,
        }

    def as_dict(self) -> dict:
        return asdict(self)


def compute_M(kernel: Kernel, stats: ProfileStats) -> float:
    return kernel.deriv_sup() * stats.l1_norm


def compute_kappa(mu: float, um: float, uM: float) -> float:
    """kappa = (4/3 mu sqrt(1+um) + 2 sqrt(1+um)/sqrt(1+uM) + 1)^-1."""
    if um <= -1 or uM <= -1:
        raise ThresholdError(f"need um, uM > -1, got um={um}, uM={uM}")
    if um > uM:
        raise ThresholdError(f"need um <= uM, got um={um}, uM={uM}")
    if mu >= 0:
        raise ThresholdError(f"mu outside admissible band: mu = {mu} must be negative")
    sa = math.sqrt(1.0 + um)
    denom = (4.0 / 3.0) * mu * sa + 2.0 * sa / math.sqrt(1.0 + uM) + 1.0
    if denom <= 0 or mu < mu_lower(uM) * (1 + 1e-12):
        raise ThresholdError(f"mu outside admissible band: mu = {mu}, lower end {mu_lower(uM)}")
    return 1.0 / denom


def compute_E(mu: float, kappa: float, um: float, uM: float, M: float) -> float:
    B = band_gap(mu, uM)
    if mu >= 0:
        raise ThresholdError(f"mu = {mu} must be negative")
    if B <= 0:
        raise ThresholdError("E undefined at endpoint: mu + 1.5/sqrt(1+uM) must be > 0")
    if kappa <= 0 or M < 0:
        raise ThresholdError(f"need kappa > 0 and M >= 0, got kappa={kappa}, M={M}")
    return (1.0 / mu) * (0.75 * M / (kappa * (1.0 + um)) ** 1.5) / B


def compute_times(mu: float, kappa: float, um: float, uM: float, M: float):
    """(M_tilde, t_star, t_double_star).

    t_star is how long mu stays an upper bound of -f'(u) on the extremum
    curves; t_double_star bounds the window where the growth estimate on
    D/Dt(-f'(u)) holds.  With kappa from ``compute_kappa``, t** > t*.
    """
    if M <= 0:
        raise ThresholdError("times undefined; wave cannot break via this bound (M = 0)")
    B = band_gap(mu, uM)
    if B <= 0:
        raise ThresholdError("times undefined at the band endpoint (mu + 1.5/sqrt(1+uM) = 0)")
    A = 1.0 + um
    M_tilde = 0.75 * M / (kappa * A) ** 1.5
    t_star = B / M_tilde
    t_double_star = (A - (0.75 * M / M_tilde) ** (2.0 / 3.0)) / M
    return M_tilde, t_star, t_double_star


def check_theorem(stats: ProfileStats, kernel: Kernel, mu: float) -> ThresholdReport:
    ThresholdInputs(stats, kernel.at_zero(), kernel.deriv_sup(), mu)
    um, uM = stats.u0_min_at_extrema, stats.u0_max_at_extrema
    if band_gap(mu, uM) <= 0:
        raise ThresholdError("mu must lie strictly inside the admissible band")
    K0 = kernel.at_zero()
    M = compute_M(kernel, stats)
    kappa = compute_kappa(mu, um, uM)
    E = compute_E(mu, kappa, um, uM, M)
    rhs1 = 2.0 * K0 / mu - stats.sup_slope
    rhs2 = K0 / mu + E
    m0 = stats.inf_slope - K0 / mu
    if M > 0:
        M_tilde, t_star, t_dstar = compute_times(mu, kappa, um, uM, M)
        satisfied = stats.inf_slope <= min(rhs1, rhs2)
    else:
        # zero data: no breaking predicted
        M_tilde = t_star = t_dstar = None
        satisfied = False
    blowup = 1.0 / (m0 * mu) if m0 < 0 else None
    return ThresholdReport(
        M=M, kappa=kappa, E=E, M_tilde=M_tilde, t_star=t_star, t_double_star=t_dstar,
        rhs_condition_1=rhs1, rhs_condition_2=rhs2, satisfied=bool(satisfied), m0=m0,
        blowup_bound=blowup if satisfied else None, mu_used=mu,
        inf_slope=stats.inf_slope, sup_slope=stats.sup_slope,
    )


def mu_grid(uM: float, grid_points: int = 128, margin: float = ENDPOINT_MARGIN) -> np.ndarray:
    """Uniform grid over the open band, both ends trimmed by ``margin`` of its width."""
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    lo = mu_lower(uM)
    frac = margin + (1.0 - 2.0 * margin) * np.arange(grid_points) / (grid_points - 1)
    return lo - lo * frac


def optimize_mu(stats: ProfileStats, kernel: Kernel, grid_points: int = 128) -> ThresholdReport:
    """Best report over the mu grid (largest min(rhs1, rhs2) - inf_slope).

    Ties go to the lowest grid index.
    """
    best = None
    for mu in mu_grid(stats.u0_max_at_extrema, grid_points):
        rep = check_theorem(stats, kernel, float(mu))
        if best is None or rep.margin > best.margin:
            best = rep
    return best


def ce98_condition(stats: ProfileStats, kernel: Kernel):
    """inf u0' + sup u0' < -2 K(0); returns (satisfied, margin)."""
    margin = -2.0 * kernel.at_zero() - (stats.inf_slope + stats.sup_slope)
    return bool(margin > 0), float(margin)


def lemma_kappa(A: float, B: float) -> float:
    """kappa = (3/(4 sqrt A)) / (B + 3/(4 sqrt A)) for A, B > 0."""
    c = 0.75 / math.sqrt(A)
    return c / (B + c)
