"""Finite-volume solver for u_t + (F(u, K*u))_x = 0 on a periodic grid.

Local Lax-Friedrichs fluxes on MUSCL/minmod interface states, ubar taken
at cell centres by convolution and averaged to interfaces, SSP-RK3 in time.
The update telescopes, so the discrete mass h*sum(u) is conserved to
round-off.  Breaking is declared from the steepest negative slope m1:

  (a) m1 < -G, G = min(G_max, theta * osc(u) / h): the front is resolved by
      fewer than ~1/theta cells, the most a fixed grid can show, or
  (b) the CFL step drops below dt_min.

Grids cannot blow up, so breaking is only ever reported as the interval of
the step in which a signal fired; refinement studies supply the evidence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryContaminationError, CFLError, DomainError, UnderResolvedError
from .flux import FluxModel, f11_rate
from .grid import GridFunction, centered_diff, periodic_interp
from .kernel import Kernel, cached_convolver
from .profiles import Profile

HISTORY_COLUMNS = ("t", "m1", "m2", "xi1", "xi2")


@dataclass
class SolverParams:
    cfl: float = 0.4
    # None -> 1e3 * max(1, |m1(0)|)
    G_max: float | None = None
    # captured LLF/MUSCL shocks saturate near 0.22 * osc / h
    theta: float = 0.15
    dt_min: float = 1e-10
    boundary_tol: float | None = 1e-8
    domain_margin: float = 1e-6
    reconstruction: str = "muscl"
    max_steps: int = 10_000_000
    snapshot_times: tuple = ()
    stop_on_breaking: bool = True
    track_f11: bool = True


@dataclass
class SimState:
    u: GridFunction
    t: float = 0.0
    step_count: int = 0


@dataclass(frozen=True)
class GradientExtrema:
    m1: float
    m2: float
    xi1: float
    xi2: float
    ambiguous: bool = False


@dataclass
class SimResult:
    breaking_detected: bool
    breaking_time_interval: tuple[float, float] | None
    detection_signal: str | None
    gradient_history: np.ndarray
    mass_drift: float
    min_u_reached: float
    max_u_reached: float
    f11_samples: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    final_state: SimState | None = None
    gradient_threshold: float | None = None
    initial_mass: float = 0.0

    @property
    def steps(self) -> int:
        return self.final_state.step_count if self.final_state else 0

    @property
    def peak_abs_m1(self) -> float:
        return float(np.max(np.abs(self.gradient_history[:, 1])))

    def to_json(self) -> dict:
        return {
            "breaking_detected": self.breaking_detected,
            "breaking_time_interval": (list(self.breaking_time_interval)
                                       if self.breaking_time_interval else None),
            "detection_signal": self.detection_signal,
            "mass_drift": self.mass_drift,
            "min_u_reached": self.min_u_reached,
            "max_u_reached": self.max_u_reached,
            "final_time": self.final_state.t if self.final_state else None,
            "steps": self.steps,
            "gradient_threshold": self.gradient_threshold,
            "peak_abs_m1": self.peak_abs_m1,
            "records": int(self.gradient_history.shape[0]),
            "f11_samples": len(self.f11_samples),
        }


def minmod(a, b):
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


class Discretization:
    """Semi-discrete operator  du/dt = -(Fhat_{j+1/2} - Fhat_{j-1/2}) / h."""

    def __init__(self, model: FluxModel, kernel: Kernel, L: float, N: int,
                 reconstruction: str = "muscl", domain_margin: float = 1e-6):
        if reconstruction not in ("muscl", "constant"):
            raise ValueError(f"unknown reconstruction {reconstruction!r}")
        self.model, self.kernel = model, kernel
        self.L, self.N, self.h = L, N, 2.0 * L / N
        self.conv = cached_convolver(kernel, L, N, True, "fft")
        self.reconstruction = reconstruction
        self.domain_margin = domain_margin
        self.kernel_mass = kernel.l1_norm()
        self.t = 0.0

    def check_domain(self, u: np.ndarray) -> None:
        lower = getattr(self.model, "lower", None)
        if lower is None:
            return
        j = int(np.argmin(u))
        if u[j] <= lower + self.domain_margin:
            x = -self.L + j * self.h
            raise DomainError(
                f"solution left drift domain: u = {u[j]:.6g} at x = {x:.6g}, t = {self.t:.6g}",
                u=float(u[j]), x=x, t=self.t,
            )

    def ubar(self, u: np.ndarray) -> np.ndarray:
        return self.conv(u)

    def interface_states(self, u):
        if self.reconstruction == "constant":
            return u, np.roll(u, -1)
        fwd = np.roll(u, -1) - u
        slope = minmod(np.roll(fwd, 1), fwd)
        return u + 0.5 * slope, np.roll(u - 0.5 * slope, -1)

    def rhs(self, u: np.ndarray) -> np.ndarray:
        self.check_domain(u)
        ub = self.conv(u)
        ub_face = 0.5 * (ub + np.roll(ub, -1))
        uL, uR = self.interface_states(u)
        FL, FR = self.model.F(uL, ub_face), self.model.F(uR, ub_face)
        alpha = np.maximum(np.abs(self.model.F1(uL, ub_face)),
                           np.abs(self.model.F1(uR, ub_face)))
        flux = 0.5 * (FL + FR) - 0.5 * alpha * (uR - uL)
        return -(flux - np.roll(flux, 1)) / self.h

    def max_speed(self, u: np.ndarray) -> float:
        ub = self.conv(u)
        p = self.model.partials(u, ub)
        return float(max(np.max(np.abs(p.F1)), np.max(np.abs(p.F2)) * self.kernel_mass))

    def stable_dt(self, u: np.ndarray, cfl: float) -> float:
        self.check_domain(u)
        speed = self.max_speed(u)
        return np.inf if speed == 0 else cfl * self.h / speed

    def ssprk3(self, u: np.ndarray, dt: float) -> np.ndarray:
        u1 = u + dt * self.rhs(u)
        u2 = 0.75 * u + 0.25 * (u1 + dt * self.rhs(u1))
        return u / 3.0 + (2.0 / 3.0) * (u2 + dt * self.rhs(u2))


def step(state: SimState, model: FluxModel, kernel: Kernel, dt: float,
         params: SolverParams | None = None) -> SimState:
    """One SSP-RK3 step; raises CFLError if dt exceeds the stable step."""
    params = params or SolverParams()
    disc = Discretization(model, kernel, state.u.L, state.u.N,
                          params.reconstruction, params.domain_margin)
    disc.t = state.t
    limit = disc.stable_dt(state.u.values, params.cfl)
    if dt <= 0 or dt > limit * (1 + 1e-12):
        raise CFLError(f"dt = {dt:.6g} violates CFL limit {limit:.6g} (C = {params.cfl})")
    u_new = disc.ssprk3(state.u.values, dt)
    return SimState(state.u.with_values(u_new), state.t + dt, state.step_count + 1)


def _parabolic_peak(d: np.ndarray, i: int):
    """Vertex offset (in cells) and value of the parabola through d[i-1:i+2]."""
    y0, y1, y2 = d[i - 1], d[i], d[(i + 1) % d.size]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return 0.0, y1
    p = 0.5 * (y0 - y2) / denom
    return p, y1 - 0.25 * (y0 - y2) * p


def gradient_extrema(u) -> GradientExtrema:
    """Min/max of the centered-difference slope with 3-point parabolic refinement."""
    if isinstance(u, SimState):
        u = u.u
    d = centered_diff(u.values, u.h)
    x = u.x
    scale = max(1.0, float(np.max(np.abs(d))))
    if np.ptp(d) <= 1e-14 * scale:
        return GradientExtrema(float(d[0]), float(d[0]), float(x[0]), float(x[0]), True)

    def refine(values, sign):
        i = int(np.argmax(sign * values))  # first occurrence == leftmost
        p, v = _parabolic_peak(sign * values, i)
        xi = x[i] + p * u.h
        xi = (xi + u.L) % (2.0 * u.L) - u.L
        ties = np.flatnonzero(sign * values >= sign * values[i] - 1e-12 * scale)
        split = ties.size > 1 and np.any(np.diff(ties) > 1) and not (
            ties[0] == 0 and ties[-1] == values.size - 1 and ties.size == 2)
        return sign * v, xi, split

    m1, xi1, amb1 = refine(d, -1.0)
    m2, xi2, amb2 = refine(d, 1.0)
    return GradientExtrema(float(m1), float(m2), float(xi1), float(xi2), bool(amb1 or amb2))


def ubar_t(state: SimState, model: FluxModel, kernel: Kernel,
           params: SolverParams | None = None) -> GridFunction:
    """ubar_t = K * u_t with u_t the semi-discrete flux divergence."""
    params = params or SolverParams()
    disc = Discretization(model, kernel, state.u.L, state.u.N,
                          params.reconstruction, params.domain_margin)
    return state.u.with_values(disc.conv(disc.rhs(state.u.values)))


def _f11_samples(disc: Discretization, u: np.ndarray, t: float, ext: GradientExtrema):
    ub = disc.conv(u)
    ubx = centered_diff(ub, disc.h)
    ubt = disc.conv(disc.rhs(u))
    out = []
    for curve, xi in ((1, ext.xi1), (2, ext.xi2)):
        vals = [periodic_interp(arr, disc.L, xi) for arr in (u, ub, ubx, ubt)]
        f11dot = f11_rate(disc.model, *vals)
        out.append({"t": t, "curve": curve, "x": xi, "u": vals[0], "ubar": vals[1],
                    "ubar_x": vals[2], "ubar_t": vals[3], "f11_rate": float(f11dot)})
    return out


def _has_third(model: FluxModel) -> bool:
    try:
        model.third(0.0, 0.0)
    except NotImplementedError:
        return False
    return True


def simulate(profile: Profile, model: FluxModel, kernel: Kernel, horizon: float,
             record_every: int = 10, params: SolverParams | None = None) -> SimResult:
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    params = params or SolverParams()
    u0 = profile.sample()
    disc = Discretization(model, kernel, u0.L, u0.N, params.reconstruction,
                          params.domain_margin)
    h = disc.h
    u = u0.values.copy()
    disc.check_domain(u)
    mass0 = h * np.sum(u)

    ext = gradient_extrema(u0)
    G_max = params.G_max if params.G_max is not None else 1e3 * max(1.0, abs(ext.m1))

    def threshold(values):
        osc = float(np.ptp(values))
        return min(G_max, params.theta * osc / h) if osc > 0 else G_max

    G = threshold(u)
    if ext.m1 < -G:
        raise UnderResolvedError(
            f"initial slope {ext.m1:.4g} already beyond breaking threshold {-G:.4g}; "
            f"refine the grid (N={u0.N})"
        )
    track_f11 = params.track_f11 and _has_third(model)
    history, f11 = [], []
    snapshots = []
    pending = sorted(ts for ts in params.snapshot_times if 0 <= ts <= horizon)
    if pending and pending[0] == 0:
        snapshots.append((0.0, u.copy()))
        pending.pop(0)

    def record(t, e, values):
        history.append((t, e.m1, e.m2, e.xi1, e.xi2))
        if params.boundary_tol is not None:
            edge = max(abs(values[0]), abs(values[-1]))
            if edge > params.boundary_tol:
                raise BoundaryContaminationError(
                    f"|u| = {edge:.3g} at the domain boundary x = +-{u0.L:g} at t = {t:.6g} "
                    f"exceeds {params.boundary_tol:g}; enlarge L"
                )
        if track_f11:
            f11.extend(_f11_samples(disc, values, t, e))

    t, n = 0.0, 0
    mass_drift, umin, umax = 0.0, float(u.min()), float(u.max())
    detected, interval, signal = False, None, None
    record(t, ext, u)
    last_recorded = 0
    while horizon - t > 1e-12 * horizon and n < params.max_steps:
        disc.t = t
        dt = disc.stable_dt(u, params.cfl)
        if dt < params.dt_min:
            detected, interval, signal = True, (t, t), "cfl"
            break
        dt = min(dt, horizon - t)
        if pending:
            dt = min(dt, pending[0] - t)
        u = disc.ssprk3(u, dt)
        t, n = t + dt, n + 1
        if pending and abs(t - pending[0]) <= 1e-12 * max(1.0, t):
            t = pending.pop(0)
            snapshots.append((t, u.copy()))
        mass_drift = max(mass_drift, abs(h * np.sum(u) - mass0))
        umin, umax = min(umin, float(u.min())), max(umax, float(u.max()))
        ext = gradient_extrema(GridFunction(u, u0.L))
        G = threshold(u)
        if ext.m1 < -G and not detected:
            detected, interval, signal = True, (t - dt, t), "gradient"
            record(t, ext, u)
            last_recorded = n
            if params.stop_on_breaking:
                break
        elif n % record_every == 0:
            record(t, ext, u)
            last_recorded = n
    if last_recorded != n:
        disc.t = t
        record(t, gradient_extrema(GridFunction(u, u0.L)), u)

    return SimResult(
        breaking_detected=detected, breaking_time_interval=interval,
        detection_signal=signal, gradient_history=np.array(history),
        mass_drift=float(mass_drift), min_u_reached=umin, max_u_reached=umax,
        f11_samples=f11, snapshots=snapshots,
        final_state=SimState(GridFunction(u, u0.L), t, n),
        gradient_threshold=G, initial_mass=float(mass0),
    )
