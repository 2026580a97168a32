"""Riccati comparison dynamics for the slope extrema m1 = min u_x, m2 = max u_x.

The blow-up argument rests on  D/Dt m <= mu m^2  with mu < 0, whose
majorant m0 / (1 - m0 mu t) has a pole at 1/(m0 mu).  Here the coupled
pair is integrated as an equality system; actual PDE extrema lie below it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

BLOWUP_LEVEL = 1e8
MIN_DT = 1e-12


def closed_form(m0: float, mu: float, t):
    """m(t) = m0 / (1 - m0 mu t), the exact solution of m' = mu m^2."""
    denom = 1.0 - m0 * mu * np.asarray(t, dtype=float)
    if np.any(denom == 0):
        raise ZeroDivisionError(f"closed form evaluated at its pole t = {1.0 / (m0 * mu)}")
    return m0 / denom


def blowup_time(m0: float, mu: float) -> float | None:
    """Pole 1/(m0 mu) when m0 < 0 and mu < 0; otherwise no finite pole."""
    if m0 < 0 and mu < 0:
        return 1.0 / (m0 * mu)
    return None


@dataclass(frozen=True)
class RiccatiScalar:
    """m' = g(t) m^2 + forcing(t)."""

    g: Callable[[float], float]
    initial: float
    forcing: Callable[[float], float] = field(default=lambda t: 0.0)


@dataclass(frozen=True)
class RiccatiPair:
    """m1' = mu m1^2 + K0 (m2 - m1),  m2' = mu m2^2 + K0 (m2 - m1)."""

    mu: float
    K0: float
    m1_0: float
    m2_0: float

    def __post_init__(self):
        if not self.mu < 0:
            raise ValueError(f"RiccatiPair needs mu < 0, got {self.mu}")

    @property
    def shifted_m0(self) -> float:
        """m(0) = m1(0) - K0/mu."""
        return self.m1_0 - self.K0 / self.mu


@dataclass
class Trajectory:
    t: np.ndarray
    m: np.ndarray  # shape (steps, components)
    blowup: bool
    blowup_interval: tuple[float, float] | None

    @property
    def m1(self) -> np.ndarray:
        return self.m[:, 0]

    @property
    def m2(self) -> np.ndarray:
        return self.m[:, 1]


def integrate(rhs: Callable, y0, dt: float, horizon: float, *, rel_growth: float = 0.25,
              blowup_level: float = BLOWUP_LEVEL, min_dt: float = MIN_DT) -> Trajectory:
    """Classical RK4 at step ``dt``, halving the step while a single step
    would change |y| by more than ``rel_growth * max(|y|, 1)``.

    Stops at ``horizon`` or when any component exceeds ``blowup_level`` in
    magnitude (or overflows), reporting [last finite step, detection step].
    """
    if dt <= 0 or horizon <= 0:
        raise ValueError(f"dt and horizon must be positive, got dt={dt}, horizon={horizon}")
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    ts, ys = [0.0], [y.copy()]
    t = 0.0
    blowup, interval = False, None
    with np.errstate(over="ignore", invalid="ignore"):
        while t < horizon and horizon - t > 1e-12 * horizon:
            h = min(dt, horizon - t)
            k1 = rhs(t, y)
            scale = max(np.max(np.abs(y)), 1.0)
            while h > min_dt and h * np.max(np.abs(k1)) > rel_growth * scale:
                h = max(0.5 * h, min_dt)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t_new = t + h
            if not np.all(np.isfinite(y_new)) or np.max(np.abs(y_new)) > blowup_level:
                blowup, interval = True, (t, t_new)
                if np.all(np.isfinite(y_new)):
                    ts.append(t_new)
                    ys.append(y_new)
                break
            t, y = t_new, y_new
            ts.append(t)
            ys.append(y.copy())
    return Trajectory(np.array(ts), np.array(ys), blowup, interval)


def integrate_pair(pair: RiccatiPair, dt: float, horizon: float, **kw) -> Trajectory:
    mu, K0 = pair.mu, pair.K0

    def rhs(t, m):
        coupling = K0 * (m[1] - m[0])
        return np.array([mu * m[0] ** 2 + coupling, mu * m[1] ** 2 + coupling])

    return integrate(rhs, [pair.m1_0, pair.m2_0], dt, horizon, **kw)


def integrate_scalar(r: RiccatiScalar, dt: float, horizon: float, **kw) -> Trajectory:
    def rhs(t, m):
        return np.array([r.g(t) * m[0] ** 2 + r.forcing(t)])

    return integrate(rhs, [r.initial], dt, horizon, **kw)


def trajectory_csv_rows(traj: Trajectory):
    """(t, m1, m2) rows for CSV export; m2 is blank for scalar trajectories."""
    for t, m in zip(traj.t, traj.m):
        yield (t, m[0], m[1] if m.size > 1 else "")
