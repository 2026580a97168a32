"""Initial data u0 with closed-form derivatives, and their slope statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .grid import GridFunction, grid_nodes, is_power_of_two
from .kernel import smoothstep

EDGE_TOL = 1e-12
DENSE_POINTS = 2**16


@dataclass(frozen=True)
class ProfileStats:
    inf_slope: float
    sup_slope: float
    xi1: float
    xi2: float
    u_at_xi1: float
    u_at_xi2: float
    u0_min_at_extrema: float
    u0_max_at_extrema: float
    l1_norm: float
    ambiguous: bool = False
    xi1_candidates: tuple = ()
    xi2_candidates: tuple = ()

    @property
    def m1(self) -> float:
        return self.inf_slope

    @property
    def m2(self) -> float:
        return self.sup_slope


class Profile:
    kind: ClassVar[str] = "abstract"
    L: float
    N: int

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"domain half-length must be positive, got {self.L}")
        edge = max(abs(float(self.u0(-self.L))), abs(float(self.u0(self.L))))
        if edge >= EDGE_TOL:
            raise ValueError(
                f"{self.kind} has |u0(+-L)| = {edge:.3g} >= {EDGE_TOL:g}; enlarge L"
            )

    def u0(self, x):
        raise NotImplementedError

    def u1(self, x):
        """u0'(x)."""
        raise NotImplementedError

    def u2(self, x):
        """u0''(x)."""
        raise NotImplementedError

    def l1_norm(self) -> float:
        return _quad_abs(self.u0, -self.L, self.L)

    def sample(self) -> GridFunction:
        if not is_power_of_two(self.N):
            raise ValueError(f"grid size N={self.N} is not a power of two")
        return GridFunction(self.u0(grid_nodes(self.L, self.N)), self.L)

    def stats(self) -> ProfileStats:
        xs1, inf_slope = _dense_extremum(self, "min")
        xs2, sup_slope = _dense_extremum(self, "max")
        return _assemble(self, xs1, inf_slope, xs2, sup_slope)


def _quad_abs(fun, a, b, points=None) -> float:
    val, _ = quad(lambda x: abs(fun(x)), a, b, points=points, limit=500,
                  epsabs=1e-13, epsrel=1e-12)
    return val


def _assemble(profile, xs1, inf_slope, xs2, sup_slope) -> ProfileStats:
    xs1, xs2 = tuple(sorted(xs1)), tuple(sorted(xs2))
    xi1, xi2 = xs1[0], xs2[0]
    ua, ub = float(profile.u0(xi1)), float(profile.u0(xi2))
    return ProfileStats(
        inf_slope=float(inf_slope), sup_slope=float(sup_slope),
        xi1=float(xi1), xi2=float(xi2), u_at_xi1=ua, u_at_xi2=ub,
        u0_min_at_extrema=min(ua, ub), u0_max_at_extrema=max(ua, ub),
        l1_norm=float(profile.l1_norm()),
        ambiguous=len(xs1) > 1 or len(xs2) > 1,
        xi1_candidates=xs1, xi2_candidates=xs2,
    )


def _dense_extremum(profile: Profile, which: str):
    """Global min/max of u0' by dense sampling plus root refinement of u0''.

    Returns (sorted candidate abscissae, extremal value).  Several candidates
    mean the extremum is attained at distinct points within tolerance.
    """
    L = profile.L
    x = np.linspace(-L, L, DENSE_POINTS + 1)
    d = profile.u1(x)
    sgn = 1.0 if which == "min" else -1.0
    d = sgn * d
    best = d.min()
    if np.all(d == best):
        return (-L,), sgn * best
    # a sampled local minimum can sit above the true one by O(spacing^2)
    slack = 1e-6 * max(1.0, abs(best))
    interior = (d[1:-1] <= d[:-2]) & (d[1:-1] <= d[2:])
    idx = np.flatnonzero(interior) + 1
    idx = idx[d[idx] <= best + slack]
    if d[0] <= best + slack:
        idx = np.append(idx, 0)
    if d[-1] <= best + slack:
        idx = np.append(idx, len(x) - 1)

    refined = []
    for i in idx:
        lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
        xr = x[i]
        g_lo, g_hi = profile.u2(lo), profile.u2(hi)
        if np.sign(g_lo) != np.sign(g_hi) and g_lo != 0 and g_hi != 0:
            xr = brentq(profile.u2, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        refined.append((xr, sgn * float(profile.u1(xr))))
    top = min(v for _, v in refined)
    tol = 1e-9 * max(1.0, abs(top))
    winners = sorted(xr for xr, v in refined if v <= top + tol)
    distinct = [winners[0]]
    for xr in winners[1:]:
        if xr - distinct[-1] > 1e-8:
            distinct.append(xr)
    return tuple(distinct), sgn * top


@dataclass(frozen=True)
class GaussianBump(Profile):
    """u0 = A exp(-((x - x0)/w)^2)."""

    A: float = 1.0
    w: float = 1.0
    x0: float = 0.0
    L: float = 20.0
    N: int = 2048
    kind: ClassVar[str] = "GaussianBump"

    def u0(self, x):
        y = (np.asarray(x, dtype=float) - self.x0) / self.w
        return self.A * np.exp(-y * y)

    def u1(self, x):
        y = (np.asarray(x, dtype=float) - self.x0) / self.w
        return -2.0 * self.A * y / self.w * np.exp(-y * y)

    def u2(self, x):
        y = (np.asarray(x, dtype=float) - self.x0) / self.w
        return self.A * (4.0 * y * y - 2.0) / self.w**2 * np.exp(-y * y)

    def l1_norm(self) -> float:
        return abs(self.A) * self.w * math.sqrt(math.pi)

    def stats(self) -> ProfileStats:
        if self.A == 0:
            return _assemble(self, (-self.L,), 0.0, (-self.L,), 0.0)
        # u0' extremal at x0 -+ w/sqrt(2) with |u0'| = |A| sqrt(2/e) / w
        peak = abs(self.A) * math.sqrt(2.0 / math.e) / self.w
        left, right = self.x0 - self.w / math.sqrt(2.0), self.x0 + self.w / math.sqrt(2.0)
        if self.A > 0:
            return _assemble(self, (right,), -peak, (left,), peak)
        return _assemble(self, (left,), -peak, (right,), peak)


@dataclass(frozen=True)
class TanhFront(Profile):
    """u0 = -A tanh(s (x - x0)) exp(-((x - x0)/w)^2): a steep localized front."""

    A: float = 0.5
    s: float = 5.0
    x0: float = 0.0
    w: float = 1.0
    L: float = 20.0
    N: int = 2048
    kind: ClassVar[str] = "TanhFront"

    def _parts(self, x):
        y = np.asarray(x, dtype=float) - self.x0
        T = np.tanh(self.s * y)
        S2 = 1.0 - T * T
        G = np.exp(-(y / self.w) ** 2)
        return y, T, S2, G

    def u0(self, x):
        _, T, _, G = self._parts(x)
        return -self.A * T * G

    def u1(self, x):
        y, T, S2, G = self._parts(x)
        Gp = -2.0 * y / self.w**2 * G
        return -self.A * (self.s * S2 * G + T * Gp)

    def u2(self, x):
        y, T, S2, G = self._parts(x)
        w2 = self.w**2
        Gp = -2.0 * y / w2 * G
        Gpp = (4.0 * y * y / w2**2 - 2.0 / w2) * G
        Tp = self.s * S2
        Tpp = -2.0 * self.s**2 * T * S2
        return -self.A * (Tpp * G + 2.0 * Tp * Gp + T * Gpp)

    def l1_norm(self) -> float:
        # |u0| is even about x0
        val, _ = quad(lambda y: math.tanh(self.s * y) * math.exp(-(y / self.w) ** 2),
                      0.0, math.inf, limit=500, epsabs=1e-14, epsrel=1e-12)
        return 2.0 * abs(self.A) * val


@dataclass(frozen=True)
class RampBump(Profile):
    """Compactly supported plateau with C1 smoothstep flanks.

    Rises from 0 to ``height`` over ``rise``, stays flat on
    [center - plateau, center + plateau], falls back over ``fall``.
    Extreme slopes are 1.5*height/rise and -1.5*height/fall, both attained
    where u0 = height/2.
    """

    height: float = 0.2
    rise: float = 1.0
    fall: float = 0.1
    plateau: float = 0.0
    center: float = 0.0
    L: float = 20.0
    N: int = 2048
    kind: ClassVar[str] = "RampBump"

    def __post_init__(self):
        if not (self.rise > 0 and self.fall > 0 and self.plateau >= 0):
            raise ValueError("RampBump needs rise > 0, fall > 0, plateau >= 0")
        super().__post_init__()

    @classmethod
    def from_slopes(cls, height: float, sup_slope: float, inf_slope: float, **kw) -> "RampBump":
        if height <= 0 or sup_slope <= 0 or inf_slope >= 0:
            raise ValueError("need height > 0, sup_slope > 0, inf_slope < 0")
        return cls(height=height, rise=1.5 * height / sup_slope,
                   fall=1.5 * height / -inf_slope, **kw)

    @property
    def _a0(self):
        return self.center - self.plateau - self.rise

    @property
    def _b0(self):
        return self.center + self.plateau

    def _ramps(self, x):
        p = (np.asarray(x, dtype=float) - self._a0) / self.rise
        q = (np.asarray(x, dtype=float) - self._b0) / self.fall
        return p, q

    @staticmethod
    def _dS(s):
        return np.where((s > 0) & (s < 1), 6.0 * s * (1.0 - s), 0.0)

    @staticmethod
    def _ddS(s):
        return np.where((s > 0) & (s < 1), 6.0 - 12.0 * s, 0.0)

    def u0(self, x):
        p, q = self._ramps(x)
        return self.height * smoothstep(p) * (1.0 - smoothstep(q))

    def u1(self, x):
        p, q = self._ramps(x)
        return self.height * (self._dS(p) / self.rise * (1.0 - smoothstep(q))
                              - smoothstep(p) * self._dS(q) / self.fall)

    def u2(self, x):
        p, q = self._ramps(x)
        return self.height * (self._ddS(p) / self.rise**2 * (1.0 - smoothstep(q))
                              - smoothstep(p) * self._ddS(q) / self.fall**2)

    def l1_norm(self) -> float:
        return abs(self.height) * (2.0 * self.plateau + 0.5 * self.rise + 0.5 * self.fall)

    def stats(self) -> ProfileStats:
        if self.height == 0:
            return _assemble(self, (-self.L,), 0.0, (-self.L,), 0.0)
        up = self._a0 + 0.5 * self.rise
        down = self._b0 + 0.5 * self.fall
        s_up, s_down = 1.5 * self.height / self.rise, -1.5 * self.height / self.fall
        if self.height > 0:
            return _assemble(self, (down,), s_down, (up,), s_up)
        return _assemble(self, (up,), s_up, (down,), s_down)


PROFILES = {cls.kind: cls for cls in (GaussianBump, TanhFront, RampBump)}


def make_profile(kind: str, **params) -> Profile:
    try:
        cls = PROFILES[kind]
    except KeyError:
        raise ValueError(f"unknown profile {kind!r}; choose from {sorted(PROFILES)}") from None
    return cls(**params)


def zero_profile(L: float = 20.0, N: int = 2048) -> GaussianBump:
    return GaussianBump(A=0.0, L=L, N=N)


def stats(profile: Profile) -> ProfileStats:
    return profile.stats()


def sample(profile: Profile) -> GridFunction:
    return profile.sample()
