"""Flux models F(u, ubar) with closed-form partial derivatives.

Subscript 1 is the derivative in the local argument u, subscript 2 in the
nonlocal argument ubar.  Drift-form equations  u_t + f(u) u_x + K*u_x = 0
are written conservatively as F(u, ubar) = Phi(u) + ubar with Phi' = f.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, ClassVar, NamedTuple

import numpy as np

from .errors import DomainError


class Partials(NamedTuple):
    F1: np.ndarray
    F2: np.ndarray
    F11: np.ndarray
    F12: np.ndarray
    F22: np.ndarray


class FluxModel:
    kind: ClassVar[str] = "abstract"
    is_drift: ClassVar[bool] = False

    def check_domain(self, u) -> None:
        pass

    def F(self, u, ub):
        raise NotImplementedError

    def F1(self, u, ub):
        return self.partials(u, ub).F1

    def partials(self, u, ub) -> Partials:
        raise NotImplementedError

    def third(self, u, ub):
        """(F111, F112)."""
        raise NotImplementedError(f"{self.kind} has no closed-form third partials")


def _zeros_like(u, ub):
    return np.zeros(np.broadcast(np.asarray(u), np.asarray(ub)).shape)[()]


@dataclass(frozen=True)
class TrafficArrhenius(FluxModel):
    """F = u (1 - u) exp(-ubar)."""

    kind: ClassVar[str] = "TrafficArrhenius"

    def F(self, u, ub):
        return u * (1.0 - u) * np.exp(-ub)

    def partials(self, u, ub):
        e = np.exp(-ub)
        g, g1 = u * (1.0 - u), 1.0 - 2.0 * u
        return Partials(g1 * e, -g * e, -2.0 * e, -g1 * e, g * e)

    def third(self, u, ub):
        e = np.exp(-ub)
        return 0.0 * e, 2.0 * e


@dataclass(frozen=True)
class TrafficConcaveConvex(FluxModel):
    """F = u (1 - u)^2 exp(-ubar); F11 changes sign at u = 2/3."""

    kind: ClassVar[str] = "TrafficConcaveConvex"

    def F(self, u, ub):
        return u * (1.0 - u) ** 2 * np.exp(-ub)

    def partials(self, u, ub):
        e = np.exp(-ub)
        g = u * (1.0 - u) ** 2
        g1 = 1.0 - 4.0 * u + 3.0 * u * u
        g2 = -4.0 + 6.0 * u
        return Partials(g1 * e, -g * e, g2 * e, -g1 * e, g * e)

    def third(self, u, ub):
        e = np.exp(-ub)
        return 6.0 * e, -(-4.0 + 6.0 * u) * e


@dataclass(frozen=True)
class WhithamLinear(FluxModel):
    """F = (3 c0 / 4 h0) u^2 + ubar (Whitham's equation with linear drift)."""

    c0: float = 1.0
    h0: float = 1.0
    kind: ClassVar[str] = "WhithamLinear"

    @property
    def c(self) -> float:
        return 3.0 * self.c0 / (4.0 * self.h0)

    def F(self, u, ub):
        return self.c * u * u + ub

    def partials(self, u, ub):
        z = _zeros_like(u, ub)
        return Partials(2.0 * self.c * u + z, 1.0 + z, 2.0 * self.c + z, z, z)

    def third(self, u, ub):
        z = _zeros_like(u, ub)
        return z, z


@dataclass(frozen=True)
class KellerSegelLogistic(FluxModel):
    """F = u (1 - u) ubar with ubar = S_x, -S_xx + S = u."""

    kind: ClassVar[str] = "KellerSegelLogistic"

    def F(self, u, ub):
        return u * (1.0 - u) * ub

    def partials(self, u, ub):
        z = _zeros_like(u, ub)
        g, g1 = u * (1.0 - u), 1.0 - 2.0 * u
        return Partials(g1 * ub, g + z, -2.0 * ub + z, g1 + z, z)

    def third(self, u, ub):
        z = _zeros_like(u, ub)
        return z, -2.0 + z


@dataclass(frozen=True)
class Suspension(FluxModel):
    """F = u + ubar u (particle suspensions; the kernel carries the scale a)."""

    kind: ClassVar[str] = "Suspension"

    def F(self, u, ub):
        return u + ub * u

    def partials(self, u, ub):
        z = _zeros_like(u, ub)
        return Partials(1.0 + ub + z, u + z, z, 1.0 + z, z)

    def third(self, u, ub):
        z = _zeros_like(u, ub)
        return z, z


@dataclass(frozen=True)
class DriftFlux(FluxModel):
    """Generic drift u_t + f(u) u_x + K*u_x = 0 from closed-form pieces.

    ``Phi`` is an antiderivative of f; ``f1``, ``f2`` are f', f''.
    ``lower`` is an open lower bound on the admissible u (or None).
    """

    f: Callable
    f1: Callable
    f2: Callable
    Phi: Callable
    lower: float | None = None
    kind: ClassVar[str] = "DriftFlux"
    is_drift: ClassVar[bool] = True

    def check_domain(self, u) -> None:
        if self.lower is None:
            return
        u = np.asarray(u)
        bad = u <= self.lower
        if np.any(bad):
            worst = float(np.min(u))
            raise DomainError(f"u = {worst!r} outside drift domain u > {self.lower}", u=worst)

    def drift(self, u):
        """(f, f', f'') at u."""
        self.check_domain(u)
        return self.f(u), self.f1(u), self.f2(u)

    def F(self, u, ub):
        self.check_domain(u)
        return self.Phi(u) + ub

    def partials(self, u, ub):
        self.check_domain(u)
        z = _zeros_like(u, ub)
        return Partials(self.f(u) + z, 1.0 + z, self.f1(u) + z, z, z)

    def third(self, u, ub):
        z = _zeros_like(u, ub)
        return self.f2(u) + z, z


def _rw_f(u):
    return 3.0 * np.sqrt(1.0 + u) - 2.0


def _rw_f1(u):
    return 1.5 / np.sqrt(1.0 + u)


def _rw_f2(u):
    return -0.75 * (1.0 + u) ** -1.5


def _rw_Phi(u):
    # Phi(0) = 0
    return 2.0 * (1.0 + u) ** 1.5 - 2.0 * u - 2.0


@dataclass(frozen=True)
class RevertedWhithamDrift(DriftFlux):
    """f(u) = 3 sqrt(1 + u) - 2 (Whitham's nonlinear drift with g = h0 = 1)."""

    f: Callable = _rw_f
    f1: Callable = _rw_f1
    f2: Callable = _rw_f2
    Phi: Callable = _rw_Phi
    lower: float | None = -1.0
    kind: ClassVar[str] = "RevertedWhithamDrift"


FLUXES = {
    cls.kind: cls
    for cls in (TrafficArrhenius, TrafficConcaveConvex, WhithamLinear,
                KellerSegelLogistic, Suspension, RevertedWhithamDrift)
}


def make_flux(kind: str, **params) -> FluxModel:
    try:
        cls = FLUXES[kind]
    except KeyError:
        raise ValueError(f"unknown flux {kind!r}; choose from {sorted(FLUXES)}") from None
    return cls(**params)


def eval_flux(model: FluxModel, u, ubar):
    return model.F(u, ubar)


def partials(model: FluxModel, u, ubar) -> Partials:
    return model.partials(u, ubar)


def drift(model: FluxModel, u):
    if not model.is_drift:
        raise TypeError(f"{model.kind} is not a drift-form model")
    return model.drift(u)


def f11_rate(model: FluxModel, u, ubar, ubar_x, ubar_t):
    """Rate of change of F11 along  x' = F1(u, ubar).

    (d/dt + F1 d/dx) F11 = (-F111 F2 + F1 F112) ubar_x + F112 ubar_t.
    The u_x contributions cancel, so u_x is not an argument.
    """
    p = model.partials(u, ubar)
    F111, F112 = model.third(u, ubar)
    return (-F111 * p.F2 + p.F1 * F112) * ubar_x + F112 * ubar_t
