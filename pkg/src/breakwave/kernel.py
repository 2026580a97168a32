"""Convolution kernels K for the nonlocal term ubar = K * u.

Each kernel evaluates in closed form and knows its exact scalar functionals
(K(0), sup|K'|, the L1 norm).  Grid convolution is periodic on [-L, L);
the kernel is either wrapped onto the window (whole-line surrogate, which
requires decay within the window) or periodized by summing images.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import ClassVar

import numpy as np
from numpy.polynomial import Polynomial

from .errors import KernelError, KernelWindowError
from .grid import GridFunction

DECAY_TOL = 1e-12


def smoothstep(s):
    """C1 ramp from 0 (s <= 0) to 1 (s >= 1); derivative peaks at 1.5."""
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


class Kernel:
    kind: ClassVar[str] = "abstract"
    integrable: ClassVar[bool] = True

    def eval(self, r):
        raise NotImplementedError

    def at_zero(self) -> float:
        return float(self.eval(0.0))

    def deriv_sup(self) -> float:
        raise NotImplementedError

    def l1_norm(self) -> float:
        raise NotImplementedError

    def decay_radius(self, tol: float = DECAY_TOL) -> float:
        """Smallest R with |K(r)| < tol for all |r| >= R."""
        raise NotImplementedError

    def jump_points(self) -> tuple:
        """Abscissae where K jumps."""
        return ()

    def breakpoints(self) -> tuple:
        """Jumps and kinks; K is smooth between consecutive breakpoints."""
        return self.jump_points()

    def quad_eval(self, r):
        """Point values, except at jumps where the one-sided mean is used."""
        r = np.asarray(r, dtype=float)
        vals = np.array(self.eval(r), dtype=float)
        for p in self.jump_points():
            hit = np.abs(r - p) <= 1e-12 * max(1.0, abs(p))
            if np.any(hit):
                d = 1e-9 * max(1.0, abs(p))
                vals[hit] = 0.5 * (self.eval(p - d) + self.eval(p + d))
        return vals

    def params(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class WhithamExp(Kernel):
    """K(r) = a exp(-b |r|); a=pi/4, b=pi/2 is Whitham's shallow-water kernel."""

    a: float = math.pi / 4
    b: float = math.pi / 2
    kind: ClassVar[str] = "WhithamExp"

    def __post_init__(self):
        if not self.b > 0:
            raise KernelError(f"WhithamExp needs decay rate b > 0, got {self.b}")

    def eval(self, r):
        return self.a * np.exp(-self.b * np.abs(r))

    def at_zero(self) -> float:
        return float(self.a)

    def deriv_sup(self) -> float:
        # |K'(r)| = |a| b e^{-b|r|}, supremum approached as r -> 0
        return abs(self.a) * self.b

    def l1_norm(self) -> float:
        return 2.0 * abs(self.a) / self.b

    def decay_radius(self, tol: float = DECAY_TOL) -> float:
        if abs(self.a) < tol:
            return 0.0
        return math.log(abs(self.a) / tol) / self.b

    def breakpoints(self) -> tuple:
        return (0.0,)

    def fourier_multiplier(self, k: float) -> float:
        """Whole-line transform  int K(r) e^{-ikr} dr = 2ab / (b^2 + k^2)."""
        return 2.0 * self.a * self.b / (self.b**2 + k**2)


@dataclass(frozen=True)
class LookAheadBox(Kernel):
    """K(r) = K0/gamma on [-gamma, 0], zero elsewhere (look-ahead traffic).

    With ``eps`` set, both jumps are replaced by centered C1 ramps of width
    eps, which preserves the mass K0 and gives a bounded derivative.
    """

    K0: float = 1.0
    gamma: float = 1.0
    eps: float | None = None
    kind: ClassVar[str] = "LookAheadBox"

    def __post_init__(self):
        if not self.gamma > 0:
            raise KernelError(f"LookAheadBox needs gamma > 0, got {self.gamma}")
        if self.eps is not None and not 0 < self.eps < self.gamma:
            raise KernelError(f"mollification width must lie in (0, gamma), got {self.eps}")

    def mollified(self, eps: float | None = None) -> "LookAheadBox":
        return replace(self, eps=self.gamma / 20 if eps is None else eps)

    def eval(self, r):
        r = np.asarray(r, dtype=float)
        height = self.K0 / self.gamma
        if self.eps is None:
            return np.where((r >= -self.gamma) & (r <= 0.0), height, 0.0)
        e = self.eps
        rise = smoothstep((r + self.gamma + 0.5 * e) / e)
        fall = 1.0 - smoothstep((r + 0.5 * e) / e)
        return height * rise * fall

    def jump_points(self) -> tuple:
        return () if self.eps is not None else (-self.gamma, 0.0)

    def breakpoints(self) -> tuple:
        if self.eps is None:
            return self.jump_points()
        e, g = 0.5 * self.eps, self.gamma
        return (-g - e, -g + e, -e, e)

    def at_zero(self) -> float:
        if self.eps is None:
            return self.K0 / self.gamma
        return 0.5 * self.K0 / self.gamma

    def deriv_sup(self) -> float:
        if self.eps is None:
            raise KernelError(
                "derivative not essentially bounded for the box kernel; "
                "use LookAheadBox.mollified(eps)"
            )
        return 1.5 * abs(self.K0) / (self.gamma * self.eps)

    def l1_norm(self) -> float:
        return abs(self.K0)

    def decay_radius(self, tol: float = DECAY_TOL) -> float:
        return self.gamma + (0.5 * self.eps if self.eps else 0.0)


@dataclass(frozen=True)
class KellerSegelDeriv(Kernel):
    """K(r) = d/dr (e^{-|r|}/2) = -sign(r) e^{-|r|}/2.

    The unit jump at r=0 can be smoothed over width ``eps`` by replacing
    sign(r) with an odd C1 ramp; sup|K'| is only finite in that case.
    """

    eps: float | None = None
    kind: ClassVar[str] = "KellerSegelDeriv"

    def __post_init__(self):
        if self.eps is not None and not self.eps > 0:
            raise KernelError(f"mollification width must be positive, got {self.eps}")

    def _sign(self, r):
        if self.eps is None:
            return np.sign(r)
        return 2.0 * smoothstep((r + 0.5 * self.eps) / self.eps) - 1.0

    def eval(self, r):
        r = np.asarray(r, dtype=float)
        return -self._sign(r) * np.exp(-np.abs(r)) / 2.0

    def jump_points(self) -> tuple:
        return () if self.eps is not None else (0.0,)

    def breakpoints(self) -> tuple:
        if self.eps is None:
            return (0.0,)
        return (-0.5 * self.eps, 0.0, 0.5 * self.eps)

    def at_zero(self) -> float:
        # one-sided limits are +-1/2; the odd kernel takes the mean value 0
        return 0.0

    def deriv_sup(self) -> float:
        if self.eps is None:
            raise KernelError(
                "KellerSegelDeriv has a delta in its derivative; set the mollification eps"
            )
        # K' = (|s| - s') e^{-|r|}/2; largest at r=0 where s'=3/eps, or 1/2 in the tails
        return max(1.5 / self.eps, 0.5)

    def l1_norm(self) -> float:
        if self.eps is None:
            return 1.0
        # 1 - int_{-eps/2}^{eps/2} (1-|s|) e^{-|r|}/2 dr, done exactly for
        # the polynomial ramp: int_0^c p e^{-r} = [-e^{-r}(p + p' + p'' + ...)]_0^c
        e = self.eps
        sigma = Polynomial([0.5, 1.0 / e])
        deficit = 2.0 * (1.0 - sigma * sigma * (3.0 - 2.0 * sigma))
        c = 0.5 * e
        total, q = Polynomial([0.0]), deficit
        for _ in range(deficit.degree() + 1):
            total, q = total + q, q.deriv()
        integral = total(0.0) - math.exp(-c) * total(c)
        return 1.0 - integral

    def decay_radius(self, tol: float = DECAY_TOL) -> float:
        return max(math.log(0.5 / tol), 0.0)


@dataclass(frozen=True)
class SuspensionBump(Kernel):
    """K_a(r) = K(r/a)/a with K(r) = 2 / (3 (r^2/4 - 1)) for |r| < 2.

    Negative on its support and bounded at 0, but with non-integrable poles
    at |r| = 2a, so only point evaluation and K(0) are available.
    """

    a: float = 1.0
    kind: ClassVar[str] = "SuspensionBump"
    integrable: ClassVar[bool] = False

    def __post_init__(self):
        if not self.a > 0:
            raise KernelError(f"SuspensionBump needs scale a > 0, got {self.a}")

    def eval(self, r):
        rho = np.asarray(r, dtype=float) / self.a
        inside = np.abs(rho) < 2.0
        denom = np.where(inside, 3.0 * (rho * rho / 4.0 - 1.0), 1.0)
        return np.where(inside, 2.0 / denom, 0.0) / self.a

    def at_zero(self) -> float:
        return -2.0 / (3.0 * self.a)

    def deriv_sup(self) -> float:
        raise KernelError("SuspensionBump derivative is unbounded near |r| = 2a")

    def l1_norm(self) -> float:
        raise KernelError("SuspensionBump is not integrable (poles at |r| = 2a)")

    def decay_radius(self, tol: float = DECAY_TOL) -> float:
        return 2.0 * self.a


KERNELS = {
    cls.kind: cls for cls in (WhithamExp, LookAheadBox, KellerSegelDeriv, SuspensionBump)
}


def make_kernel(kind: str, **params) -> Kernel:
    try:
        cls = KERNELS[kind]
    except KeyError:
        raise KernelError(f"unknown kernel {kind!r}; choose from {sorted(KERNELS)}") from None
    return cls(**params)


# functional forms of the kernel methods

def at_zero(kernel: Kernel) -> float:
    return kernel.at_zero()


def deriv_sup(kernel: Kernel) -> float:
    return kernel.deriv_sup()


def l1_norm(kernel: Kernel) -> float:
    return kernel.l1_norm()


# ---------------------------------------------------------------- convolution

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def cell_integrals(kernel: Kernel, edges: np.ndarray) -> np.ndarray:
    """int_{edges[k]}^{edges[k+1]} K(r) dr, Gauss-Legendre on pieces split at breakpoints."""
    bps = [p for p in kernel.breakpoints() if edges[0] < p < edges[-1]]
    pts = np.union1d(edges, bps)
    a, b = pts[:-1], pts[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    vals = (kernel.eval(mid[:, None] + half[:, None] * _GL_X[None, :]) @ _GL_W) * half
    owner = np.searchsorted(edges, a, side="right") - 1
    return np.bincount(owner, weights=vals, minlength=edges.size - 1)


def kernel_weights(kernel: Kernel, L: float, N: int, periodize: bool,
                   rule: str = "cell", tol: float = DECAY_TOL) -> np.ndarray:
    """Quadrature weights w_k, in circular offset order, with (K*u)_j = sum_k w_k u_{j-k}.

    ``rule="cell"`` integrates K exactly over the cell around each offset, so
    sum(w) equals the kernel mass and constants are reproduced.
    ``rule="trapezoid"`` uses h * K(r_k) (one-sided means at jumps).
    """
    if rule not in ("cell", "trapezoid"):
        raise ValueError(f"unknown quadrature rule {rule!r}")
    if not kernel.integrable:
        raise KernelError(f"{kernel.kind} is not integrable; convolution undefined")
    h = 2.0 * L / N
    radius = kernel.decay_radius(tol)
    if not periodize and radius > L:
        raise KernelWindowError(
            f"{kernel.kind} has not decayed below {tol:g} within the window "
            f"[-{L:g}, {L:g}]; need half-length L >= {radius:.6g}",
            required_L=radius,
        )
    n_img = int(math.ceil(radius / (2.0 * L))) + 1 if periodize else 0
    r_lin = (np.arange(N) - N // 2) * h
    acc = np.zeros(N)
    # small images first, fixed order
    for n in sorted(range(-n_img, n_img + 1), key=lambda n: (-abs(n), n)):
        shift = 2.0 * L * n
        if rule == "trapezoid":
            acc += h * kernel.quad_eval(r_lin + shift)
        else:
            edges = np.append(r_lin - 0.5 * h, r_lin[-1] + 0.5 * h) + shift
            acc += cell_integrals(kernel, edges)
    return np.fft.ifftshift(acc)


class Convolver:
    """Discrete circular convolution with cached kernel weights.

    ``backend="fft"`` uses the real FFT, ``"direct"`` the dense circulant
    matrix (trapezoid rule on the periodic grid); both apply the same weights.
    """

    def __init__(self, kernel: Kernel, L: float, N: int, periodize: bool = True,
                 backend: str = "fft", rule: str = "cell", tol: float = DECAY_TOL):
        if backend not in ("fft", "direct"):
            raise ValueError(f"unknown convolution backend {backend!r}")
        self.kernel, self.L, self.N, self.backend = kernel, L, N, backend
        self.weights = kernel_weights(kernel, L, N, periodize, rule, tol)
        if backend == "fft":
            self._w_hat = np.fft.rfft(self.weights)
        else:
            idx = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
            self._matrix = self.weights[idx]

    def __call__(self, values: np.ndarray) -> np.ndarray:
        if self.backend == "fft":
            return np.fft.irfft(np.fft.rfft(values) * self._w_hat, n=self.N)
        return self._matrix @ values


@lru_cache(maxsize=32)
def cached_convolver(kernel: Kernel, L: float, N: int, periodize: bool = True,
                     backend: str = "fft", rule: str = "cell") -> Convolver:
    return Convolver(kernel, L, N, periodize=periodize, backend=backend, rule=rule)


def convolve(kernel: Kernel, u: GridFunction, backend: str = "fft",
             periodize: bool = False, rule: str = "cell") -> GridFunction:
    """ubar = K * u on the grid of ``u``.

    With ``periodize=False`` the kernel is truncated to the window and must
    decay there (KernelWindowError names the half-length needed); with
    ``periodize=True`` u is treated as periodic and the kernel is summed
    over its periodic images.
    """
    conv = cached_convolver(kernel, u.L, u.N, periodize, backend, rule)
    return u.with_values(conv(u.values))


def convolve_deriv(kernel: Kernel, u: GridFunction, backend: str = "fft",
                   periodize: bool = False, rule: str = "cell") -> GridFunction:
    """K * u_x using the centered grid derivative of u."""
    return convolve(kernel, u.ddx(), backend=backend, periodize=periodize, rule=rule)
