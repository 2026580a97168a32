"""Uniform periodic grids on the truncated domain [-L, L)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples ``values[j] = u(-L + j*h)`` with ``h = 2L/N``; periodic."""

    values: np.ndarray
    L: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("grid values must be one-dimensional")
        if not is_power_of_two(values.size):
            raise ValueError(f"grid size N={values.size} is not a power of two")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite")
        if self.L <= 0:
            raise ValueError(f"domain half-length must be positive, got {self.L}")
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return grid_nodes(self.L, self.N)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(values, self.L)

    def integral(self) -> float:
        # periodic trapezoid == rectangle rule
        return float(self.h * np.sum(self.values))

    def ddx(self) -> "GridFunction":
        return self.with_values(centered_diff(self.values, self.h))


def grid_nodes(L: float, N: int) -> np.ndarray:
    return -L + (2.0 * L / N) * np.arange(N)


def centered_diff(values: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * h)


def periodic_interp(values: np.ndarray, L: float, x: float) -> float:
    """Linear interpolation of periodic grid samples at abscissa ``x``."""
    N = values.size
    h = 2.0 * L / N
    s = (x + L) / h
    j = int(np.floor(s))
    frac = s - j
    return float((1.0 - frac) * values[j % N] + frac * values[(j + 1) % N])
