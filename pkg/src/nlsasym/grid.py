"""Uniform complex-valued grids."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline


class GridError(ValueError):
    pass


class DecayError(ValueError):
    """Sampled data does not decay at the grid ends."""


@dataclass(frozen=True)
class ComplexGrid1D:
    xs: np.ndarray
    vals: np.ndarray
    dx: float = field(init=False)

    def __post_init__(self) -> None:
        xs = np.ascontiguousarray(self.xs, dtype=float)
        vals = np.ascontiguousarray(self.vals, dtype=complex)
        if xs.ndim != 1 or xs.shape != vals.shape or xs.size < 2:
            raise GridError("xs and vals must be 1-d arrays of equal length >= 2")
        steps = np.diff(xs)
        dx = (xs[-1] - xs[0]) / (xs.size - 1)
        if dx <= 0 or np.max(np.abs(steps - dx)) > 1e-12 * max(abs(dx), 1.0) * 10:
            raise GridError("xs must be strictly increasing and uniformly spaced")
        xs.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "vals", vals)
        object.__setattr__(self, "dx", float(dx))

    @classmethod
    def from_function(cls, fun: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, n: int) -> "ComplexGrid1D":
        xs = np.linspace(lo, hi, n)
        return cls(xs, np.asarray(fun(xs), dtype=complex) * np.ones_like(xs))

    @classmethod
    def periodic(cls, fun: Callable[[np.ndarray], np.ndarray], half_width: float, n: int) -> "ComplexGrid1D":
        """Grid on [-L, L) suitable for FFT methods (right endpoint excluded)."""
        xs = -half_width + 2.0 * half_width * np.arange(n) / n
        return cls(xs, np.asarray(fun(xs), dtype=complex) * np.ones_like(xs))

    def __len__(self) -> int:
        return self.xs.size

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.vals)))

    def edge_ratio(self) -> float:
        m = self.max_abs
        if m == 0.0:
            return 0.0
        return float(max(abs(self.vals[0]), abs(self.vals[-1])) / m)

    def check_decay(self, rel: float = 1e-8) -> None:
        if self.edge_ratio() >= rel:
            raise DecayError(f"|q| at grid ends is {self.edge_ratio():.3e} of max, need < {rel:g}")

    def spline(self) -> CubicSpline:
        return CubicSpline(self.xs, self.vals)

    def with_values(self, vals: np.ndarray) -> "ComplexGrid1D":
        return ComplexGrid1D(self.xs, vals)
