"""Direct scattering for the defocusing Zakharov-Shabat system.

    Psi_x = -i z sigma3 Psi + Q Psi,   Q = [[0, q], [conj(q), 0]].

We integrate the phase-free form W = e^{i x z sigma3} Psi, which obeys

    W_x = [[0, q e^{2ixz}], [conj(q) e^{-2ixz}, 0]] W,   W(-L) = I,

so W(L) is the inverse transition matrix [[a_breve, -b_breve], [-b, a]].
Its entries give a, b and the reflection coefficient.  The long-time formulas
use r = -b / a_breve (equal to -conj(b_breve / a) on the real line); the
plain ratio b_breve / a is kept as ``r_ratio_vals``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernels
from .grid import ComplexGrid1D, DecayError

__all__ = [
    "ScatteringData",
    "StepSizeError",
    "transfer_matrix",
    "jost_transfer",
    "reflection_grid",
    "local_nu_omega",
    "five_point_derivative",
    "write_scattering",
    "read_scattering",
]

# RK4 step rule: global error ~ span * max|q| * ((1 + 2|z|) h)^4 * ERR_CONST
ERR_CONST = 5e-6
MIN_STEP = 1e-6


class StepSizeError(RuntimeError):
    """Requested tolerance needs steps below MIN_STEP."""


def _step_count(q0: ComplexGrid1D, z: float, tol: float) -> int:
    span = q0.xs[-1] - q0.xs[0]
    qmax = max(q0.max_abs, 1e-300)
    h = (tol / (span * qmax * ERR_CONST)) ** 0.25 / (1.0 + 2.0 * abs(z))
    if h < MIN_STEP:
        raise StepSizeError(f"step {h:.2e} below {MIN_STEP:g} for z={z}, tol={tol}")
    base = len(q0) - 1
    k = max(0, math.ceil(math.log2(max(q0.dx / h, 1.0))))
    return base * 2**k


def transfer_matrix(q0: ComplexGrid1D, zs, tol: float = 1e-10) -> np.ndarray:
    """W(L) for each z; returns shape (len(zs), 4) = (W11, W12, W21, W22)."""
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    if q0.max_abs == 0.0:
        out = np.zeros((zs.size, 4), complex)
        out[:, 0] = out[:, 3] = 1.0
        return out
    if q0.edge_ratio() >= 1e-8:
        raise DecayError(f"initial data does not decay at the grid ends (ratio {q0.edge_ratio():.2e})")
    if tol <= 0:
        raise ValueError("tol must be positive")
    counts = np.array([_step_count(q0, z, tol) for z in zs])
    spline = None
    out = np.empty((zs.size, 4), complex)
    x0 = float(q0.xs[0])
    span = float(q0.xs[-1] - q0.xs[0])
    for n in np.unique(counts):
        sel = counts == n
        h = span / n
        if n == len(q0) - 1:
            qn = np.asarray(q0.vals)
        else:
            spline = spline or q0.spline()
            qn = spline(x0 + h * np.arange(n + 1))
        spline = spline or q0.spline()
        qm = spline(x0 + h * (np.arange(n) + 0.5))
        out[sel] = kernels.transfer(zs[sel], x0, h, qn, qm)
    return out


def jost_transfer(q0: ComplexGrid1D, z: float, tol: float = 1e-10) -> tuple[complex, complex]:
    """Transition entries (a(z), b(z)) for real z."""
    w = transfer_matrix(q0, [z], tol)[0]
    return complex(w[3]), complex(-w[2])


def five_point_derivative(vals: np.ndarray, h: float) -> np.ndarray:
    """First derivative: 5-point centred stencil inside, 5-point one-sided at the ends."""
    v = np.asarray(vals)
    n = v.size
    if n < 5:
        return np.gradient(v, h)
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    return d


@dataclass(frozen=True)
class ScatteringData:
    """Scattering data on a uniform real z-grid.

    ``r_vals`` is the reflection coefficient in the orientation used by all
    long-time formulas; ``F = ln(1 - |r|^2)``.
    """

    zs: np.ndarray
    a_vals: np.ndarray
    b_vals: np.ndarray
    r_vals: np.ndarray
    F_vals: np.ndarray
    dF_vals: np.ndarray
    d2F_vals: np.ndarray
    dr_vals: np.ndarray
    breve_a_vals: np.ndarray
    breve_b_vals: np.ndarray
    tol: float = 1e-10
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        zs = np.asarray(self.zs, float)
        if zs.ndim != 1 or zs.size < 5:
            raise ValueError("need at least 5 z points")
        dz = np.diff(zs)
        if np.any(dz <= 0) or np.max(np.abs(dz - dz.mean())) > 1e-9 * max(1.0, abs(dz.mean())):
            raise ValueError("z grid must be uniform and increasing")
        if np.max(np.abs(self.r_vals)) >= 1.0:
            raise ValueError("sup |r| must be < 1 for defocusing data")

    @property
    def dz(self) -> float:
        return float((self.zs[-1] - self.zs[0]) / (self.zs.size - 1))

    @property
    def r_ratio_vals(self) -> np.ndarray:
        """b_breve / a, the ratio as first defined from the transition matrix."""
        return self.breve_b_vals / self.a_vals

    @property
    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(np.abs(self.a_vals) ** 2 - np.abs(self.b_vals) ** 2 - 1.0)))

    @cached_property
    def _r_spline(self) -> CubicSpline:
        return CubicSpline(self.zs, self.r_vals)

    @cached_property
    def _dr_spline(self):
        # derivative of the r interpolant itself, so r and r' stay consistent
        # under integration by parts; dr_vals (5-point) is the tabulated check
        return self._r_spline.derivative()

    @cached_property
    def F_spline(self) -> CubicSpline:
        return CubicSpline(self.zs, self.F_vals)

    @cached_property
    def F_prime_poly(self):
        """Exact derivative of the F interpolant (keeps F, F', F'' mutually consistent)."""
        return self.F_spline.derivative(1)

    @cached_property
    def F_second_poly(self):
        return self.F_spline.derivative(2)

    @cached_property
    def dF_spline(self) -> CubicSpline:
        return CubicSpline(self.zs, self.dF_vals)

    @cached_property
    def d2F_spline(self) -> CubicSpline:
        return CubicSpline(self.zs, self.d2F_vals)

    def _masked(self, spline: CubicSpline, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        inside = (u >= self.zs[0]) & (u <= self.zs[-1])
        return np.where(inside, spline(np.clip(u, self.zs[0], self.zs[-1])), 0.0)

    def contains(self, z0: float) -> bool:
        return bool(self.zs[0] <= z0 <= self.zs[-1])

    def r(self, u):
        """Cubic interpolant of r; zero outside the grid (r has decayed there)."""
        return self._masked(self._r_spline, u)

    def dr(self, u):
        return self._masked(self._dr_spline, u)

    def F(self, u):
        return np.real(self._masked(self.F_spline, u))

    def dF(self, u):
        return np.real(self._masked(self.dF_spline, u))

    def q_r(self, u):
        r = self.r(u)
        return r / (1.0 - np.abs(r) ** 2)

    def dq_r(self, u):
        r = self.r(u)
        return (self.dr(u) + r * r * np.conj(self.dr(u))) / (1.0 - np.abs(r) ** 2) ** 2

    def to_dict_meta(self) -> dict:
        return {
            "z_min": float(self.zs[0]),
            "z_max": float(self.zs[-1]),
            "n_z": int(self.zs.size),
            "tol": self.tol,
            "unitarity_residual": self.unitarity_residual,
            "backend": kernels.BACKEND,
            **self.meta,
        }


def reflection_grid(q0: ComplexGrid1D, zs: Sequence[float] | np.ndarray, tol: float = 1e-10,
                    meta: dict | None = None) -> ScatteringData:
    zs = np.asarray(zs, dtype=float)
    w = transfer_matrix(q0, zs, tol)
    breve_a, breve_b = w[:, 0], -w[:, 1]
    b, a = -w[:, 2], w[:, 3]
    r = -b / breve_a
    F = np.log1p(-np.abs(r) ** 2)
    h = float((zs[-1] - zs[0]) / (zs.size - 1))
    dF = five_point_derivative(F, h)
    d2F = five_point_derivative(dF, h)
    dr = five_point_derivative(r, h)
    info = {"x_min": float(q0.xs[0]), "x_max": float(q0.xs[-1]), "n_x": len(q0)}
    info.update(meta or {})
    return ScatteringData(zs, a, b, r, F, dF, d2F, dr, breve_a, breve_b, tol, info)


def local_nu_omega(sd: ScatteringData, z0: float) -> tuple[float, float]:
    """nu(z0) = -ln(1 - |r(z0)|^2) / (2 pi) and omega(z0) = arg r(z0)."""
    if not sd.contains(z0):
        raise ValueError(f"z0={z0} outside the scattering grid [{sd.zs[0]}, {sd.zs[-1]}]")
    r0 = complex(sd.r(z0))
    nu = -math.log1p(-abs(r0) ** 2) / (2 * math.pi)
    omega = math.atan2(r0.imag, r0.real) if r0 != 0 else 0.0
    if omega == -math.pi:
        omega = math.pi
    return max(nu, 0.0), omega


_CSV_HEADER = "z,re_a,im_a,re_b,im_b,re_r,im_r,F,dF,d2F"


def write_scattering(sd: ScatteringData, csv_path: str | Path, json_path: str | Path | None = None) -> None:
    cols = np.column_stack([
        sd.zs, sd.a_vals.real, sd.a_vals.imag, sd.b_vals.real, sd.b_vals.imag,
        sd.r_vals.real, sd.r_vals.imag, sd.F_vals, np.real(sd.dF_vals), np.real(sd.d2F_vals),
    ])
    np.savetxt(csv_path, cols, delimiter=",", header=_CSV_HEADER, comments="", fmt="%.17g")
    if json_path is not None:
        Path(json_path).write_text(json.dumps(sd.to_dict_meta(), indent=2))


def read_scattering(csv_path: str | Path, json_path: str | Path | None = None) -> ScatteringData:
    """Rebuild ScatteringData from the CSV table (r' and the breve entries are re-derived)."""
    arr = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    zs = arr[:, 0]
    a = arr[:, 1] + 1j * arr[:, 2]
    b = arr[:, 3] + 1j * arr[:, 4]
    r = arr[:, 5] + 1j * arr[:, 6]
    meta = json.loads(Path(json_path).read_text()) if json_path else {}
    h = float((zs[-1] - zs[0]) / (zs.size - 1))
    # on the real line a_breve = conj(a) and b_breve = conj(b)
    return ScatteringData(zs, a, b, r, arr[:, 7], arr[:, 8], arr[:, 9], five_point_derivative(r, h),
                          np.conj(a), np.conj(b), float(meta.get("tol", 1e-10)), meta)
