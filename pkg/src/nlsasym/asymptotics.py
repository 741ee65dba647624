"""Leading-order long-time formula and the assembled prediction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .specfun import complex_gamma

if TYPE_CHECKING:
    from .rhp import LocalParams

__all__ = ["beta_value", "theta_at_z0", "q_leading", "predict", "AsymptoticPrediction", "write_predictions"]


class ConsistencyError(ValueError):
    pass


def beta_value(nu: float, r_abs: float) -> complex:
    """beta with |beta|^2 = 2 nu and arg beta = pi/4 - nu ln 2 - arg Gamma(-i nu)."""
    if not 0.0 <= r_abs < 1.0:
        raise ValueError("need 0 <= |r| < 1")
    F = math.log1p(-r_abs * r_abs)
    if abs(nu + F / (2 * math.pi)) > 1e-12 * max(1.0, abs(nu)):
        raise ConsistencyError(f"nu={nu} inconsistent with |r|={r_abs}")
    if r_abs == 0.0:
        return 0j
    arg = math.pi / 4 + math.log(2.0) * F / (2 * math.pi) - np.angle(complex_gamma(1j * F / (2 * math.pi)))
    return complex(math.sqrt(2 * nu) * np.exp(1j * arg))


def theta_at_z0(z0: float) -> float:
    """theta(z0; z0) for t theta(z; x, t) = 4 t z^2 + x z at x = -4 t z0."""
    return -2.0 * z0 * z0


def q_leading(lp: "LocalParams", x: float, t: float) -> complex:
    """Leading term e^{-i omega} e^{-2it theta} c^{-2} (2 sqrt t)^{-2 i nu} beta / (2 sqrt t)."""
    if t <= 0:
        raise ValueError("t must be positive")
    if lp.beta == 0:
        return 0j
    phase = np.exp(-1j * lp.omega) * np.exp(-2j * t * theta_at_z0(lp.z0))
    scale = np.exp(-2j * lp.nu * math.log(2.0 * math.sqrt(t)))
    return complex(phase * lp.c0 ** (-2) * scale * 0.5 * lp.beta / math.sqrt(t))


@dataclass(frozen=True)
class AsymptoticPrediction:
    x: float
    t: float
    z0: float
    q_leading: complex
    alpha1_term: complex
    order_flag: str

    @property
    def value(self) -> complex:
        return self.q_leading + (self.alpha1_term if self.order_flag == "with_corrections" else 0j)


def predict(lp: "LocalParams", aset, x: float, t: float, with_corrections: bool = True) -> AsymptoticPrediction:
    """q0 term plus alpha_1 ln t / t (alpha_1 assembled from ``aset`` at this t)."""
    if t < 1:
        raise ValueError("predict requires t >= 1")
    z0 = -x / (4.0 * t)
    if abs(z0 - lp.z0) > 1e-9 * max(1.0, abs(z0)):
        raise ValueError("local parameters were computed at a different stationary point")
    q0 = q_leading(lp, x, t)
    corr = 0j
    if with_corrections and aset is not None:
        from .alpha import assemble_alpha1

        corr = assemble_alpha1(aset, lp, t) * math.log(t) / t
    return AsymptoticPrediction(x, t, z0, q0, corr, "with_corrections" if with_corrections else "leading")


def write_predictions(preds: Iterable[AsymptoticPrediction], path: str | Path) -> None:
    rows = [(p.x, p.t, p.value.real, p.value.imag, abs(p.value)) for p in preds]
    np.savetxt(path, np.array(rows, dtype=float).reshape(-1, 5), delimiter=",",
               header="x,t,re_q,im_q,abs_q", comments="", fmt="%.17g")
