"""Quadrature rules for polar integrals with a Gaussian-oscillatory radial kernel.

The radial integrals have the form

    int_0^R e^{i Omega rho^2} g(rho) d rho,   Im Omega >= 0,

with g smooth.  Near the origin we use plain Gauss-Legendre in rho.  Further
out we switch to w = rho^2 and a Filon-type rule: on each panel g is expanded
in Legendre polynomials and the moments int P_k(x) e^{i kappa x} dx =
2 i^k j_k(kappa) are exact, so the panels only have to resolve g, not the
oscillation.  Panel widths keep |Im kappa| <= 5 so the moments stay well
conditioned.

All rules are returned as (nodes, weights) so one rule serves many integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_legendre, spherical_jn

__all__ = ["RadialRule", "radial_rule", "graded_rule", "PolarRule", "polar_rule", "decay_radius_sq"]

_N = 16
_X, _W = np.polynomial.legendre.leggauss(_N)
_K = np.arange(_N)
# c_k = sum_j _T[k, j] g(x_j) gives the exact Legendre coefficients for degree < _N
_T = (2 * _K[:, None] + 1) / 2.0 * _W[None, :] * eval_legendre(_K[:, None], _X[None, :])
_IK = (1j) ** _K

DECAY_EXP = 37.0  # e^{-37} ~ 1e-16
MAX_IM_KAPPA = 5.0


def decay_radius_sq(Omega: complex, cap: float = math.inf) -> float:
    """w = rho^2 beyond which |e^{i Omega w}| < e^{-DECAY_EXP}, capped."""
    im = Omega.imag
    if im <= 0:
        if not math.isfinite(cap):
            raise ValueError("no Gaussian damping and no finite cutoff")
        return cap
    return min(DECAY_EXP / im, cap)


@dataclass(frozen=True)
class RadialRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


def _filon_weights(Omega: complex, w0: float, w1: float) -> tuple[np.ndarray, np.ndarray]:
    c, h = 0.5 * (w0 + w1), 0.5 * (w1 - w0)
    kappa = Omega * h
    mom = 2.0 * _IK * spherical_jn(_K, kappa)
    wts = h * np.exp(1j * Omega * c) * (mom @ _T)
    return c + h * _X, wts


def radial_rule(Omega: complex, rho_max: float = math.inf, scale: float = 0.1,
                rho_data: float = math.inf, near_phase: float = 8.0, growth: float = 1.0,
                n_near: int = 4) -> RadialRule:
    """Rule for int_0^{rho_max} e^{i Omega rho^2} g(rho) d rho (the kernel is built in).

    ``scale`` is the rho-length over which g varies for rho < ``rho_data``;
    beyond that g is assumed smooth on a logarithmic scale.  ``growth``
    bounds panel width relative to the panel's left end in w.
    """
    w_end = decay_radius_sq(complex(Omega), rho_max**2)
    absO = max(abs(Omega), 1e-300)
    rho1 = min(math.sqrt(near_phase / absO), math.sqrt(w_end))
    edges = np.linspace(0.0, rho1, n_near + 1)
    a, b = edges[:-1, None], edges[1:, None]
    r_near = (0.5 * (a + b) + 0.5 * (b - a) * _X).ravel()
    w_near = (0.5 * (b - a) * _W).ravel() * np.exp(1j * Omega * r_near**2)
    nodes, weights = [r_near], [w_near]
    w = rho1 * rho1
    im = max(Omega.imag, 0.0)
    while w < w_end * (1 - 1e-14):
        step = growth * w
        if w < rho_data * rho_data:
            step = min(step, 2.0 * math.sqrt(w) * scale + scale * scale)
        if im > 0:
            step = min(step, 2.0 * MAX_IM_KAPPA / im)
        w1 = min(w + step, w_end)
        wn, wt = _filon_weights(complex(Omega), w, w1)
        rn = np.sqrt(wn)
        nodes.append(rn)
        weights.append(wt / (2.0 * rn))
        w = w1
    return RadialRule(np.concatenate(nodes), np.concatenate(weights))


def graded_rule(lo: float, hi: float, graded: str = "lo", min_width: float = 1e-6,
                ratio: float = 0.25, n: int = 8, n_uniform: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre on panels shrinking geometrically toward ``lo``, ``hi`` or both.

    The innermost ``min_width`` next to a graded end is left out; the
    integrands vanish there at least linearly.
    """
    length = hi - lo
    half = length / 2 if graded == "both" else length
    ladder = []
    d = half * ratio
    while d > min_width:
        ladder.append(d)
        d *= ratio
    ladder = sorted(ladder + [min_width]) if graded != "none" else []
    core = np.linspace(ladder[-1] if ladder else 0.0, half, n_uniform + 1)
    one_side = np.concatenate([ladder[:-1], core]) if ladder else core
    if graded in ("lo", "none"):
        edges = lo + one_side
    elif graded == "hi":
        edges = hi - one_side[::-1]
    elif graded == "both":
        edges = np.concatenate([lo + one_side, hi - one_side[::-1][1:]])
    else:
        raise ValueError(f"graded must be lo, hi, both or none, not {graded!r}")
    x, w = np.polynomial.legendre.leggauss(n)
    a, b = edges[:-1, None], edges[1:, None]
    return (0.5 * (a + b) + 0.5 * (b - a) * x).ravel(), (0.5 * (b - a) * w).ravel()


@dataclass(frozen=True)
class PolarRule:
    rho: np.ndarray
    phi: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.rho.size

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


def polar_rule(phi_lo: float, phi_hi: float, omega_of_phi, rho_max_of_phi, graded: str = "lo",
               phi_min: float = 1e-6, scale: float = 0.1, rho_data: float = math.inf,
               n_phi: int = 8) -> PolarRule:
    """Tensor-like rule for int dphi int d rho e^{i Omega(phi) rho^2} g(rho, phi).

    The kernel e^{i Omega rho^2} is folded into the weights.
    """
    ph, wph = graded_rule(phi_lo, phi_hi, graded=graded, min_width=phi_min, n=n_phi)
    R, P, W = [], [], []
    for p, wp in zip(ph, wph):
        rule = radial_rule(complex(omega_of_phi(p)), rho_max_of_phi(p), scale=scale, rho_data=rho_data)
        R.append(rule.nodes)
        P.append(np.full(rule.nodes.size, p))
        W.append(wp * rule.weights)
    return PolarRule(np.concatenate(R), np.concatenate(P), np.concatenate(W))
