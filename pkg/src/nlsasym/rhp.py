"""The scalar Riemann-Hilbert problem on the cut (-inf, z0].

delta(z) = exp(chi(z)) with chi(z) = (1/2 pi i) int_{-inf}^{z0} F(s) / (s - z) ds,
F = ln(1 - |r|^2), jumps by delta_+ = delta_- (1 - |r|^2) across the cut.  Near
z0 it behaves like e^{chi_reg} (z - z0)^{-i F(z0) / 2 pi}, so

    f(z) = c(z0) delta(z) (z - z0)^{i F(z0) / 2 pi},
    c(z0) = exp((1/2 pi i) int ln(z0 - s) F'(s) ds) = exp(-chi_reg),

is regular with f(z0) = 1.  Integrating by parts gives the form used for
vectorised evaluation,

    chi(z)  = (F(z0) / 2 pi i) Log(z - z0) - L(z) / 2 pi i,
    log f   = (L(z0) - L(z)) / 2 pi i,      L(z) = int F'(s) Log(z - s) ds.

F vanishes to the left of the scattering grid, so every integral starts at
the first grid point S.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .asymptotics import beta_value
from .scattering import ScatteringData, local_nu_omega

__all__ = [
    "CutError",
    "TailDecayError",
    "QuadratureError",
    "CZ0ConsistencyError",
    "LocalParams",
    "log_moment",
    "chi",
    "chi_gauss",
    "delta",
    "delta_boundary",
    "jump_residual",
    "chi_reg",
    "cz0_integral",
    "cz0_forms",
    "local_params",
    "f_factor",
    "f_log",
    "f_expansion",
    "fit_holder",
    "write_delta_grid",
]

TWO_PI_I = 2j * math.pi
_GL4 = np.polynomial.legendre.leggauss(4)
_GL8 = np.polynomial.legendre.leggauss(8)
_CHUNK = 4096


class CutError(ValueError):
    """Evaluation requested on the branch cut (-inf, z0]."""


class TailDecayError(ValueError):
    """F does not vanish at the left end of the scattering grid."""


class QuadratureError(RuntimeError):
    pass


class CZ0ConsistencyError(RuntimeError):
    """The two integral forms of c(z0) disagree."""


def _check_setup(sd: ScatteringData, z0: float) -> float:
    if not sd.contains(z0):
        raise ValueError(f"z0={z0} outside the scattering grid")
    S = float(sd.zs[0])
    if abs(sd.F_vals[0]) > 1e-8:
        raise TailDecayError(f"|F| = {abs(sd.F_vals[0]):.2e} at the left grid end")
    return S


def _check_off_cut(z: np.ndarray, z0: float, allow_z0: bool = False) -> None:
    on = (z.imag == 0.0) & (z.real <= z0)
    if allow_z0:
        on &= z.real != z0
    if np.any(on):
        raise CutError("point on the branch cut (-inf, z0]")


def _edges(sd: ScatteringData, z0: float) -> np.ndarray:
    inner = sd.zs[sd.zs < z0 - 1e-12 * max(1.0, abs(z0))]
    return np.append(inner, z0)


def _gl_nodes(edges: np.ndarray, rule) -> tuple[np.ndarray, np.ndarray]:
    x, w = rule
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (0.5 * (a + b) + half * x).ravel(), (half * w).ravel()


def _phi1(w):
    # w (Log w - 1), continuous at w = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(w == 0, 0.0, w * (np.log(w) - 1.0))


def _phi2(w):
    # w^2/2 (Log w - 1/2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(w == 0, 0.0, 0.5 * w * w * (np.log(w) - 0.5))


def _log_safe(w):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(w == 0, 0.0, np.log(np.where(w == 0, 1.0, w)))


def log_moment(sd: ScatteringData, z0: float, z) -> np.ndarray:
    """L(z) = int_S^{z0} F'(s) Log(z - s) ds for z off the cut (z = z0 allowed).

    Gauss-Legendre on the grid knots after removing the linear Taylor part of
    F' at the nearest cut point, whose contribution is integrated exactly.
    The knot interval holding that point is split there and refined.
    """
    S = _check_setup(sd, z0)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_off_cut(zz, z0, allow_z0=True)
    dF, d2F = sd.F_prime_poly, sd.F_second_poly
    edges = _edges(sd, z0)
    s_nodes, s_w = _gl_nodes(edges, _GL4)
    g_nodes = dF(s_nodes)
    out = np.empty(zz.shape, complex)
    x8, w8 = _GL8
    nb = len(_GL4[0])
    for lo in range(0, zz.size, _CHUNK):
        zc = zz[lo:lo + _CHUNK]
        xc = np.clip(zc.real, S, z0)
        g1, g2 = dF(xc), d2F(xc)
        # remainder on the shared nodes
        rem = (g_nodes[None, :] - g1[:, None] - g2[:, None] * (s_nodes[None, :] - xc[:, None]))
        rem = rem * _log_safe(zc[:, None] - s_nodes[None, :])
        total = rem @ s_w
        # replace the interval containing xc by two refined halves
        k = np.clip(np.searchsorted(edges, xc, side="right") - 1, 0, edges.size - 2)
        idx = k[:, None] * nb + np.arange(nb)[None, :]
        total -= np.sum(rem[np.arange(zc.size)[:, None], idx] * s_w[idx], axis=1)
        for a, b in ((edges[k], xc), (xc, edges[k + 1])):
            half = 0.5 * (b - a)
            s = 0.5 * (a + b)[:, None] + half[:, None] * x8[None, :]
            r = (dF(s) - g1[:, None] - g2[:, None] * (s - xc[:, None])) * _log_safe(zc[:, None] - s)
            total += half * (r @ w8)
        # exact part: int (g1 + g2 (s - xc)) Log(z - s) ds
        G1 = _phi1(zc - S) - _phi1(zc - z0)
        G2 = (_phi2(zc - z0) - _phi2(zc - S)) + (zc - xc) * G1
        out[lo:lo + _CHUNK] = total + g1 * G1 + g2 * G2
    return out if np.ndim(z) else out[0]


def chi_gauss(sd: ScatteringData, z0: float, z):
    """Vectorised chi(z) via the integrated-by-parts form."""
    zz = np.asarray(z, dtype=complex)
    _check_off_cut(np.atleast_1d(zz), z0)
    F0 = float(sd.F_spline(z0))
    return (F0 / TWO_PI_I) * np.log(zz - z0) - log_moment(sd, z0, zz) / TWO_PI_I


def _raise_on_failure(caught) -> None:
    # roundoff notices at the 1e-13 level are expected; anything else is a failure
    for w in caught:
        msg = str(w.message)
        if issubclass(w.category, IntegrationWarning) and "roundoff" not in msg:
            raise QuadratureError(msg)


def _quad_complex(fun, a: float, b: float, points=None, limit: int = 400) -> complex:
    if b <= a:
        return 0.0j
    pts = None
    if points is not None:
        pts = [p for p in points if a < p < b] or None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        val, _ = quad(fun, a, b, points=pts, limit=limit, epsabs=1e-13, epsrel=1e-12, complex_func=True)
    _raise_on_failure(caught)
    return complex(val)


def _chi_quad_one(sd: ScatteringData, z0: float, z: complex, S: float) -> complex:
    F, dF, d2F = sd.F_spline, sd.F_prime_poly, sd.F_second_poly
    xc = min(max(z.real, S), z0)
    f0, f1, f2 = float(F(xc)), float(dF(xc)), float(d2F(xc))

    def rem(s):
        d = s - xc
        return (float(F(s)) - f0 - f1 * d - 0.5 * f2 * d * d) / (s - z)

    split = z0 - 1.0
    val = 0.0j
    for a, b in ((S, split), (max(S, split), z0)):
        val += _quad_complex(rem, a, b, points=[xc])
    P = f0 + f1 * (z - xc) + 0.5 * f2 * (z - xc) ** 2
    dP = f1 + f2 * (z - xc)
    lg = np.log(z - z0) - np.log(z - S)
    val += P * lg + dP * (z0 - S) + 0.25 * f2 * ((z0 - z) ** 2 - (S - z) ** 2)
    return val / TWO_PI_I


def chi(sd: ScatteringData, z0: float, z, method: str = "quad"):
    """chi(z) in Cauchy form.

    ``method="quad"`` uses adaptive Gauss-Kronrod on F minus its quadratic
    Taylor polynomial at the nearest cut point (split at z0 - 1), with the
    polynomial part done in closed form.  ``method="gauss"`` is chi_gauss.
    """
    if method == "gauss":
        return chi_gauss(sd, z0, z)
    if method != "quad":
        raise ValueError(f"unknown method {method!r}")
    S = _check_setup(sd, z0)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_off_cut(zz, z0)
    out = np.array([_chi_quad_one(sd, z0, complex(v), S) for v in zz])
    return out if np.ndim(z) else complex(out[0])


def delta(sd: ScatteringData, z0: float, z, method: str = "gauss"):
    return np.exp(chi(sd, z0, z, method=method))


def delta_boundary(sd: ScatteringData, z0: float, s, side: int,
                   eps: tuple[float, ...] = (1e-3, 5e-4, 2.5e-4), method: str = "quad"):
    """delta_+ (side=+1) or delta_- (side=-1) on the cut by Richardson extrapolation in eps."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    eps = np.asarray(eps, dtype=float)
    vals = np.array([chi(sd, z0, s + side * 1j * e, method=method) for e in eps])  # (neps, ns)
    # Neville extrapolation to eps = 0
    table = [v for v in vals]
    for lvl in range(1, len(eps)):
        table = [
            (eps[j + lvl] * table[j] - eps[j] * table[j + 1]) / (eps[j + lvl] - eps[j])
            for j in range(len(table) - 1)
        ]
    return np.exp(table[0])


def jump_residual(sd: ScatteringData, z0: float, s, method: str = "quad") -> np.ndarray:
    """|delta_+/delta_- - (1 - |r(s)|^2)| at points s < z0."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    ratio = delta_boundary(sd, z0, s, +1, method=method) / delta_boundary(sd, z0, s, -1, method=method)
    return np.abs(ratio - (1.0 - np.abs(sd.r(s)) ** 2))


def chi_reg(sd: ScatteringData, z0: float) -> complex:
    """Finite part of chi at z0: chi(z) = chi_reg + (F(z0)/2 pi i) Log(z - z0) + o(1)."""
    S = _check_setup(sd, z0)
    F, dF = sd.F_spline, sd.F_prime_poly
    F0, F1 = float(F(z0)), float(dF(z0))

    def rem(s):
        if s == z0:
            return 0.0
        return (float(F(s)) - F0 - F1 * (s - z0)) / (s - z0)

    split = z0 - 1.0
    val = sum(_quad_complex(rem, a, b) for a, b in ((S, split), (max(S, split), z0)))
    val += -F0 * math.log(z0 - S) + F1 * (z0 - S)
    return val / TWO_PI_I


def cz0_forms(sd: ScatteringData, z0: float) -> tuple[complex, complex]:
    """c(z0) from the log-weighted F' integral and from the F'' by-parts form."""
    S = _check_setup(sd, z0)
    if z0 <= S:
        return 1.0 + 0j, 1.0 + 0j
    dF = sd.dF_spline
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        direct, _ = quad(lambda s: float(dF(s)), S, z0, weight="alg-logb", wvar=(0.0, 0.0), limit=400)
    _raise_on_failure(caught)
    d2F = sd.d2F_spline

    def g(s):
        d = z0 - s
        return float(np.real(d2F(s))) * (math.log(d) - 1.0) * d if d > 0 else 0.0

    split = z0 - 1.0
    byparts = sum(_quad_complex(g, a, b).real for a, b in ((S, split), (max(S, split), z0)))
    d = z0 - S
    byparts += d * (math.log(d) - 1.0) * float(np.real(dF(S)))
    return complex(np.exp(direct / TWO_PI_I)), complex(np.exp(byparts / TWO_PI_I))


def cz0_integral(sd: ScatteringData, z0: float, check_tol: float = 1e-5) -> complex:
    """c(z0); raises CZ0ConsistencyError if the by-parts form disagrees beyond check_tol."""
    direct, byparts = cz0_forms(sd, z0)
    if abs(direct - byparts) > check_tol:
        raise CZ0ConsistencyError(f"c(z0) forms differ by {abs(direct - byparts):.2e}")
    return direct


@dataclass(frozen=True)
class LocalParams:
    """Quantities attached to a stationary point z0."""

    z0: float
    r0: complex
    dr0: complex
    nu: float
    omega: float
    F0: float
    dF0: float
    c0: complex
    beta: complex
    A2_0: complex
    A2_m1: complex
    B1_0: complex
    B1_1: complex
    c1: complex
    c3: complex
    c4: complex
    c6: complex
    q_r0: complex
    dq_r0: complex

    @property
    def a(self) -> complex:
        """Parabolic cylinder parameter a = (1 + i |beta|^2) / 2."""
        return 0.5 * (1.0 + 1j * abs(self.beta) ** 2)

    @property
    def region_consts(self) -> dict[int, complex]:
        return {1: self.c1, 3: self.c3, 4: self.c4, 6: self.c6}

    @property
    def c22(self) -> complex:
        return -math.sqrt(2.0) * np.exp(-0.25j * math.pi) * (self.a + 0.5) * self.c1 * np.exp(-1j * self.omega) / 2.0

    def to_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = [v.real, v.imag] if isinstance(v, complex) else v
        return out


def region_factors(beta: complex, F0: float) -> dict[str, complex]:
    """A_2^(0), A_2^(-1), B_1^(0), B_1^(1) and c1, c3, c4, c6 as functions of beta and F(z0)."""
    one_m = math.exp(F0)  # 1 - |r(z0)|^2
    ph = np.exp(-1j * math.log(2.0) * F0 / (4 * math.pi))
    A20 = one_m ** (-1 / 8) * np.exp(-0.75j * math.pi) * ph / math.sqrt(2.0)
    A2m1 = one_m ** (3 / 8) * np.exp(0.25j * math.pi) * ph / math.sqrt(2.0)
    # beta^2 B^2 is finite even at beta = 0
    c6 = one_m ** (-1 / 4) / ph**2
    c3 = one_m ** (3 / 4) / ph**2
    if beta != 0:
        B10 = one_m ** (-1 / 8) / ph / beta
        B11 = one_m ** (3 / 8) / ph / beta
    else:
        B10 = B11 = complex("nan")
    return {
        "A2_0": complex(A20), "A2_m1": complex(A2m1), "B1_0": complex(B10), "B1_1": complex(B11),
        "c1": complex(beta**2 * A20**2), "c4": complex(beta**2 * A2m1**2), "c6": complex(c6), "c3": complex(c3),
    }


def local_params(sd: ScatteringData, z0: float, check_tol: float = 1e-5) -> LocalParams:
    nu, omega = local_nu_omega(sd, z0)
    r0 = complex(sd.r(z0))
    F0 = math.log1p(-abs(r0) ** 2)
    beta = beta_value(nu, abs(r0))
    c0 = cz0_integral(sd, z0, check_tol)
    return LocalParams(
        z0=float(z0), r0=r0, dr0=complex(sd.dr(z0)), nu=nu, omega=omega, F0=F0, dF0=float(sd.dF(z0)),
        c0=c0, beta=beta, q_r0=complex(sd.q_r(z0)), dq_r0=complex(sd.dq_r(z0)), **region_factors(beta, F0),
    )


def f_log(sd: ScatteringData, z0: float, z):
    """log f(z; z0), normalised so that f(z0) = 1."""
    zz = np.asarray(z, dtype=complex)
    L0 = log_moment(sd, z0, z0 + 0j)
    return (L0 - log_moment(sd, z0, zz)) / TWO_PI_I


def f_factor(lp: LocalParams, sd: ScatteringData, z, power: int = 1):
    """f(z; z0)**power for arg(z - z0) in (-pi, pi)."""
    zz = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(zz)
    if np.any((flat.imag == 0) & (flat.real < lp.z0)):
        raise CutError("arg(z - z0) = +-pi is outside the domain of f")
    return np.exp(power * f_log(sd, lp.z0, zz))


def f_expansion(lp: LocalParams, z, sign: int):
    """exp(+-(F'(z0)/pi i)(z - z0)[Log(z - z0) - 1]), the model for f^{+-2}."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    w = np.asarray(z, dtype=complex) - lp.z0
    flat = np.atleast_1d(w)
    if np.any((flat.imag == 0) & (flat.real < 0)):
        raise CutError("arg(z - z0) = +-pi is outside the domain of f")
    return np.exp(sign * lp.dF0 / (1j * math.pi) * _phi1(w))


def fit_holder(rhos: np.ndarray, devs: np.ndarray) -> tuple[float, float]:
    """Least-squares exponent p and constant mu in devs ~ mu * rho**p."""
    rhos = np.asarray(rhos, float)
    devs = np.asarray(devs, float)
    p, logmu = np.polyfit(np.log(rhos), np.log(devs), 1)
    return float(p), float(math.exp(logmu))


def write_delta_grid(sd: ScatteringData, z0: float, path: str | Path, re_lim=(-3.0, 3.0),
                     im_lim=(-2.0, 2.0), n: int = 41) -> None:
    """CSV dump of delta on a rectangular grid (points on the cut are skipped)."""
    re = np.linspace(*re_lim, n)
    im = np.linspace(*im_lim, n)
    Z = (re[None, :] + 1j * im[:, None]).ravel()
    Z = Z[~((Z.imag == 0) & (Z.real <= z0))]
    d = delta(sd, z0, Z)
    np.savetxt(path, np.column_stack([Z.real, Z.imag, d.real, d.imag]), delimiter=",",
               header="re_z,im_z,re_delta,im_delta", comments="", fmt="%.17g")
