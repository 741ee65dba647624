"""Linear Schrodinger i q_t + q_xx = 0: exact solution, Stokes split and long-time expansion.

Transform convention: q_hat(xi) = int q0(x) e^{2 i x xi} dx, so that

    q(x, t) = (1/pi) int q_hat(z) e^{-2 i t theta(z)} dz,  theta = 2 z^2 - 4 z z0,  z0 = -x / 4t.

Two coefficient sets are provided for the expansion in powers of t^{-1/2}:
``"literal"`` evaluates the phi-integral formulas for beta_k, gamma_k literally,
``"stationary_phase"`` uses the exact constants of the Gaussian-moment
expansion (beta_k = 0, 2i gamma_k = Gamma(k + 1/2) / ((2k)! pi (4i)^{k+1/2})).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import factorial2, gamma

from . import oscquad
from .grid import ComplexGrid1D, DecayError

__all__ = [
    "fourier_hat",
    "qhat_derivs",
    "inverse_fourier",
    "fft_evolution",
    "exact_evolution",
    "gaussian_exact",
    "beta_gamma_constants",
    "LinearExpansion",
    "build_expansion",
    "linear_expansion",
    "linear_prediction",
    "stokes_split",
]

_CHUNK = 2048


def _check_decay(q0: ComplexGrid1D) -> None:
    if q0.max_abs > 0 and q0.edge_ratio() >= 1e-10:
        raise DecayError(f"initial data does not decay at the grid ends (ratio {q0.edge_ratio():.2e})")


def qhat_derivs(q0: ComplexGrid1D, xi, order: int = 0) -> np.ndarray:
    """Rows j = 0..order of q_hat^{(j)}(xi) = int (2ix)^j q0(x) e^{2ix xi} dx (trapezoid)."""
    _check_decay(q0)
    xi = np.atleast_1d(np.asarray(xi, float))
    x = np.asarray(q0.xs)
    w = np.full(x.size, q0.dx)
    w[0] = w[-1] = q0.dx / 2
    moments = np.array([(2j * x) ** j * np.asarray(q0.vals) * w for j in range(order + 1)])
    out = np.empty((order + 1, xi.size), complex)
    for s in range(0, xi.size, _CHUNK):
        ph = np.exp(2j * np.outer(x, xi[s:s + _CHUNK]))
        out[:, s:s + _CHUNK] = moments @ ph
    return out


def fourier_hat(q0: ComplexGrid1D, xi):
    vals = qhat_derivs(q0, xi, 0)[0]
    return complex(vals[0]) if np.ndim(xi) == 0 else vals


def inverse_fourier(qhat, x, z_max: float = 12.0, n: int = 4801) -> np.ndarray:
    """q(x) = (1/pi) int q_hat(z) e^{-2ixz} dz for a callable q_hat (trapezoid on [-z_max, z_max])."""
    z = np.linspace(-z_max, z_max, n)
    qz = np.asarray(qhat(z))
    w = np.full(n, z[1] - z[0])
    w[0] = w[-1] = w[0] / 2
    x = np.atleast_1d(np.asarray(x, float))
    return (np.exp(-2j * np.outer(x, z)) @ (qz * w)) / math.pi


def fft_evolution(q0: ComplexGrid1D, t: float) -> ComplexGrid1D:
    """Exact Fourier-multiplier evolution on the periodic box of q0 (e^{-i k^2 t})."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    n = len(q0)
    k = 2 * math.pi * np.fft.fftfreq(n, d=q0.dx)
    out = np.fft.ifft(np.fft.fft(q0.vals) * np.exp(-1j * k * k * t))
    return ComplexGrid1D(q0.xs, out)


def gaussian_exact(x, t: float, amplitude: float = 1.0):
    """Closed form for q0 = A e^{-x^2}: A e^{-x^2 / (1 + 4it)} / sqrt(1 + 4it)."""
    s = 1 + 4j * t
    return amplitude * np.exp(-np.asarray(x) ** 2 / s) / np.sqrt(s)


def exact_evolution(q0: ComplexGrid1D, x, t: float, tol: float = 1e-10, method: str = "fft"):
    """q(x, t) from the exact linear flow.

    ``fft``: periodic multiplier, evaluated at arbitrary x by its trigonometric
    interpolant (q0 must live on a box wide enough for the spreading).
    ``quad``: direct quadrature of (1/pi) int q_hat(z) e^{-2ixz - 4itz^2} dz
    with q_hat from the sampled data.
    """
    xs = np.atleast_1d(np.asarray(x, float))
    if t == 0:
        out = q0.spline()(xs)
    elif method == "fft":
        n = len(q0)
        k = 2 * math.pi * np.fft.fftfreq(n, d=q0.dx)
        coef = np.fft.fft(q0.vals) * np.exp(-1j * k * k * t) / n
        out = np.empty(xs.size, complex)
        for s in range(0, xs.size, 64):
            out[s:s + 64] = np.exp(1j * np.outer(xs[s:s + 64] - q0.xs[0], k)) @ coef
    elif method == "quad":
        _check_decay(q0)
        # q_hat is negligible beyond the data's spectral width; find it from a coarse scan
        zc = np.linspace(-40, 40, 4001)
        mag = np.abs(fourier_hat(q0, zc))
        big = zc[mag > tol * mag.max() * 1e-3]
        zmax = max(abs(big[0]), abs(big[-1])) + 1.0
        n_per = 8
        n_nodes = int(n_per * (4 * t * zmax * zmax + 2 * np.max(np.abs(xs)) * zmax) / math.pi) + 400
        zz, ww = np.polynomial.legendre.leggauss(16)
        edges = np.linspace(-zmax, zmax, n_nodes // 16 + 2)
        a, b = edges[:-1, None], edges[1:, None]
        z = (0.5 * (a + b) + 0.5 * (b - a) * zz).ravel()
        wz = (0.5 * (b - a) * ww).ravel()
        qh = fourier_hat(q0, z) * wz * np.exp(-4j * t * z * z)
        out = np.array([np.dot(np.exp(-2j * xv * z), qh) for xv in xs]) / math.pi
    else:
        raise ValueError(f"method must be 'fft' or 'quad', not {method!r}")
    return complex(out[0]) if np.ndim(x) == 0 else out


# --- expansion constants -------------------------------------------------------


def _dfact(n: int) -> float:
    """Double factorial with (-1)!! = 1."""
    return 1.0 if n <= 0 else float(factorial2(n))


def _beta_integrand(k: int):
    def g(p):
        e = (8j * np.exp(2j * p)) ** k
        return (0.5 * np.cos(2 * p) * np.cos(p) ** (2 * k - 2) / (_dfact(2 * k - 3) * e)
                - 1j * np.exp(1j * p) * np.sin(2 * p) * np.cos(p) ** (2 * k) / (_dfact(2 * k) * e))
    return g


def _gamma_regular(k: int):
    """The gamma_k integrand times sqrt(cos 2phi)."""
    s = np.sqrt(math.pi / 1j)

    def g(p):
        e = (8j * np.exp(2j * p)) ** k
        return (0.5 * s * np.cos(2 * p) * np.cos(p) ** (2 * k - 2) / (2 * e)
                - 1j * np.exp(1j * p) * np.sin(2 * p) * np.cos(p) ** (2 * k - 1) * s / (2 * _dfact(2 * k - 1) * e))
    return g


def _cquad(f, a, b, **kw) -> complex:
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=200)
    opts.update(kw)
    # the requested tolerances sit at roundoff level; quad's roundoff notice is expected
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda p: np.real(f(p)), a, b, **opts)[0]
        im = integrate.quad(lambda p: np.imag(f(p)), a, b, **opts)[0]
    return complex(re, im)


def _gamma_literal(k: int, method: str) -> complex:
    g = _gamma_regular(k)
    lo = -math.pi / 4
    if method == "adaptive":
        # 1/sqrt(cos 2phi) = (phi + pi/4)^{-1/2} * smooth; use the algebraic weight
        def h(p):
            d = p - lo
            return g(p) * math.sqrt(d / math.cos(2 * p)) if d > 0 else g(p) / math.sqrt(2.0)
        return _cquad(h, lo, 0.0, weight="alg", wvar=(-0.5, 0.0))
    if method == "substitution":
        # cos 2phi = s^2, dphi = s ds / sqrt(1 - s^4); the 1/s cancels
        def h(s):
            p = -0.5 * math.acos(s * s)
            return g(p) / math.sqrt((1 + s) * (1 + s * s))
        return _cquad(h, 0.0, 1.0, weight="alg", wvar=(0.0, -0.5))
    raise ValueError(f"method must be 'adaptive' or 'substitution', not {method!r}")


def _beta_literal(k: int, method: str) -> complex:
    g = _beta_integrand(k)
    if method == "adaptive":
        return _cquad(g, -math.pi / 4, 0.0)
    x, w = np.polynomial.legendre.leggauss(64)
    p = -math.pi / 8 * (x + 1)
    return complex(math.pi / 8 * np.dot(w, g(p)))


@lru_cache(maxsize=64)
def beta_gamma_constants(n: int, coefficients: str = "literal", method: str = "adaptive") -> tuple:
    """(beta_1..beta_n, gamma_1..gamma_n) as tuples of complex numbers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if coefficients == "literal":
        betas = tuple(_beta_literal(k, method) for k in range(1, n + 1))
        gammas = tuple(_gamma_literal(k, method) for k in range(1, n + 1))
    elif coefficients == "stationary_phase":
        betas = (0j,) * n
        gammas = tuple(complex(gamma(k + 0.5) / (math.factorial(2 * k) * math.pi * (4j) ** (k + 0.5)) / 2j)
                       for k in range(1, n + 1))
    else:
        raise ValueError("coefficients must be 'literal' or 'stationary_phase'")
    return betas, gammas


@dataclass(frozen=True)
class LinearExpansion:
    n_terms: int
    beta_coeffs: tuple
    gamma_coeffs: tuple
    qhat_derivs: np.ndarray  # q_hat^{(j)}(z0), j = 0..2n
    z0: float
    coefficients: str = "literal"


def build_expansion(q0: ComplexGrid1D, z0: float, n: int = 3, coefficients: str = "literal") -> LinearExpansion:
    betas, gammas = beta_gamma_constants(max(n, 1), coefficients)
    d = qhat_derivs(q0, [z0], 2 * n)[:, 0]
    return LinearExpansion(n, betas[:n], gammas[:n], d, float(z0), coefficients)


def _expand(d: np.ndarray, n: int, betas, gammas, x, t):
    z0 = -np.asarray(x) / (4 * t)
    out = d[0] * np.exp(-0.25j * math.pi) / (2 * math.sqrt(math.pi * t)) * np.exp(1j * np.asarray(x) ** 2 / (4 * t))
    ph = np.exp(4j * t * z0 * z0)
    for k in range(1, n + 1):
        out = out + t ** (-k) * d[2 * k - 1] * ph * 2j * betas[k - 1]
        out = out + t ** (-(2 * k + 1) / 2) * d[2 * k] * ph * 2j * gammas[k - 1]
    return out


def linear_expansion(exp: LinearExpansion, x: float, t: float) -> complex:
    """n-term prediction at (x, t); requires -x/4t == exp.z0."""
    if t <= 0:
        raise ValueError("t must be positive")
    if abs(-x / (4 * t) - exp.z0) > 1e-12 * max(1.0, abs(exp.z0)):
        raise ValueError("expansion was built for a different stationary point")
    return complex(_expand(exp.qhat_derivs, exp.n_terms, exp.beta_coeffs, exp.gamma_coeffs, x, t))


def linear_prediction(q0: ComplexGrid1D, x, t: float, n: int, coefficients: str = "literal") -> np.ndarray:
    """Vectorized n-term prediction over many x at one t."""
    x = np.atleast_1d(np.asarray(x, float))
    d = qhat_derivs(q0, -x / (4 * t), 2 * n)
    if n == 0:
        return _expand(d, 0, (), (), x, t)
    betas, gammas = beta_gamma_constants(n, coefficients)
    return _expand(d, n, betas, gammas, x, t)


# --- Stokes split --------------------------------------------------------------


def stokes_split(qhat, dqhat, x: float, t: float, n_phi: int = 8) -> dict:
    """Line term and the two dbar area integrals whose combination gives q(x, t).

    ``qhat``/``dqhat`` are vectorized callables.  With
    E = cos(2 arg(z - z0)) q_hat(u) + (1 - cos(2 arg(z - z0))) q_hat(z0),
    upper = int int over 3pi/4 < arg < pi and lower over -pi/4 < arg < 0 of
    2i dbar(E) e^{-2it theta} dA, and q = line + (upper - lower) / pi.
    """
    z0 = -x / (4 * t)
    line = complex(qhat(np.array([z0]))[0]) * np.exp(-0.25j * math.pi) / (2 * math.sqrt(math.pi * t)) \
        * np.exp(4j * t * z0 * z0)
    out = {"line": complex(line)}
    for name, lo, hi in (("upper", 0.75 * math.pi, math.pi), ("lower", -0.25 * math.pi, 0.0)):
        rule = oscquad.polar_rule(lo, hi, lambda p: -4 * t * np.exp(2j * p), lambda p: math.inf,
                                  graded="hi", phi_min=1e-9, scale=0.1, rho_data=12.0, n_phi=n_phi)
        rho, phi = rule.rho, rule.phi
        u = z0 + rho * np.cos(phi)
        dbar = 0.5 * np.cos(2 * phi) * dqhat(u) - 1j * np.exp(1j * phi) * np.sin(2 * phi) / rho * (
            qhat(u) - qhat(np.array([z0]))[0])
        out[name] = complex(2j * np.exp(4j * t * z0 * z0) * rule.integrate(dbar * rho))
    out["total"] = out["line"] + (out["upper"] - out["lower"]) / math.pi
    return out
