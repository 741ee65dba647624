"""Complex special functions: gamma and the parabolic cylinder family.

All logarithms and powers use the principal branch, arg in (-pi, pi].

The parabolic cylinder function U(a, y) is the standard Whittaker solution of
U'' = (y^2/4 + a) U.  We work mostly with the envelope

    A(a, y) = e^{y^2/4} U(a, y) = U(a, 0) u1(a, y) + U'(a, 0) u2(a, y),

which satisfies A'' - y A' - (a + 1/2) A = 0 and dA/dy = -(a + 1/2) A(a + 1, y),
and with the product B(a, y) = A(a + 1, y) A(a, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "PoleError",
    "PCSeriesError",
    "PCValue",
    "loggamma",
    "complex_gamma",
    "rgamma",
    "cpow",
    "pc_u0",
    "pc_du0",
    "pc_series",
    "pc_asymptotic",
    "pc_env",
    "pc_value",
    "SERIES_RADIUS",
    "SERIES_RADIUS_STABLE",
    "ASYMPTOTIC_RADIUS",
]

SERIES_RADIUS = 12.0
# Automatic mode: series inside this radius (rounding loss about e^{r^2/2}) ...
SERIES_RADIUS_STABLE = 2.5
# ... and the large-|y| expansion beyond this one (smallest term about e^{-r^2/2}).
ASYMPTOTIC_RADIUS = 8.0
MAX_TERMS = 500

_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class PCSeriesError(RuntimeError):
    """Parabolic cylinder series failed to converge within the term cap."""


def _is_pole(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    # Lanczos sum, valid for Re z >= 1/2
    w = z - 1.0
    x = np.full_like(w, _LANCZOS_P[0])
    for k in range(1, len(_LANCZOS_P)):
        x = x + _LANCZOS_P[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(x)


def loggamma(z):
    """log Gamma(z) for complex z (any branch-consistent value mod 2 pi i)."""
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    if np.any(_is_pole(zz)):
        raise PoleError("gamma has a pole at nonpositive integers")
    out = np.empty_like(zz)
    right = zz.real >= 0.5
    if np.any(right):
        out[right] = _loggamma_right(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        out[left] = math.log(math.pi) - np.log(np.sin(np.pi * zl)) - _loggamma_right(1.0 - zl)
    return out[0] if scalar else out


def complex_gamma(z):
    """Gamma(z) for complex z; raises PoleError at nonpositive integers."""
    return np.exp(loggamma(z))


def rgamma(z):
    """1/Gamma(z), equal to 0 at the poles of Gamma."""
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    out = np.zeros_like(zz)
    ok = ~_is_pole(zz)
    if np.any(ok):
        out[ok] = np.exp(-loggamma(zz[ok]))
    return out[0] if scalar else out


def cpow(base, expo):
    """base**expo on the principal branch; 0**expo = 0 for Re expo > 0."""
    b = np.asarray(base, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(b == 0, 0.0 + 0.0j, np.exp(expo * np.log(np.where(b == 0, 1.0, b))))
    return out[()] if out.ndim == 0 else out


def pc_u0(a: complex) -> complex:
    """U(a, 0) = sqrt(pi) / (2^{a/2 + 1/4} Gamma(3/4 + a/2))."""
    a = complex(a)
    return complex(math.sqrt(math.pi) * 2.0 ** (-a / 2 - 0.25) * rgamma(0.75 + a / 2))


def pc_du0(a: complex) -> complex:
    """U'(a, 0) = -sqrt(pi) / (2^{a/2 - 1/4} Gamma(1/4 + a/2))."""
    a = complex(a)
    return complex(-math.sqrt(math.pi) * 2.0 ** (-a / 2 + 0.25) * rgamma(0.25 + a / 2))


@dataclass(frozen=True)
class PCValue:
    a: complex
    y: complex
    u: complex
    a_env: complex
    b_env: complex


def _call_kernel(a: complex, yy: np.ndarray, mode: int, tol: float, max_terms: int) -> np.ndarray:
    try:
        return kernels.pc_env(
            a, pc_u0(a), pc_du0(a), pc_u0(a + 1.0), pc_du0(a + 1.0), yy,
            SERIES_RADIUS_STABLE, ASYMPTOTIC_RADIUS, mode, tol, max_terms,
        )
    except RuntimeError as exc:
        raise PCSeriesError(str(exc)) from None


def _as_array(y) -> tuple[np.ndarray, bool]:
    arr = np.asarray(y, dtype=complex)
    return np.ascontiguousarray(np.atleast_1d(arr).ravel()), arr.ndim == 0


def _shape_back(out: np.ndarray, y, scalar: bool):
    return complex(out[0]) if scalar else out.reshape(np.shape(y))


def pc_series_env(a: complex, y, tol: float = 1e-12, max_terms: int = MAX_TERMS, radius: float = SERIES_RADIUS):
    """A(a, y) from the Maclaurin series alone.

    Rounding grows like e^{|y|^2/2}, so this is accurate only for small |y|;
    pc_env is the general entry point.
    """
    a = complex(a)
    yy, scalar = _as_array(y)
    if yy.size and np.max(np.abs(yy)) > radius:
        raise ValueError(f"|y| exceeds the series radius {radius}")
    return _shape_back(_call_kernel(a, yy, 1, tol, max_terms), y, scalar)


def pc_asymptotic(a: complex, y, tol: float = 1e-12, max_terms: int = MAX_TERMS):
    """A(a, y) from the large-|y| expansion, valid for |arg y| < 3 pi / 4."""
    a = complex(a)
    yy, scalar = _as_array(y)
    if np.any(np.abs(np.angle(yy)) >= 0.75 * np.pi):
        raise ValueError("large-|y| expansion requires |arg y| < 3 pi / 4")
    return _shape_back(_call_kernel(a, yy, 2, tol, max_terms), y, scalar)


def pc_env(a: complex, y, tol: float = 1e-12, max_terms: int = MAX_TERMS):
    """A(a, y) for any y with |y| <= SERIES_RADIUS or |arg y| <= 5 pi / 8.

    Small |y|: Maclaurin series.  Large |y| in the sector: asymptotic
    expansion.  In between, (A, A') is carried along a ray by Taylor steps of
    the envelope ODE, inward from the asymptotic circle near the positive
    axis (where A is recessive) and outward from the series disc elsewhere.
    """
    a = complex(a)
    yy, scalar = _as_array(y)
    outside = (np.abs(yy) > SERIES_RADIUS) & (np.abs(np.angle(yy)) > 0.625 * np.pi)
    if np.any(outside):
        raise ValueError("argument outside the supported region of the envelope")
    return _shape_back(_call_kernel(a, yy, 0, tol, max_terms), y, scalar)


def pc_series(a: complex, y: complex, tol: float = 1e-12, max_terms: int = MAX_TERMS) -> PCValue:
    """PCValue bundle computed from the Maclaurin series (|y| <= SERIES_RADIUS)."""
    a = complex(a)
    y = complex(y)
    env = complex(pc_series_env(a, y, tol, max_terms))
    env1 = complex(pc_series_env(a + 1.0, y, tol, max_terms))
    return PCValue(a, y, complex(np.exp(-y * y / 4.0) * env), env, env1 * env)


def pc_value(a: complex, y: complex, tol: float = 1e-12) -> PCValue:
    """PCValue bundle using the regime dispatcher."""
    a = complex(a)
    y = complex(y)
    env = complex(pc_env(a, y, tol))
    env1 = complex(pc_env(a + 1.0, y, tol))
    return PCValue(a, y, complex(np.exp(-y * y / 4.0) * env), env, env1 * env)
