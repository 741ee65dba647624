"""NumPy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` exactly in algorithm and stopping rules, so the
two backends agree to rounding.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _pc_series(a: complex, ua0: complex, dua0: complex, y: np.ndarray, tol: float, max_terms: int) -> np.ndarray:
    y2 = y * y
    t1 = np.ones_like(y)
    t2 = y.copy()
    s1 = t1.copy()
    s2 = t2.copy()
    ay2 = np.abs(y2)
    n = 1
    while True:
        t1 = t1 * (a + 0.5 + 2.0 * (n - 1)) * y2 / ((2.0 * n - 1.0) * (2.0 * n))
        t2 = t2 * (a + 1.5 + 2.0 * (n - 1)) * y2 / ((2.0 * n) * (2.0 * n + 1.0))
        s1 = s1 + t1
        s2 = s2 + t2
        done = (np.abs(t1) <= tol * np.abs(s1)) & (np.abs(t2) <= tol * np.abs(s2)) & (2.0 * n > ay2)
        if np.all(done):
            break
        n += 1
        if n > max_terms:
            raise RuntimeError("parabolic cylinder series exceeded the term cap")
    return ua0 * s1 + dua0 * s2


def _pc_asym(a: complex, y: np.ndarray, tol: float, max_terms: int) -> np.ndarray:
    inv = 1.0 / (2.0 * y * y)
    term = np.ones_like(y)
    total = term.copy()
    active = np.ones(y.shape, dtype=bool)
    b = a + 0.5
    for s in range(1, max_terms + 1):
        new = -term * (b + 2.0 * s - 2.0) * (b + 2.0 * s - 1.0) * inv / s
        grow = np.abs(new) > np.abs(term)
        active &= ~grow
        total = np.where(active, total + new, total)
        term = np.where(active, new, term)
        active &= np.abs(new) > tol * np.abs(total)
        if not np.any(active):
            break
    return np.exp((-a - 0.5) * np.log(y)) * total


def _taylor_walk(a: complex, y0: np.ndarray, f0: np.ndarray, g0: np.ndarray, y1: np.ndarray, tol: float) -> np.ndarray:
    """Carry (A, A') from y0 to y1 along a straight segment with local Taylor steps.

    Uses A'' = y A' + (a + 1/2) A, whose Taylor coefficients at any centre obey a
    two-term recurrence.
    """
    dist = np.abs(y1 - y0)
    reach = np.maximum(np.abs(y0), np.abs(y1))
    nsteps = int(np.max(np.ceil(dist * np.maximum(2.0, reach)))) if y0.size else 0
    nsteps = max(nsteps, 1)
    h = (y1 - y0) / nsteps
    A = f0.copy()
    Ah = g0 * h
    yc = y0.copy()
    for _ in range(nsteps):
        d0, d1 = A, Ah
        sa, sd = d0 + d1, d1.copy()
        n = 0
        while True:
            d2 = (yc * h * (n + 1) * d1 + (n + a + 0.5) * h * h * d0) / ((n + 1.0) * (n + 2.0))
            sa = sa + d2
            sd = sd + (n + 2) * d2
            if np.all(np.abs(d2) + np.abs(d1) <= 0.1 * tol * np.abs(sa)) or n > 200:
                break
            d0, d1 = d1, d2
            n += 1
        A, Ah = sa, sd
        yc = yc + h
    return A


def pc_env(a: complex, ua0: complex, dua0: complex, ua1: complex, dua1: complex, y: np.ndarray,
           r_series: float, r_asym: float, mode: int, tol: float, max_terms: int) -> np.ndarray:
    """Envelope A(a, y).  mode 1: series only, 2: large-|y| expansion only, 0: automatic."""
    y = np.asarray(y, dtype=complex)
    if mode == 1:
        return _pc_series(a, ua0, dua0, y, tol, max_terms)
    if mode == 2:
        return _pc_asym(a, y, tol, max_terms)
    out = np.empty_like(y)
    r = np.abs(y)
    th = np.angle(y)
    small = r <= r_series
    asym = (r >= r_asym) & (np.abs(th) <= 0.625 * np.pi)
    inward = ~small & ~asym & (np.abs(th) <= 0.25 * np.pi + 0.1)
    outward = ~small & ~asym & ~inward
    if np.any(small):
        out[small] = _pc_series(a, ua0, dua0, y[small], tol, max_terms)
    if np.any(asym):
        out[asym] = _pc_asym(a, y[asym], tol, max_terms)
    if np.any(inward):
        y1 = y[inward]
        y0 = r_asym * np.exp(1j * th[inward])
        f0 = _pc_asym(a, y0, tol, max_terms)
        g0 = -(a + 0.5) * _pc_asym(a + 1.0, y0, tol, max_terms)
        out[inward] = _taylor_walk(a, y0, f0, g0, y1, tol)
    if np.any(outward):
        y1 = y[outward]
        y0 = r_series * np.exp(1j * th[outward])
        f0 = _pc_series(a, ua0, dua0, y0, tol, max_terms)
        g0 = -(a + 0.5) * _pc_series(a + 1.0, ua1, dua1, y0, tol, max_terms)
        out[outward] = _taylor_walk(a, y0, f0, g0, y1, tol)
    return out


def transfer(zs: np.ndarray, x0: float, h: float, qn: np.ndarray, qm: np.ndarray) -> np.ndarray:
    """RK4 for W' = [[0, q e^{2ixz}], [conj(q) e^{-2ixz}, 0]] W, W(x0) = I.

    qn holds q at x0 + k h (k = 0..n), qm at the midpoints.  Returns an array
    of shape (len(zs), 4) with W11, W12, W21, W22 at x0 + n h.
    """
    zs = np.asarray(zs, dtype=float)
    n = qm.size
    w11 = np.ones(zs.shape, complex)
    w12 = np.zeros(zs.shape, complex)
    w21 = np.zeros(zs.shape, complex)
    w22 = np.ones(zs.shape, complex)
    hh = 0.5 * h

    def coef(x: float, q: complex):
        e = np.exp(2j * x * zs)
        return q * e, np.conj(q) / e

    p0, s0 = coef(x0, qn[0])
    for k in range(n):
        x = x0 + k * h
        pm, sm = coef(x + hh, qm[k])
        p1, s1 = coef(x0 + (k + 1) * h, qn[k + 1])
        k1a, k1b, k1c, k1d = p0 * w21, p0 * w22, s0 * w11, s0 * w12
        a, b, c, d = w11 + hh * k1a, w12 + hh * k1b, w21 + hh * k1c, w22 + hh * k1d
        k2a, k2b, k2c, k2d = pm * c, pm * d, sm * a, sm * b
        a, b, c, d = w11 + hh * k2a, w12 + hh * k2b, w21 + hh * k2c, w22 + hh * k2d
        k3a, k3b, k3c, k3d = pm * c, pm * d, sm * a, sm * b
        a, b, c, d = w11 + h * k3a, w12 + h * k3b, w21 + h * k3c, w22 + h * k3d
        k4a, k4b, k4c, k4d = p1 * c, p1 * d, s1 * a, s1 * b
        w11 = w11 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        w12 = w12 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        w21 = w21 + (h / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c)
        w22 = w22 + (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        p0, s0 = p1, s1
    return np.stack([w11, w12, w21, w22], axis=-1)
