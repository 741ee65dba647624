# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see _pykernels.py for the reference)."""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double cabs(double complex)
    double carg(double complex)

cdef extern from "math.h" nogil:
    double cos(double)
    double sin(double)
    double ceil(double)
    double fabs(double)
    double M_PI

BACKEND = "cython"


cdef int _series_one(double complex a, double complex ua0, double complex dua0,
                     double complex y, double tol, int max_terms, double complex *res) nogil:
    cdef double complex y2 = y * y
    cdef double complex t1 = 1.0, t2 = y, s1 = 1.0, s2 = y
    cdef double ay2 = cabs(y2)
    cdef int n = 1
    while True:
        t1 = t1 * (a + 0.5 + 2.0 * (n - 1)) * y2 / ((2.0 * n - 1.0) * (2.0 * n))
        t2 = t2 * (a + 1.5 + 2.0 * (n - 1)) * y2 / ((2.0 * n) * (2.0 * n + 1.0))
        s1 = s1 + t1
        s2 = s2 + t2
        if cabs(t1) <= tol * cabs(s1) and cabs(t2) <= tol * cabs(s2) and 2.0 * n > ay2:
            break
        n += 1
        if n > max_terms:
            return 1
    res[0] = ua0 * s1 + dua0 * s2
    return 0


cdef double complex _asym_one(double complex a, double complex y, double tol, int max_terms) nogil:
    cdef double complex inv = 1.0 / (2.0 * y * y)
    cdef double complex term = 1.0, total = 1.0, new
    cdef double complex b = a + 0.5
    cdef int s
    for s in range(1, max_terms + 1):
        new = -term * (b + 2.0 * s - 2.0) * (b + 2.0 * s - 1.0) * inv / s
        if cabs(new) > cabs(term):
            break
        total = total + new
        term = new
        if not (cabs(new) > tol * cabs(total)):
            break
    return cexp((-a - 0.5) * clog(y)) * total


cdef double complex _walk_one(double complex a, double complex y0, double complex f0, double complex g0,
                             double complex y1, double tol) nogil:
    cdef double dist = cabs(y1 - y0)
    cdef double reach = cabs(y0) if cabs(y0) > cabs(y1) else cabs(y1)
    cdef int nsteps, k, n
    cdef double complex h, A, Ah, yc, d0, d1, d2, sa, sd
    if reach < 2.0:
        reach = 2.0
    nsteps = <int>ceil(dist * reach)
    if nsteps < 1:
        nsteps = 1
    h = (y1 - y0) / nsteps
    A = f0
    Ah = g0 * h
    yc = y0
    for k in range(nsteps):
        d0 = A
        d1 = Ah
        sa = d0 + d1
        sd = d1
        n = 0
        while True:
            d2 = (yc * h * (n + 1) * d1 + (n + a + 0.5) * h * h * d0) / ((n + 1.0) * (n + 2.0))
            sa = sa + d2
            sd = sd + (n + 2) * d2
            if cabs(d2) + cabs(d1) <= 0.1 * tol * cabs(sa) or n > 200:
                break
            d0 = d1
            d1 = d2
            n += 1
        A = sa
        Ah = sd
        yc = yc + h
    return A


def pc_env(double complex a, double complex ua0, double complex dua0, double complex ua1, double complex dua1,
           cnp.ndarray[cnp.complex128_t, ndim=1] y, double r_series, double r_asym, int mode,
           double tol, int max_terms):
    cdef Py_ssize_t i, m = y.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(m, dtype=np.complex128)
    cdef double complex v, w, y0, f0, g0
    cdef double r, th
    cdef int bad = 0
    with nogil:
        for i in range(m):
            r = cabs(y[i])
            th = carg(y[i])
            if mode == 1 or (mode == 0 and r <= r_series):
                if _series_one(a, ua0, dua0, y[i], tol, max_terms, &v):
                    bad = 1
                    break
                out[i] = v
            elif mode == 2 or (r >= r_asym and fabs(th) <= 0.625 * M_PI):
                out[i] = _asym_one(a, y[i], tol, max_terms)
            elif fabs(th) <= 0.25 * M_PI + 0.1:
                y0 = r_asym * cexp(1j * th)
                f0 = _asym_one(a, y0, tol, max_terms)
                g0 = -(a + 0.5) * _asym_one(a + 1.0, y0, tol, max_terms)
                out[i] = _walk_one(a, y0, f0, g0, y[i], tol)
            else:
                y0 = r_series * cexp(1j * th)
                if _series_one(a, ua0, dua0, y0, tol, max_terms, &f0):
                    bad = 1
                    break
                if _series_one(a + 1.0, ua1, dua1, y0, tol, max_terms, &w):
                    bad = 1
                    break
                g0 = -(a + 0.5) * w
                out[i] = _walk_one(a, y0, f0, g0, y[i], tol)
    if bad:
        raise RuntimeError("parabolic cylinder series exceeded the term cap")
    return out


def transfer(cnp.ndarray[cnp.float64_t, ndim=1] zs, double x0, double h,
             cnp.ndarray[cnp.complex128_t, ndim=1] qn, cnp.ndarray[cnp.complex128_t, ndim=1] qm):
    cdef Py_ssize_t nz = zs.shape[0], n = qm.shape[0], j, k
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((nz, 4), dtype=np.complex128)
    cdef double z, x, hh = 0.5 * h, h6 = h / 6.0
    cdef double complex w11, w12, w21, w22, p0, s0, pm, sm, p1, s1, e
    cdef double complex k1a, k1b, k1c, k1d, k2a, k2b, k2c, k2d
    cdef double complex k3a, k3b, k3c, k3d, k4a, k4b, k4c, k4d
    cdef double complex a, b, c, d, q
    with nogil:
        for j in range(nz):
            z = zs[j]
            w11 = 1.0; w12 = 0.0; w21 = 0.0; w22 = 1.0
            e = cos(2.0 * x0 * z) + 1j * sin(2.0 * x0 * z)
            q = qn[0]
            p0 = q * e
            s0 = q.conjugate() * e.conjugate()
            for k in range(n):
                x = x0 + k * h + hh
                e = cos(2.0 * x * z) + 1j * sin(2.0 * x * z)
                q = qm[k]
                pm = q * e
                sm = q.conjugate() * e.conjugate()
                x = x0 + (k + 1) * h
                e = cos(2.0 * x * z) + 1j * sin(2.0 * x * z)
                q = qn[k + 1]
                p1 = q * e
                s1 = q.conjugate() * e.conjugate()
                k1a = p0 * w21; k1b = p0 * w22; k1c = s0 * w11; k1d = s0 * w12
                a = w11 + hh * k1a; b = w12 + hh * k1b; c = w21 + hh * k1c; d = w22 + hh * k1d
                k2a = pm * c; k2b = pm * d; k2c = sm * a; k2d = sm * b
                a = w11 + hh * k2a; b = w12 + hh * k2b; c = w21 + hh * k2c; d = w22 + hh * k2d
                k3a = pm * c; k3b = pm * d; k3c = sm * a; k3d = sm * b
                a = w11 + h * k3a; b = w12 + h * k3b; c = w21 + h * k3c; d = w22 + h * k3d
                k4a = p1 * c; k4b = p1 * d; k4c = s1 * a; k4d = s1 * b
                w11 = w11 + h6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
                w12 = w12 + h6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
                w21 = w21 + h6 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c)
                w22 = w22 + h6 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
                p0 = p1; s0 = s1
            out[j, 0] = w11; out[j, 1] = w12; out[j, 2] = w21; out[j, 3] = w22
    return out
