# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel for complex Hermitian matrices.

Operates in place on split real/imaginary planes. The arithmetic is written
term for term like :mod:`cstar_ineq._jacobi_py` so that both backends
produce bitwise identical results.
"""

from libc.math cimport sqrt, fabs

import numpy as np


def jacobi_sweeps(double[:, ::1] ar, double[:, ::1] ai,
                  double[:, ::1] vr, double[:, ::1] vi,
                  double tol, int max_sweeps):
    """Diagonalize ``ar + i*ai`` in place, accumulating rotations into ``v``.

    Returns the number of sweeps performed, or -1 if the off-diagonal norm
    is still above ``tol`` after ``max_sweeps`` sweeps.
    """
    return _sweeps(ar, ai, vr, vi, tol, max_sweeps)


def eigh(double complex[:, ::1] a, double offdiag_rtol, int max_sweeps):
    """Symmetrize, diagonalize and sort a square complex matrix.

    Returns ``(skew, size, sweeps, eigenvalues, eigenvectors)`` where
    ``skew = max|a_ij - conj(a_ji)|`` and ``size = max|a_ij|``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, key
    cdef double skew = 0.0, size = 0.0, frob = 0.0, dr, di, mag, x
    w_arr = np.empty(n)
    v_arr = np.empty((n, n), dtype=np.complex128)
    ar_arr = np.empty((n, n))
    ai_arr = np.empty((n, n))
    vr_arr = np.zeros((n, n))
    vi_arr = np.zeros((n, n))
    order_arr = np.empty(n, dtype=np.intp)
    cdef double[:, ::1] ar = ar_arr
    cdef double[:, ::1] ai = ai_arr
    cdef double[:, ::1] vr = vr_arr
    cdef double[:, ::1] vi = vi_arr
    cdef double[::1] w = w_arr
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t[::1] order = order_arr

    for i in range(n):
        for j in range(n):
            dr = a[i, j].real - a[j, i].real
            di = a[i, j].imag + a[j, i].imag
            mag = sqrt(dr * dr + di * di)
            if mag > skew:
                skew = mag
            mag = sqrt(a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag)
            if mag > size:
                size = mag
            ar[i, j] = 0.5 * (a[i, j].real + a[j, i].real)
            ai[i, j] = 0.5 * (a[i, j].imag - a[j, i].imag)
            frob += ar[i, j] * ar[i, j] + ai[i, j] * ai[i, j]
        vr[i, i] = 1.0

    sweeps = _sweeps(ar, ai, vr, vi, offdiag_rtol * sqrt(frob), max_sweeps)

    # stable insertion sort of the diagonal
    for i in range(n):
        order[i] = i
    for i in range(1, n):
        key = order[i]
        x = ar[key, key]
        j = i - 1
        while j >= 0 and ar[order[j], order[j]] > x:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key
    for k in range(n):
        w[k] = ar[order[k], order[k]]
        for i in range(n):
            v[i, k] = vr[i, order[k]] + 1j * vi[i, order[k]]
    return skew, size, sweeps, w_arr, v_arr


cdef int _sweeps(double[:, ::1] ar, double[:, ::1] ai,
                 double[:, ::1] vr, double[:, ::1] vi,
                 double tol, int max_sweeps):
    cdef Py_ssize_t n = ar.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, g, er, ei, theta, tt, c, s
    cdef double pr, pi, qr, qi, nr, ni, mr, mi

    for p in range(n):
        ai[p, p] = 0.0

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += ar[p, q] * ar[p, q] + ai[p, q] * ai[p, q]
        off = sqrt(2.0 * off)
        if off <= tol:
            return sweep
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                g = sqrt(ar[p, q] * ar[p, q] + ai[p, q] * ai[p, q])
                if g == 0.0:
                    continue
                er = ar[p, q] / g
                ei = ai[p, q] / g
                theta = (ar[q, q] - ar[p, p]) / (2.0 * g)
                tt = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    tt = -tt
                c = 1.0 / sqrt(tt * tt + 1.0)
                s = tt * c

                for k in range(n):
                    if k == p or k == q:
                        continue
                    pr = ar[k, p]
                    pi = ai[k, p]
                    qr = ar[k, q]
                    qi = ai[k, q]
                    nr = c * pr - s * (er * qr + ei * qi)
                    ni = c * pi - s * (er * qi - ei * qr)
                    mr = s * (er * pr - ei * pi) + c * qr
                    mi = s * (er * pi + ei * pr) + c * qi
                    ar[k, p] = nr
                    ai[k, p] = ni
                    ar[p, k] = nr
                    ai[p, k] = -ni
                    ar[k, q] = mr
                    ai[k, q] = mi
                    ar[q, k] = mr
                    ai[q, k] = -mi

                ar[p, p] = ar[p, p] - tt * g
                ar[q, q] = ar[q, q] + tt * g
                ar[p, q] = 0.0
                ai[p, q] = 0.0
                ar[q, p] = 0.0
                ai[q, p] = 0.0

                for k in range(n):
                    pr = vr[k, p]
                    pi = vi[k, p]
                    qr = vr[k, q]
                    qi = vi[k, q]
                    vr[k, p] = c * pr - s * (er * qr + ei * qi)
                    vi[k, p] = c * pi - s * (er * qi - ei * qr)
                    vr[k, q] = s * (er * pr - ei * pi) + c * qr
                    vi[k, q] = s * (er * pi + ei * pr) + c * qi
    return -1
