"""Pure-Python cyclic Jacobi kernel; fallback for :mod:`._jacobi_ext`.

Works on nested lists of floats. Statement order mirrors the compiled kernel
exactly, so results agree bit for bit on IEEE-754 hardware.
"""

from math import fabs, sqrt

import numpy as np


def eigh(a, offdiag_rtol, max_sweeps):
    """Symmetrize, diagonalize and sort; see the compiled kernel."""
    n = a.shape[0]
    re = a.real.tolist()
    im = a.imag.tolist()
    skew = size = frob = 0.0
    ar = [[0.0] * n for _ in range(n)]
    ai = [[0.0] * n for _ in range(n)]
    vr = [[0.0] * n for _ in range(n)]
    vi = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            dr = re[i][j] - re[j][i]
            di = im[i][j] + im[j][i]
            mag = sqrt(dr * dr + di * di)
            if mag > skew:
                skew = mag
            mag = sqrt(re[i][j] * re[i][j] + im[i][j] * im[i][j])
            if mag > size:
                size = mag
            ar[i][j] = 0.5 * (re[i][j] + re[j][i])
            ai[i][j] = 0.5 * (im[i][j] - im[j][i])
            frob += ar[i][j] * ar[i][j] + ai[i][j] * ai[i][j]
        vr[i][i] = 1.0

    sweeps = jacobi_sweeps(ar, ai, vr, vi, offdiag_rtol * sqrt(frob), max_sweeps)

    order = sorted(range(n), key=lambda k: ar[k][k])  # stable
    w = np.array([ar[k][k] for k in order])
    v = np.empty((n, n), dtype=np.complex128)
    v.real = np.array(vr)[:, order] if n else 0.0
    v.imag = np.array(vi)[:, order] if n else 0.0
    return skew, size, sweeps, w, v


def jacobi_sweeps(ar, ai, vr, vi, tol, max_sweeps):
    """Diagonalize ``ar + i*ai`` in place; see the compiled kernel."""
    n = len(ar)
    for p in range(n):
        ai[p][p] = 0.0

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            rp = ar[p]
            ip = ai[p]
            for q in range(p + 1, n):
                off += rp[q] * rp[q] + ip[q] * ip[q]
        off = sqrt(2.0 * off)
        if off <= tol:
            return sweep
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                g = sqrt(ar[p][q] * ar[p][q] + ai[p][q] * ai[p][q])
                if g == 0.0:
                    continue
                er = ar[p][q] / g
                ei = ai[p][q] / g
                theta = (ar[q][q] - ar[p][p]) / (2.0 * g)
                tt = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    tt = -tt
                c = 1.0 / sqrt(tt * tt + 1.0)
                s = tt * c

                for k in range(n):
                    if k == p or k == q:
                        continue
                    pr = ar[k][p]
                    pi = ai[k][p]
                    qr = ar[k][q]
                    qi = ai[k][q]
                    nr = c * pr - s * (er * qr + ei * qi)
                    ni = c * pi - s * (er * qi - ei * qr)
                    mr = s * (er * pr - ei * pi) + c * qr
                    mi = s * (er * pi + ei * pr) + c * qi
                    ar[k][p] = nr
                    ai[k][p] = ni
                    ar[p][k] = nr
                    ai[p][k] = -ni
                    ar[k][q] = mr
                    ai[k][q] = mi
                    ar[q][k] = mr
                    ai[q][k] = -mi

                ar[p][p] = ar[p][p] - tt * g
                ar[q][q] = ar[q][q] + tt * g
                ar[p][q] = 0.0
                ai[p][q] = 0.0
                ar[q][p] = 0.0
                ai[q][p] = 0.0

                for k in range(n):
                    vrk = vr[k]
                    vik = vi[k]
                    pr = vrk[p]
                    pi = vik[p]
                    qr = vrk[q]
                    qi = vik[q]
                    vrk[p] = c * pr - s * (er * qr + ei * qi)
                    vik[p] = c * pi - s * (er * qi - ei * qr)
                    vrk[q] = s * (er * pr - ei * pi) + c * qr
                    vik[q] = s * (er * pi + ei * pr) + c * qi
    return -1
