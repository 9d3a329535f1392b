# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the dense kernels (see ``pure.py`` for the
reference implementations and the shared contract).  The scalar
bookkeeping mirrors the pure backend line for line; only the row and
column updates are unrolled into C loops."""

import numpy as np

cimport cython
from libc.math cimport fabs, sqrt, copysign, hypot

from ..errors import EigenConvergenceError

BACKEND_NAME = "compiled"

cdef double _EPS = np.finfo(np.float64).eps

ctypedef fused scalar:
    double
    double complex


def hessenberg_inplace(scalar[:, ::1] h):
    """Householder reduction to upper Hessenberg form, in place."""
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t k, i, j
    cdef double normx, vnorm2, beta
    cdef scalar x0, phase, alpha, w, acc
    cdef scalar[::1] v = np.zeros(n, dtype=np.asarray(h).dtype)
    for k in range(n - 2):
        normx = 0.0
        for i in range(k + 1, n):
            normx += _abs2(h[i, k])
        normx = sqrt(normx)
        if normx == 0.0:
            continue
        x0 = h[k + 1, k]
        if scalar is double:
            phase = 1.0 if x0 >= 0 else -1.0
        else:
            phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * normx
        vnorm2 = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] = v[k + 1] - alpha
        for i in range(k + 1, n):
            vnorm2 += _abs2(v[i])
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left update: rows k+1.., columns k..
        for j in range(k, n):
            acc = 0
            for i in range(k + 1, n):
                acc = acc + _conj(v[i]) * h[i, j]
            w = beta * acc
            for i in range(k + 1, n):
                h[i, j] = h[i, j] - v[i] * w
        # right update: all rows, columns k+1..
        for i in range(n):
            acc = 0
            for j in range(k + 1, n):
                acc = acc + h[i, j] * v[j]
            w = beta * acc
            for j in range(k + 1, n):
                h[i, j] = h[i, j] - w * _conj(v[j])
        h[k + 1, k] = alpha
        for i in range(k + 2, n):
            h[i, k] = 0.0


cdef inline double _abs2(scalar z):
    if scalar is double:
        return z * z
    else:
        return z.real * z.real + z.imag * z.imag


cdef inline scalar _conj(scalar z):
    if scalar is double:
        return z
    else:
        return z.conjugate()


def real_hess_eigvals(double[:, ::1] h, int max_sweeps=60):
    """Francis double-shift QR eigenvalues of a real Hessenberg matrix."""
    cdef Py_ssize_t n = h.shape[0]
    eig_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] eig = eig_arr
    if n == 0:
        return eig_arr, 0
    cdef double anorm = 0.0
    cdef Py_ssize_t i, j, k, l, m, nn, mmin
    for i in range(n):
        for j in range(n):
            anorm += fabs(h[i, j])
    cdef int total = 0, its
    cdef double x, y, w, p, q, r, s, z, u, v, pv
    cdef double t = 0.0  # accumulated exceptional-shift translation
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l > 0:
                s = fabs(h[l - 1, l - 1]) + fabs(h[l, l])
                if s == 0.0:
                    s = anorm
                if fabs(h[l, l - 1]) <= _EPS * s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            x = h[nn, nn]
            if l == nn:
                eig[nn] = x + t
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = sqrt(fabs(q))
                x += t
                if q >= 0.0:
                    z = p + copysign(z, p)
                    eig[nn - 1] = x + z
                    if z == 0.0:
                        eig[nn] = x + z
                    else:
                        eig[nn] = x - w / z
                else:
                    eig[nn - 1].real = x + p
                    eig[nn - 1].imag = -z
                    eig[nn].real = x + p
                    eig[nn].imag = z
                nn -= 2
                break
            if its >= max_sweeps:
                raise EigenConvergenceError(total, n)
            if its == 10 or its == 20:
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = fabs(h[nn, nn - 1]) + fabs(h[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            total += 1
            m = nn - 2
            while m >= l:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = fabs(p) + fabs(q) + fabs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = fabs(h[m, m - 1]) * (fabs(q) + fabs(r))
                v = fabs(p) * (fabs(h[m - 1, m - 1]) + fabs(z) + fabs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != m + 2:
                    h[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = h[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = fabs(p) + fabs(q) + fabs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = copysign(sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                if k != nn - 1:
                    for j in range(k, nn + 1):
                        pv = h[k, j] + q * h[k + 1, j] + r * h[k + 2, j]
                        h[k + 2, j] -= pv * z
                        h[k + 1, j] -= pv * y
                        h[k, j] -= pv * x
                else:
                    for j in range(k, nn + 1):
                        pv = h[k, j] + q * h[k + 1, j]
                        h[k + 1, j] -= pv * y
                        h[k, j] -= pv * x
                mmin = nn if nn < k + 3 else k + 3
                if k != nn - 1:
                    for i in range(l, mmin + 1):
                        pv = x * h[i, k] + y * h[i, k + 1] + z * h[i, k + 2]
                        h[i, k + 2] -= pv * r
                        h[i, k + 1] -= pv * q
                        h[i, k] -= pv
                else:
                    for i in range(l, mmin + 1):
                        pv = x * h[i, k] + y * h[i, k + 1]
                        h[i, k + 1] -= pv * q
                        h[i, k] -= pv
    return eig_arr, total


cdef inline double _abs1c(double complex z):
    return fabs(z.real) + fabs(z.imag)


def complex_hess_eigvals(double complex[:, ::1] h, int max_sweeps=60):
    """Single (Wilkinson) shift QR eigenvalues of a complex Hessenberg
    matrix."""
    cdef Py_ssize_t n = h.shape[0]
    eig_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] eig = eig_arr
    if n == 0:
        return eig_arr, 0
    cdef Py_ssize_t i, k, l, nn, rows_hi
    cdef int total = 0, its
    cdef double s, c, af, d
    cdef double complex shift, a2, b2, c2, d2, half, disc, mu1, mu2
    cdef double complex f, g, sc, rr, rk, rk1, ck, ck1, phase
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l > 0:
                s = _abs1c(h[l - 1, l - 1]) + _abs1c(h[l, l])
                if s == 0.0:
                    s = 1.0
                if _abs1c(h[l, l - 1]) <= _EPS * s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            if l == nn:
                eig[nn] = h[nn, nn]
                nn -= 1
                break
            if its >= max_sweeps:
                raise EigenConvergenceError(total, n)
            if its == 10 or its == 20:
                shift = _abs1c(h[nn, nn - 1])
                if nn >= 2:
                    shift = shift + _abs1c(h[nn - 1, nn - 2])
            else:
                a2 = h[nn - 1, nn - 1]
                b2 = h[nn - 1, nn]
                c2 = h[nn, nn - 1]
                d2 = h[nn, nn]
                half = 0.5 * (a2 - d2)
                disc = _csqrt(half * half + b2 * c2)
                mu1 = d2 + half + disc
                mu2 = d2 + half - disc
                shift = mu1 if abs(mu1 - d2) <= abs(mu2 - d2) else mu2
            its += 1
            total += 1
            f = h[l, l] - shift
            g = h[l + 1, l]
            for k in range(l, nn):
                # complex Givens rotation with real cosine
                if g == 0:
                    c = 1.0
                    sc = 0.0
                    rr = f
                elif f == 0:
                    c = 0.0
                    sc = g.conjugate() / abs(g)
                    rr = abs(g)
                else:
                    af = abs(f)
                    d = hypot(af, abs(g))
                    c = af / d
                    phase = f / af
                    sc = phase * g.conjugate() / d
                    rr = phase * d
                if k > l:
                    h[k, k - 1] = rr
                    h[k + 1, k - 1] = 0.0
                for i in range(k, nn + 1):
                    rk = h[k, i]
                    rk1 = h[k + 1, i]
                    h[k, i] = c * rk + sc * rk1
                    h[k + 1, i] = -sc.conjugate() * rk + c * rk1
                rows_hi = k + 2 if k + 2 < nn else nn
                for i in range(l, rows_hi + 1):
                    ck = h[i, k]
                    ck1 = h[i, k + 1]
                    h[i, k] = c * ck + sc.conjugate() * ck1
                    h[i, k + 1] = -sc * ck + c * ck1
                if k < nn - 1:
                    f = h[k + 1, k]
                    g = h[k + 2, k]
    return eig_arr, total


cdef inline double complex _csqrt(double complex z):
    cdef double r = abs(z)
    cdef double re = sqrt(0.5 * (r + z.real))
    cdef double im = sqrt(0.5 * (r - z.real))
    if z.imag < 0:
        im = -im
    return re + 1j * im


def cpqr_factor(scalar[:, :] a):
    """Householder QR with column pivoting; see the pure backend for the
    returned (V, beta, R, piv) convention."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t kmax = m if m < n else n
    dtype = np.asarray(a).dtype
    r_arr = np.array(a, dtype=dtype, order="C", copy=True)
    v_arr = np.zeros((m, kmax), dtype=dtype)
    beta_arr = np.zeros(kmax, dtype=np.float64)
    piv_arr = np.arange(n, dtype=np.int64)
    cdef scalar[:, ::1] r = r_arr
    cdef scalar[:, ::1] v_store = v_arr
    cdef double[::1] beta = beta_arr
    cdef long long[::1] piv = piv_arr
    cdef Py_ssize_t i, j, k, jbest
    cdef double best, cur, normx, vnorm2, b
    cdef scalar x0, phase, alpha, tmp, acc, w
    cdef long long ptmp
    for k in range(kmax):
        best = -1.0
        jbest = k
        for j in range(k, n):
            cur = 0.0
            for i in range(k, m):
                cur += _abs2(r[i, j])
            if cur > best:
                best = cur
                jbest = j
        if jbest != k:
            for i in range(m):
                tmp = r[i, k]
                r[i, k] = r[i, jbest]
                r[i, jbest] = tmp
            ptmp = piv[k]
            piv[k] = piv[jbest]
            piv[jbest] = ptmp
        normx = 0.0
        for i in range(k, m):
            normx += _abs2(r[i, k])
        normx = sqrt(normx)
        if normx == 0.0:
            continue
        x0 = r[k, k]
        if scalar is double:
            phase = 1.0 if x0 >= 0 else -1.0
        else:
            phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * normx
        vnorm2 = 0.0
        for i in range(k, m):
            v_store[i, k] = r[i, k]
        v_store[k, k] = v_store[k, k] - alpha
        for i in range(k, m):
            vnorm2 += _abs2(v_store[i, k])
        if vnorm2 == 0.0:
            continue
        b = 2.0 / vnorm2
        for j in range(k, n):
            acc = 0
            for i in range(k, m):
                acc = acc + _conj(v_store[i, k]) * r[i, j]
            w = b * acc
            for i in range(k, m):
                r[i, j] = r[i, j] - v_store[i, k] * w
        r[k, k] = alpha
        for i in range(k + 1, m):
            r[i, k] = 0.0
        beta[k] = b
    return v_arr, beta_arr, r_arr, piv_arr
