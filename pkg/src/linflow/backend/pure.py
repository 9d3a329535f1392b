"""Pure NumPy implementations of the dense kernels.

These are the fallback versions of the routines in ``_fastkernels.pyx``;
both backends expose the same four entry points:

    hessenberg_inplace(h)          -- unitary reduction to upper Hessenberg
    real_hess_eigvals(h)           -- Francis double-shift QR, real Hessenberg
    complex_hess_eigvals(h)        -- single-shift QR, complex Hessenberg
    cpqr_factor(a)                 -- Householder QR with column pivoting

The eigenvalue routines destroy their argument.  All loops follow the
classic EISPACK/LAPACK formulations; the pure versions vectorize the row
and column updates with array slices but keep the scalar bookkeeping
identical to the compiled versions so the two backends agree bit-for-bit
on the branch structure.
"""

import math

import numpy as np

from ..errors import EigenConvergenceError

_EPS = float(np.finfo(np.float64).eps)

BACKEND_NAME = "pure"


def hessenberg_inplace(h):
    """Reduce a square matrix to upper Hessenberg form by Householder
    similarity transforms, in place.  Works for float64 and complex128."""
    n = h.shape[0]
    complex_field = np.iscomplexobj(h)
    for k in range(n - 2):
        x = h[k + 1 :, k]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        x0 = x[0]
        if complex_field:
            phase = x0 / abs(x0) if x0 != 0 else 1.0
        else:
            phase = 1.0 if x0 >= 0 else -1.0
        alpha = -phase * normx
        v = x.copy()
        v[0] -= alpha
        vnorm2 = np.real(np.vdot(v, v))
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left: rows k+1.., columns k..
        w = np.conj(v) @ h[k + 1 :, k:]
        h[k + 1 :, k:] -= beta * np.outer(v, w)
        # right: all rows, columns k+1..
        w = h[:, k + 1 :] @ v
        h[:, k + 1 :] -= beta * np.outer(w, np.conj(v))
        h[k + 1, k] = alpha
        h[k + 2 :, k] = 0.0
    return h


def real_hess_eigvals(h, max_sweeps=60):
    """Eigenvalues of a real upper Hessenberg matrix by the implicitly
    shifted double-step QR iteration (Francis).  Complex eigenvalues come
    out in exact conjugate pairs.  Returns (eigvals, total_sweeps)."""
    n = h.shape[0]
    eig = np.empty(n, dtype=np.complex128)
    if n == 0:
        return eig, 0
    anorm = float(np.sum(np.abs(h)))
    total = 0
    t = 0.0  # accumulated exceptional-shift translation
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            # look for a single negligible subdiagonal element
            l = nn
            while l > 0:
                s = abs(h[l - 1, l - 1]) + abs(h[l, l])
                if s == 0.0:
                    s = anorm
                if abs(h[l, l - 1]) <= _EPS * s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            x = h[nn, nn]
            if l == nn:  # one root found
                eig[nn] = x + t
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:  # two roots found
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    eig[nn - 1] = x + z
                    eig[nn] = x + z if z == 0.0 else x - w / z
                else:
                    eig[nn - 1] = complex(x + p, -z)
                    eig[nn] = complex(x + p, z)
                nn -= 2
                break
            if its >= max_sweeps:
                raise EigenConvergenceError(total, n)
            if its == 10 or its == 20:
                # exceptional shift: translate the diagonal to re-center a
                # stalled shift cycle
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            total += 1
            # find two consecutive small subdiagonals
            m = nn - 2
            while m >= l:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(h[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1, m - 1]) + abs(z) + abs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != m + 2:
                    h[i, i - 3] = 0.0
            # double QR step on rows l..nn
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = h[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
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
                cols = slice(k, nn + 1)
                if k != nn - 1:
                    pv = h[k, cols] + q * h[k + 1, cols] + r * h[k + 2, cols]
                    h[k + 2, cols] -= pv * z
                else:
                    pv = h[k, cols] + q * h[k + 1, cols]
                h[k + 1, cols] -= pv * y
                h[k, cols] -= pv * x
                mmin = min(nn, k + 3)
                rows = slice(l, mmin + 1)
                if k != nn - 1:
                    pv = x * h[rows, k] + y * h[rows, k + 1] + z * h[rows, k + 2]
                    h[rows, k + 2] -= pv * r
                else:
                    pv = x * h[rows, k] + y * h[rows, k + 1]
                h[rows, k + 1] -= pv * q
                h[rows, k] -= pv
    return eig, total


def _givens_c(f, g):
    """Complex Givens rotation: returns (c, s, r) with c real >= 0 and
    [[c, s], [-conj(s), c]] @ [f, g] = [r, 0]."""
    if g == 0:
        return 1.0, 0.0 + 0.0j, f
    if f == 0:
        ag = abs(g)
        return 0.0, np.conj(g) / ag, ag
    af = abs(f)
    d = math.hypot(af, abs(g))
    c = af / d
    phase = f / af
    s = phase * np.conj(g) / d
    return c, s, phase * d


def complex_hess_eigvals(h, max_sweeps=60):
    """Eigenvalues of a complex upper Hessenberg matrix by the implicitly
    shifted (Wilkinson) single-step QR iteration.  Returns
    (eigvals, total_sweeps)."""
    n = h.shape[0]
    eig = np.empty(n, dtype=np.complex128)
    if n == 0:
        return eig, 0
    total = 0
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l > 0:
                s = _abs1(h[l - 1, l - 1]) + _abs1(h[l, l])
                if s == 0.0:
                    s = 1.0
                if _abs1(h[l, l - 1]) <= _EPS * s:
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
                shift = _abs1(h[nn, nn - 1]) + _abs1(h[nn - 1, nn - 2] if nn >= 2 else 0.0)
            else:
                # Wilkinson shift: trailing 2x2 eigenvalue closest to h[nn, nn]
                a = h[nn - 1, nn - 1]
                b = h[nn - 1, nn]
                c = h[nn, nn - 1]
                d = h[nn, nn]
                half = 0.5 * (a - d)
                disc = np.sqrt(half * half + b * c + 0.0j)
                mu1 = d + half + disc
                mu2 = d + half - disc
                shift = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2
            its += 1
            total += 1
            # chase the bulge created by the shifted first column
            f = h[l, l] - shift
            g = h[l + 1, l]
            for k in range(l, nn):
                c, s, r = _givens_c(f, g)
                if k > l:
                    h[k, k - 1] = r
                    h[k + 1, k - 1] = 0.0
                # rows k, k+1 over columns k..nn
                cols = slice(k, nn + 1)
                rk = h[k, cols].copy()
                rk1 = h[k + 1, cols]
                h[k, cols] = c * rk + s * rk1
                h[k + 1, cols] = -np.conj(s) * rk + c * rk1
                # columns k, k+1 over rows l..min(k+2, nn)
                rows = slice(l, min(k + 2, nn) + 1)
                ck = h[rows, k].copy()
                ck1 = h[rows, k + 1]
                h[rows, k] = c * ck + np.conj(s) * ck1
                h[rows, k + 1] = -s * ck + c * ck1
                if k < nn - 1:
                    f = h[k + 1, k]
                    g = h[k + 2, k]
    return eig, total


def _abs1(z):
    return abs(np.real(z)) + abs(np.imag(z))


def cpqr_factor(a):
    """Householder QR with column pivoting.

    Returns (V, beta, R, piv): R upper triangular with non-increasing
    |diagonal|, piv the column permutation (a[:, piv] = Q R), and the
    Householder reflectors stored as columns of V with scalings beta so
    that Q = prod_k (I - beta[k] v_k v_k^H).
    """
    m, n = a.shape
    r = np.array(a, copy=True)
    kmax = min(m, n)
    complex_field = np.iscomplexobj(r)
    v_store = np.zeros((m, kmax), dtype=r.dtype)
    beta = np.zeros(kmax, dtype=np.float64)
    piv = np.arange(n)
    for k in range(kmax):
        # recomputed column norms: O(m n) per step, immune to downdating
        # cancellation, cheap at the target sizes
        norms = np.sqrt(np.sum(np.abs(r[k:, k:]) ** 2, axis=0))
        j = int(np.argmax(norms)) + k
        if j != k:
            r[:, [k, j]] = r[:, [j, k]]
            piv[[k, j]] = piv[[j, k]]
        x = r[k:, k]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        x0 = x[0]
        if complex_field:
            phase = x0 / abs(x0) if x0 != 0 else 1.0
        else:
            phase = 1.0 if x0 >= 0 else -1.0
        alpha = -phase * normx
        v = x.copy()
        v[0] -= alpha
        vnorm2 = np.real(np.vdot(v, v))
        if vnorm2 == 0.0:
            continue
        b = 2.0 / vnorm2
        w = np.conj(v) @ r[k:, k:]
        r[k:, k:] -= b * np.outer(v, w)
        r[k, k] = alpha
        r[k + 1 :, k] = 0.0
        v_store[k:, k] = v
        beta[k] = b
    return v_store, beta, r, piv
