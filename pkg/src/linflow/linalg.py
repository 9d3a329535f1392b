"""Dense matrix substrate: tolerances, rank/kernel, exponential, solve.

Matrices are plain NumPy arrays; ``float64`` arrays are "real field",
``complex128`` arrays are "complex field".  Every public operation
rejects NaN/Inf inputs with :class:`~linflow.errors.NonFiniteError`.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import NonFiniteError, ShapeError, SingularMatrixError


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy shared by every operation.

    rank_rel        relative pivot threshold for numerical rank
    eig_cluster_rel relative eigenvalue clustering / splitting radius
    residual_abs    absolute residual bound for verification checks
    """

    rank_rel: float = 1e-10
    eig_cluster_rel: float = 1e-8
    residual_abs: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.rank_rel < 1.0):
            raise ValueError("rank_rel must lie in (0, 1)")
        if not (0.0 < self.eig_cluster_rel < 1.0):
            raise ValueError("eig_cluster_rel must lie in (0, 1)")
        if not self.residual_abs > 0.0:
            raise ValueError("residual_abs must be positive")


DEFAULT_TOL = Tolerance()


def as_matrix(a, field=None):
    """Coerce ``a`` to a 2-d float64/complex128 array and validate finiteness.

    ``field`` forces "real" or "complex"; otherwise the dtype decides.
    """
    arr = np.asarray(a)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    elif arr.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of rank {arr.ndim}")
    want_complex = np.iscomplexobj(arr) if field is None else (field == "complex")
    if field == "real" and np.iscomplexobj(arr):
        if arr.size and np.max(np.abs(arr.imag)) != 0.0:
            raise ShapeError("matrix has nonzero imaginary parts but field=real")
        arr = arr.real
    arr = arr.astype(np.complex128 if want_complex else np.float64, copy=True)
    if arr.size and not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    return arr


def field_of(a):
    return "complex" if np.iscomplexobj(a) else "real"


def require_square(a):
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def rank(a, tol=DEFAULT_TOL):
    """Numerical rank: pivoted-QR pivots above ``rank_rel`` times the first.

    The 0x0 (and any empty) matrix has rank 0.
    """
    a = as_matrix(a)
    if a.size == 0:
        return 0
    _, _, r, _ = backend.cpqr_factor(a)
    return _rank_from_r(r, tol)


def _rank_from_r(r, tol, pivot_floor=0.0):
    """Pivot count of a pivoted-QR triangle.  ``pivot_floor`` raises the
    reference pivot, which lets power-chain callers treat a matrix whose
    entries are pure roundoff (relative to a unit-normalized scale) as
    zero instead of renormalizing noise into full rank."""
    k = min(r.shape)
    if k == 0:
        return 0
    d = np.abs(np.diagonal(r)[:k])
    ref = max(d[0], pivot_floor)
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(d > tol.rank_rel * ref))


def kernel_basis(a, tol=DEFAULT_TOL, pivot_floor=0.0):
    """Orthonormal basis of the numerical nullspace, as matrix columns.

    Always returns a matrix with ``a.shape[1] - rank(a)`` columns (possibly
    zero columns).
    """
    a = as_matrix(a)
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=a.dtype)
    if m == 0 or not a.any():
        return np.eye(n, dtype=a.dtype)
    _, _, r, piv = backend.cpqr_factor(a)
    rk = _rank_from_r(r, tol, pivot_floor)
    if rk == n:
        return np.zeros((n, 0), dtype=a.dtype)
    # columns of [-R11^{-1} R12; I] span ker(A . piv); undo the permutation
    w = _solve_triu(r[:rk, :rk], r[:rk, rk:n])
    block = np.vstack([-w, np.eye(n - rk, dtype=a.dtype)])
    nullb = np.zeros((n, n - rk), dtype=a.dtype)
    nullb[piv, :] = block
    return orthonormal_columns(nullb)


def _solve_triu(r, b):
    """Back substitution for an upper triangular system R X = B."""
    k = r.shape[0]
    x = np.array(b, copy=True)
    for i in range(k - 1, -1, -1):
        x[i, :] -= r[i, i + 1 :] @ x[i + 1 :, :]
        x[i, :] /= r[i, i]
    return x


def orthonormal_columns(b):
    """Orthonormalize the columns of ``b`` (assumed full column rank)."""
    if b.shape[1] == 0:
        return b
    q, _ = np.linalg.qr(b)
    return q


def solve(a, b, tol=DEFAULT_TOL):
    """Solve ``a x = b`` through the pivoted QR factorization.

    Raises :class:`SingularMatrixError` (carrying the detected rank) when
    ``a`` is numerically singular under ``tol``.
    """
    a = as_matrix(a)
    require_square(a)
    b_arr = as_matrix(b, field=field_of(a) if not np.iscomplexobj(b) else "complex")
    if b_arr.shape[0] != a.shape[0]:
        if b_arr.shape == (1, a.shape[0]):  # accept a flat vector
            b_arr = b_arr.T
        else:
            raise ShapeError(f"rhs shape {b_arr.shape} does not match {a.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros_like(b_arr)
    if np.iscomplexobj(b_arr) and not np.iscomplexobj(a):
        a = a.astype(np.complex128)
    v, beta, r, piv = backend.cpqr_factor(a)
    rk = _rank_from_r(r, tol)
    if rk < n:
        raise SingularMatrixError(rk, n)
    y = apply_q_adjoint(v, beta, b_arr)
    z = _solve_triu(r[:n, :n], y)
    x = np.zeros_like(z)
    x[piv, :] = z
    return x


def apply_q_adjoint(v, beta, b):
    """Apply Q^H from a ``cpqr_factor`` result to ``b``."""
    x = np.array(b, copy=True)
    for k in range(v.shape[1]):
        if beta[k] == 0.0:
            continue
        vk = v[k:, k]
        x[k:, :] -= beta[k] * np.outer(vk, np.conj(vk) @ x[k:, :])
    return x


# Pade approximant data for the scaling-and-squaring exponential
# (Higham 2005 order/theta schedule).
_PADE_B = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ),
    13: (
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ),
}
_PADE_THETA = (
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
)


def matexp(a, t=1.0):
    """Matrix exponential ``exp(t a)`` by scaling and squaring with Pade
    approximants of order 3/5/7/9/13."""
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=a.dtype)
    m = a * float(t)
    nrm = np.linalg.norm(m, 1)
    with np.errstate(over="ignore", invalid="ignore"):
        for order, theta in _PADE_THETA[:-1]:
            if nrm <= theta:
                return _pade(m, order)
        theta13 = _PADE_THETA[-1][1]
        squarings = max(0, int(np.ceil(np.log2(nrm / theta13)))) if nrm > theta13 else 0
        x = _pade(m / (2.0**squarings), 13)
        for _ in range(squarings):
            x = x @ x
    return x


def _pade(m, order):
    b = _PADE_B[order]
    n = m.shape[0]
    ident = np.eye(n, dtype=m.dtype)
    m2 = m @ m
    if order == 13:
        m4 = m2 @ m2
        m6 = m2 @ m4
        u = m @ (
            m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2)
            + b[7] * m6
            + b[5] * m4
            + b[3] * m2
            + b[1] * ident
        )
        v = (
            m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2)
            + b[6] * m6
            + b[4] * m4
            + b[2] * m2
            + b[0] * ident
        )
    else:
        powers = [ident, m2]
        while 2 * len(powers) < order + 1:
            powers.append(powers[-1] @ m2)
        u = np.zeros_like(m)
        v = np.zeros_like(m)
        for k, p in enumerate(powers):
            u = u + b[2 * k + 1] * p
            v = v + b[2 * k] * p
        u = m @ u
    return np.linalg.solve(v - u, v + u)


def frobenius(a):
    return float(np.linalg.norm(a)) if a.size else 0.0


def realify(a):
    """View an n-dimensional complex matrix as the 2n-dimensional real one
    [[Re a, -Im a], [Im a, Re a]] (real parts first in the basis order).
    Real input is returned unchanged (as a copy)."""
    a = as_matrix(a)
    if not np.iscomplexobj(a):
        return a.copy()
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])
