"""Numerical verification of what the other modules assert: residual
checks for conjugacy certificates, explicit core-membership witness
sequences for nilpotent and rotation blocks, and an empirical orbit
boundedness test.  Verification grids are fixed and deterministic.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, SingularMatrixError
from .linalg import DEFAULT_TOL, as_matrix, frobenius, matexp, rank, require_square
from .special import delta_matrix, diag_powers, nilpotent_block

_T_GRID = (-20.0, -5.0, -1.0, -0.1, 0.1, 1.0, 5.0, 20.0)


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of a deterministic residual check."""

    max_residual: float
    grid: str
    bound: float
    passed: bool


def verify_conjugacy(a, b, h, alpha, tol=DEFAULT_TOL):
    """Check the flow conjugacy h exp(t a) = exp(alpha t b) h on the fixed
    time grid; passes when the scaled residual stays below
    ``residual_abs * 100`` (exponentials amplify, so the bound is looser
    than for linear solves)."""
    a = as_matrix(a)
    b = as_matrix(b)
    h = as_matrix(h)
    require_square(a)
    require_square(b)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if h.shape != (b.shape[0], a.shape[0]):
        raise ShapeError(f"certificate shape {h.shape} does not map {a.shape} into {b.shape}")
    if h.shape[0] == h.shape[1] and h.shape[0] > 0:
        if rank(h, tol) < h.shape[0]:
            raise SingularMatrixError(rank(h, tol), h.shape[0])
    hnorm = frobenius(h)
    worst = 0.0
    for t in _T_GRID:
        lhs = h @ matexp(a, t)
        rhs = matexp(b, alpha * t) @ h
        worst = max(worst, frobenius(lhs - rhs) / (1.0 + hnorm))
    bound = tol.residual_abs * 100.0
    return ResidualReport(
        max_residual=worst,
        grid=f"t in {list(_T_GRID)}",
        bound=bound,
        passed=bool(worst <= bound),
    )


def _nilpotent_witness(m, v, t):
    """The explicit point x_t for the size-m nilpotent block, together
    with its orbit image e^{tJ} x_t, both evaluated through the power-
    diagonal / reciprocal-gamma block formulas.  The top half of the
    image cancels exactly by construction, so evaluating the analytic
    form (rather than multiplying by e^{tJ}, whose t^{m-1}-sized entries
    would drown the t^{-d-1}-sized answer in roundoff) is what keeps the
    result meaningful at large |t|."""
    d = m // 2
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape[0] != d:
        raise ShapeError(f"witness vector must have length {d} for block size {m}")
    if d == 0:  # m = 1: the zero-core is trivial
        return np.zeros(1), np.zeros(1)
    t = float(t)
    upper = m - d  # d+1 when m is odd, d when m is even
    dd_t = diag_powers(d, t)
    dd_inv = diag_powers(d, 1.0 / t)
    du_inv = diag_powers(upper, 1.0 / t)
    mix = np.linalg.solve(
        delta_matrix(upper, upper, float(d)), delta_matrix(upper, d, 0.0)
    )
    w = mix @ (dd_t @ v)
    tail = -(t**-d) * (du_inv @ w)
    x = np.concatenate([v, tail])
    if m % 2:  # image bottom: -t^-(d+1) D_d^-1 Delta[-1] (mix @ D_d v)
        img_bottom = -(t ** -(d + 1)) * (
            dd_inv @ (delta_matrix(d, upper, -1.0) @ w)
        )
    else:  # image bottom: -t^-d D_d^-1 Delta[0] (mix @ D_d v)
        img_bottom = -(t**-d) * (dd_inv @ (delta_matrix(d, d, 0.0) @ w))
    image = np.concatenate([np.zeros(upper), img_bottom])
    return x, image


def core_witness(m, v, t, frequency=0.0):
    """Witness pair (x_t, Phi_t x_t) for membership of [v; 0] in the
    zero-core of an irreducible block.

    frequency == 0: the nilpotent block of size m, v of length floor(m/2).
    frequency > 0: the rotation block of even real size m (two coupled
    nilpotent halves of size m/2), v holding one witness vector per half;
    the rotation factor is an isometry and does not affect the decay.
    As |t| grows, x_t converges to the padded v and the image to 0.
    """
    if m < 1:
        raise ValueError("block size must be >= 1")
    if t == 0:
        raise ValueError("t must be nonzero")
    if frequency < 0:
        raise ValueError("frequency must be >= 0")
    if frequency == 0.0:
        return _nilpotent_witness(m, v, t)
    if m % 2:
        raise ShapeError("a rotation block has even real size")
    mc = m // 2
    half = mc // 2
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape[0] != 2 * half:
        raise ShapeError(
            f"witness vector must have length {2 * half} for real size {m}"
        )
    x1, y1 = _nilpotent_witness(mc, v[:half], t)
    x2, y2 = _nilpotent_witness(mc, v[half:], t)
    c, s = np.cos(frequency * t), np.sin(frequency * t)
    x = np.concatenate([x1, x2])
    image = np.concatenate([c * y1 - s * y2, s * y1 + c * y2])
    return x, image


def orbit_bounded(a, x, horizon=1e3, samples=201):
    """Empirical boundedness proxy: true when every sampled point of the
    orbit through x on [-horizon, horizon] stays below 1e3 * max(1, |x|).
    A falsifiable check, not a proof; the margin is tight enough that a
    unit chain vector of a size-2 nilpotent block (linear growth t) is
    already flagged unbounded at the default horizon."""
    a = as_matrix(a)
    require_square(a)
    x = np.asarray(x, dtype=complex if np.iscomplexobj(a) else float).reshape(-1)
    if not np.all(np.isfinite(x)):
        return False
    bound = 1e3 * max(1.0, float(np.linalg.norm(x)))
    with np.errstate(over="ignore", invalid="ignore"):
        for t in np.linspace(-horizon, horizon, samples):
            y = matexp(a, t) @ x
            norm = float(np.linalg.norm(y)) if np.all(np.isfinite(y)) else np.inf
            if not norm <= bound:
                return False
    return True
