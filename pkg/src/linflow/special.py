"""Explicit special matrices and scalar functions used by the witness
constructions and the self-test surface: power diagonals D_m(w), the
nilpotent shift block J_m, the entire function 1/Gamma, and the
Toeplitz-type matrices of reciprocal gamma values whose 2x2 block
assembly reproduces exp(t J_m) for t != 0.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .linalg import matexp

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Lanczos g=7, n=9 coefficient set (double precision workhorse).
_LANCZOS_G = 7.0
_LANCZOS_C = (
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

_INT_SNAP = 1e-12


def diag_powers(m, omega):
    """Diagonal matrix diag(1, w, ..., w^(m-1))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _diag_powers_any(m, omega)


def _diag_powers_any(m, omega):
    dtype = np.complex128 if isinstance(omega, complex) else np.float64
    d = np.zeros((m, m), dtype=dtype)
    val = 1.0
    for i in range(m):
        d[i, i] = val
        val = val * omega
    return d


def nilpotent_block(m):
    """The m x m shift matrix with ones on the superdiagonal: J_m^m = 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    j = np.zeros((m, m))
    for i in range(m - 1):
        j[i, i + 1] = 1.0
    return j


def _sinpi(z):
    """sin(pi z) with argument reduction so zeros at integers are clean."""
    if isinstance(z, complex):
        x = z.real
        k = math.floor(x + 0.5)
        f = complex(x - k, z.imag)
        s = cmath.sin(math.pi * f)
        return -s if k % 2 else s
    k = math.floor(z + 0.5)
    f = z - k
    s = math.sin(math.pi * f)
    return -s if k % 2 else s


def _lanczos_gamma(z):
    """Gamma(z) for Re z > 0.5 (complex allowed)."""
    z = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    if isinstance(t, complex):
        return _SQRT_2PI * t ** (z + 0.5) * cmath.exp(-t) * x
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * x


def recip_gamma(z):
    """The entire function 1/Gamma(z).

    Exactly 0.0 at non-positive integers (detected within 1e-12); Lanczos
    approximation on Re z > 0.5 and the sine reflection elsewhere.
    Returns a float for real input and a complex otherwise.
    """
    is_complex = isinstance(z, complex)
    zr = z.real if is_complex else float(z)
    zi = z.imag if is_complex else 0.0
    nearest = round(zr)
    if nearest <= 0 and abs(zr - nearest) <= _INT_SNAP and abs(zi) <= _INT_SNAP:
        return 0.0j if is_complex else 0.0
    zz = complex(zr, zi) if is_complex else zr
    if zr >= 0.5:
        out = 1.0 / _lanczos_gamma(zz)
    else:
        # 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        out = _sinpi(zz) * _lanczos_gamma(1.0 - zz) / math.pi
    if is_complex:
        return complex(out)
    return float(out.real) if isinstance(out, complex) else float(out)


@dataclass(frozen=True)
class DeltaSpec:
    """Shape and parameter of a reciprocal-gamma Toeplitz matrix."""

    m: int
    n: int
    omega: complex

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")


def delta_matrix(m, n=None, omega=None):
    """Matrix with entry (r, c) = 1/Gamma(omega + c - r + 1), 1-based r, c.

    The first row runs 1/Gamma(omega+1) .. 1/Gamma(omega+n) and the first
    column descends 1/Gamma(omega+1), 1/Gamma(omega), ...  Accepts either
    a DeltaSpec or (m, n, omega).
    """
    if isinstance(m, DeltaSpec):
        spec = m
        m, n, omega = spec.m, spec.n, spec.omega
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    return _delta_any(m, n, omega)


def _delta_any(m, n, omega):
    is_complex = isinstance(omega, complex)
    out = np.zeros((m, n), dtype=np.complex128 if is_complex else np.float64)
    # constant along diagonals: compute one value per offset c - r
    for off in range(-(m - 1), n):
        val = recip_gamma(omega + off + 1)
        for r in range(max(0, -off), min(m, n - off)):
            out[r, r + off] = val
    return out


def exp_block_partition(m, j, t):
    """exp(t J_m) assembled from the 2x2 partition into power-diagonal and
    reciprocal-gamma Toeplitz factors; valid for 1 <= j <= m and t != 0."""
    if not 1 <= j <= m:
        raise ValueError("need 1 <= j <= m")
    if t == 0:
        raise ValueError("t must be nonzero")
    t = float(t)
    tinv = 1.0 / t
    dj = _diag_powers_any(j, t)
    dj_inv = _diag_powers_any(j, tinv)
    if j == m:
        return dj_inv @ _delta_any(m, m, 0.0) @ dj
    k = m - j
    dk = _diag_powers_any(k, t)
    dk_inv = _diag_powers_any(k, tinv)
    tl = dj_inv @ _delta_any(j, k, 0.0) @ dk
    tr = t**k * (dj_inv @ _delta_any(j, j, float(k)) @ dj)
    bl = t ** (-j) * (dk_inv @ _delta_any(k, k, float(-j)) @ dk)
    br = t ** (m - 2 * j) * (dk_inv @ _delta_any(k, j, float(m - 2 * j)) @ dj)
    return np.block([[tl, tr], [bl, br]])


def lower_bound_nu(m, t_points=121, sphere_points=200, seed=20240801):
    """Empirical positive floor nu^ for the decay of the nilpotent-block
    flow: minimum over a log-spaced time grid and a fixed unit-sphere
    sample of ||exp(t J_m) x|| * sqrt(1 + t^(2m-2)).

    This is a falsifiable grid estimate, not a proof.  For m = 1 the flow
    is the identity and the sharp constant 1 is returned directly.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return 1.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((sphere_points, m))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    jm = nilpotent_block(m)
    ts = np.logspace(-3, 3, t_points)
    best = 1.0  # value attained at t = 0
    for t in np.concatenate([-ts[::-1], ts]):
        e = matexp(jm, t)
        norms = np.linalg.norm(x @ e.T, axis=1)
        val = float(np.min(norms)) * math.sqrt(1.0 + t ** (2 * m - 2))
        if val < best:
            best = val
    return best
