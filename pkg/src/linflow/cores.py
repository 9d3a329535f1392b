"""Core and zero-core subspaces, the iterated-core lattice, the bounded
subspace, and the dimension profiles that encode the central Jordan
structure.

Cores are computed structurally from the Jordan basis: a block at an
eigenvalue off the imaginary axis contributes nothing, a nilpotent block
of size m contributes its first ceil(m/2) chain vectors (floor for the
zero-core), and a conjugate-pair block of real size 2m contributes the
leading ceil(m/2) chain-vector pairs (floor for the zero-core).

The iterated core follows the binary digits of its index n (ascending):
digit 0 restricts to the core of the current flow, digit 1 to the
zero-core, and trailing zeros are iterated to stabilization.  Complex
input is realified before any core computation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    frobenius,
    orthonormal_columns,
    realify,
    require_square,
)
from .spectral import _jordan_basis_any, jordan_layout, jordan_structure

_ZERO_FLOOR = 1e3 * float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Subspace:
    """A subspace given by an orthonormal column basis."""

    basis: np.ndarray
    ambient_dim: int

    @property
    def dim(self):
        return self.basis.shape[1]


@dataclass(frozen=True)
class BinaryIndex:
    """A non-negative integer with its base-2 digits in ascending order."""

    n: int
    digits: tuple = field(init=False, default=())

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("index must be non-negative")
        digits = []
        k = self.n
        while k:
            digits.append(k & 1)
            k >>= 1
        object.__setattr__(self, "digits", tuple(digits))


@dataclass(frozen=True)
class CoreProfile:
    """Iterated-core dimensions c_n(s) per central frequency s, and the
    block counts d_n(s) = c_{n-1}(s) - c_n(s)."""

    ambient_dim: int
    entries: dict
    block_counts: dict

    def c(self, n, s):
        return self.entries.get((n, float(s)), 0)

    def d(self, n, s):
        return self.block_counts.get((n, float(s)), 0)

    @property
    def frequencies(self):
        return sorted({s for (_, s) in self.entries})


def _prep(a):
    a = as_matrix(a)
    require_square(a)
    return realify(a) if np.iscomplexobj(a) else a


def _select_core_columns(structure, rounding):
    """Column index sets of the Jordan basis belonging to the core
    (rounding=ceil) or zero-core (rounding=floor)."""
    take = []
    for lam, size, start, stop in jordan_layout(structure):
        if lam.real != 0:
            continue
        if lam.imag == 0:
            c = rounding(size / 2)
            take.extend(range(start, start + c))
        else:
            c = rounding(size / 2)
            take.extend(range(start, start + c))
            take.extend(range(start + size, start + size + c))
    return take


def _structural_subspace(a, tol, rounding):
    p, st = _jordan_basis_any(a, tol)
    cols = _select_core_columns(st, rounding)
    n = a.shape[0]
    if not cols:
        return Subspace(np.zeros((n, 0)), n)
    return Subspace(orthonormal_columns(p[:, cols]), n)


def core(a, tol=DEFAULT_TOL):
    """The core subspace: limit points of orbits staying bounded in both
    time directions, computed structurally from the Jordan basis."""
    return _structural_subspace(_prep(a), tol, lambda x: math.ceil(x))


def zero_core(a, tol=DEFAULT_TOL):
    """The zero-core: like :func:`core` but for orbits convergent to 0,
    with floor instead of ceiling in every block count."""
    return _structural_subspace(_prep(a), tol, lambda x: math.floor(x))


def bounded_subspace(a, tol=DEFAULT_TOL):
    """Span of the genuine eigenvectors (chain bottoms) of the purely
    imaginary spectrum: the union of all bounded orbits."""
    a = _prep(a)
    p, st = _jordan_basis_any(a, tol)
    cols = []
    for lam, size, start, stop in jordan_layout(st):
        if lam.real != 0:
            continue
        cols.append(start)
        if lam.imag != 0:
            cols.append(start + size)
    n = a.shape[0]
    if not cols:
        return Subspace(np.zeros((n, 0)), n)
    return Subspace(orthonormal_columns(p[:, cols]), n)


def _closed_form_dim(structure, n):
    dim = 0
    for lam, sizes in structure.blocks:
        if lam.real != 0:
            continue
        for m in sizes:
            if lam.imag == 0:
                dim += 1 if m > n else 0
            else:
                dim += 2 if 2 * m > 2 * n else 0
    return dim


def iterated_core(a, n, tol=DEFAULT_TOL):
    """Nested subspace obtained by alternating core and zero-core
    restrictions along the base-2 digits of n (ascending), iterated to
    stabilization.

    Computed both by the recursive restriction and by the per-block
    closed form; a disagreement raises InternalConsistencyError.
    """
    a = _prep(a)
    idx = BinaryIndex(int(n))
    ambient = a.shape[0]
    scale = frobenius(a)
    basis = np.eye(ambient)
    digits = list(idx.digits) if idx.digits else [0]
    step = 0
    max_steps = ambient + len(digits) + 2
    while True:
        digit = digits[step] if step < len(digits) else 0
        prev_dim = basis.shape[1]
        if prev_dim == 0:
            break
        m = basis.T @ a @ basis
        if frobenius(m) <= _ZERO_FLOOR * scale * ambient:
            # numerically the zero generator: core is everything, the
            # zero-core is trivial
            w = np.eye(prev_dim) if digit == 0 else np.zeros((prev_dim, 0))
        else:
            sub = core(m, tol) if digit == 0 else zero_core(m, tol)
            w = sub.basis
        basis = basis @ w
        step += 1
        if step >= len(digits) and (basis.shape[1] == prev_dim or basis.shape[1] == 0):
            break
        if step > max_steps:
            raise InternalConsistencyError(
                f"iterated core did not stabilize within {max_steps} steps"
            )
    expected = _closed_form_dim(jordan_structure(a, tol), idx.n)
    if basis.shape[1] != expected:
        raise InternalConsistencyError(
            f"iterated core at index {idx.n}: recursive dimension "
            f"{basis.shape[1]} != closed form {expected}"
        )
    return Subspace(basis, ambient)


def core_profile(a, tol=DEFAULT_TOL):
    """Dimensions c_n(s) of the central slices of the iterated cores, for
    every clustered central frequency s and 0 <= n <= ambient dimension,
    with the derived block counts d_n(s)."""
    a = _prep(a)
    st = jordan_structure(a, tol)
    ambient = a.shape[0]
    freq_sizes = {}
    for lam, sizes in st.blocks:
        if lam.real != 0:
            continue
        freq_sizes.setdefault(float(lam.imag), []).extend(sizes)
    entries = {}
    counts = {}
    for s, sizes in freq_sizes.items():
        mult = 1 if s == 0.0 else 2
        for n in range(ambient + 1):
            entries[(n, s)] = mult * sum(1 for m in sizes if m > n)
        for n in range(1, ambient + 1):
            counts[(n, s)] = entries[(n - 1, s)] - entries[(n, s)]
    return CoreProfile(ambient_dim=ambient, entries=entries, block_counts=counts)
