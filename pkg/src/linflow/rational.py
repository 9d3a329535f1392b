"""Rational classes of the purely imaginary spectrum of bounded flows:
grouping of frequencies by rational dependence, minimal common periods,
and periodic-subspace dimensions.

A flow is bounded exactly when its spectrum is purely imaginary and
semisimple; both conditions are checked and violations raise
:class:`~linflow.errors.NotBoundedError`.  Rational dependence of two
frequencies is decided by the best rational approximation of their ratio
with bounded denominator (``qmax``), accepted when the residue is below
``eig_cluster_rel`` relative to the ratio.  Complex input is realified
first, which pairs each eigenvalue i*s with its mirror.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LinflowError, NotBoundedError
from .linalg import DEFAULT_TOL, as_matrix, realify, require_square
from .spectral import eigen_clusters

TWO_PI = 2.0 * math.pi
_LCM_LIMIT = 2**63


@dataclass(frozen=True)
class RationalClass:
    """One rational-dependence class of positive frequencies.

    ``ratios[i]`` is the reduced fraction (p, q) with
    members[i] ~= (p/q) * generator, and ``period`` is the least T > 0
    with T * s / (2 pi) integral for every member s.  Nearly-rational
    floating input is inherently ambiguous, so ``ratio_residuals[i]``
    reports the absolute margin |members[i]/generator - p/q| on which
    each membership decision rests.
    """

    members: tuple
    generator: float
    ratios: tuple
    period: float
    member_dims: tuple
    ratio_residuals: tuple = ()


@dataclass(frozen=True)
class RationalPartition:
    fixed_dim: int
    classes: tuple

    @property
    def class_count(self):
        return len(self.classes)


def best_rational(x, qmax):
    """Best rational approximation p/q of x >= 0 with 1 <= q <= qmax,
    via continued-fraction convergents and the final semiconvergent."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    h_prev, k_prev = 1, 0
    h, k = int(math.floor(x)), 1
    frac = x - math.floor(x)
    while frac > 0:
        rec = 1.0 / frac
        a = int(math.floor(rec))
        frac = rec - a
        h_next = a * h + h_prev
        k_next = a * k + k_prev
        if k_next > qmax:
            # bounded semiconvergent: largest t with t*k + k_prev <= qmax
            t = (qmax - k_prev) // k
            if t >= 1:
                hs, ks = t * h + h_prev, t * k + k_prev
                if abs(x - hs / ks) < abs(x - h / k):
                    return Fraction(hs, ks)
            return Fraction(h, k)
        h_prev, k_prev, h, k = h, k, h_next, k_next
        if a > 1e17:  # x is (numerically) rational; stop
            break
    return Fraction(h, k)


def _bounded_spectrum(a, tol, which):
    """Clusters of a bounded flow: raises NotBoundedError otherwise.
    Returns (fixed_dim, [(frequency, multiplicity)] for Im > 0)."""
    a = as_matrix(a)
    require_square(a)
    if np.iscomplexobj(a):
        a = realify(a)
    clusters = eigen_clusters(a, tol)
    fixed_dim = 0
    freqs = []
    for c in clusters:
        if c.value.real != 0:
            raise NotBoundedError(
                f"eigenvalue {c.value:.6g} has nonzero real part", which
            )
        if len(c.weyr) > 1:
            raise NotBoundedError(
                f"eigenvalue {c.value:.6g} is defective (Weyr {list(c.weyr)})",
                which,
            )
        if c.value.imag == 0:
            fixed_dim = c.alg_mult
        else:
            freqs.append((float(c.value.imag), c.alg_mult))
    return a.shape[0], fixed_dim, freqs


def rational_partition(a, tol=DEFAULT_TOL, qmax=64):
    """Group the positive frequencies of a bounded flow by rational
    dependence.  Classes are ordered by largest member, descending;
    members within a class ascending, with the smallest as generator."""
    n, fixed_dim, freqs = _bounded_spectrum(a, tol, "input")
    freqs.sort(key=lambda f: -f[0])
    groups = []  # (anchor, [(s, mult, Fraction s/anchor)])
    for s, mult in freqs:
        placed = False
        for anchor, items in groups:
            ratio = s / anchor  # <= 1 since frequencies come descending
            cand = best_rational(ratio, qmax)
            if cand > 0 and abs(ratio - float(cand)) <= tol.eig_cluster_rel * ratio:
                items.append((s, mult, cand))
                placed = True
                break
        if not placed:
            groups.append((s, [(s, mult, Fraction(1, 1))]))
    classes = []
    for anchor, items in groups:
        items.sort(key=lambda it: it[0])
        generator = items[0][0]
        base = items[0][2]  # generator / anchor, exact
        members, dims, ratios, residuals = [], [], [], []
        for s, mult, frac in items:
            rel = frac / base  # s / generator, exact rational arithmetic
            members.append(s)
            dims.append(mult)
            ratios.append((rel.numerator, rel.denominator))
            residuals.append(abs(s / generator - float(rel)))
        period = _period_from_ratios(generator, ratios)
        classes.append(
            RationalClass(
                members=tuple(members),
                generator=generator,
                ratios=tuple(ratios),
                period=period,
                member_dims=tuple(dims),
                ratio_residuals=tuple(residuals),
            )
        )
    classes.sort(key=lambda c: -c.members[-1])
    part = RationalPartition(fixed_dim=fixed_dim, classes=tuple(classes))
    covered = fixed_dim + 2 * sum(sum(c.member_dims) for c in classes)
    if covered != n:
        raise LinflowError(f"partition covers dimension {covered} != {n}")
    return part


def _period_from_ratios(generator, ratios):
    lcm = 1
    for _, q in ratios:
        lcm = math.lcm(lcm, q)
        if lcm > _LCM_LIMIT:
            raise LinflowError(
                f"common period overflows 2^63 (lcm of denominators > {_LCM_LIMIT})"
            )
    return TWO_PI * lcm / generator


def class_period(cls):
    """Minimal positive T with T*s/(2 pi) integral for every member s:
    exact integer lcm of the reduced ratio denominators."""
    return _period_from_ratios(cls.generator, cls.ratios)


def periodic_dim(a, t, tol=DEFAULT_TOL):
    """Dimension of the subspace of T-periodic points of a bounded flow:
    the fixed space plus every pair-eigenspace whose frequency s has
    t*s/(2 pi) integral."""
    if t <= 0:
        raise ValueError("period must be positive")
    _, fixed_dim, freqs = _bounded_spectrum(a, tol, "input")
    dim = fixed_dim
    for s, mult in freqs:
        x = t * s / TWO_PI
        if abs(x - round(x)) <= tol.eig_cluster_rel * max(1.0, abs(x)):
            dim += 2 * mult
    return dim
