"""Eigenvalue clustering, Weyr/Jordan structure, Jordan chain bases, and
the stable/central/unstable decomposition.

Conventions
-----------
* Eigenvalues are clustered by single linkage with radius
  ``eig_cluster_rel * ||a||_F``; each cluster's representative is the
  cluster mean, which for a defective eigenvalue cancels the O(eps^(1/m))
  scatter ring back to an O(eps) estimate.
* Real-field structures store one representative per conjugate pair, the
  one with positive imaginary part.  A size-m entry at a non-real
  eigenvalue occupies real dimension 2m.
* Representatives are snapped onto the axes at the clustering radius:
  |Re| within the radius becomes exactly 0 (and likewise |Im|), so the
  central spectrum is exactly the set of representatives with zero real
  part.
* Jordan bases order their columns cluster by cluster (clusters sorted by
  decreasing |eigenvalue|, then decreasing real and imaginary part),
  blocks within a cluster by decreasing size, and each chain bottom-up
  from the eigenvector.  For a conjugate pair the 2m real columns of a
  block are the real parts of the complex chain followed by the
  imaginary parts.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import backend
from .errors import FieldError, IllConditionedBasisError, InternalConsistencyError
from .linalg import (
    DEFAULT_TOL,
    _rank_from_r,
    as_matrix,
    field_of,
    frobenius,
    kernel_basis,
    orthonormal_columns,
    require_square,
)


@dataclass(frozen=True)
class EigCluster:
    """One clustered eigenvalue: representative, multiplicity, and the
    Weyr sequence w_k = dim ker(A - v)^k - dim ker(A - v)^(k-1).

    ``rank_rel`` records the relative rank threshold actually used for
    the Weyr computation: normally the global ``rank_rel``, but widened
    to the clustering radius when the user merged genuinely distinct
    eigenvalues into this cluster (kernel computations downstream must
    reuse it to stay consistent)."""

    value: complex
    alg_mult: int
    weyr: tuple
    rank_rel: float = None

    def block_count(self, size):
        w = self.weyr
        wk = w[size - 1] if size - 1 < len(w) else 0
        wk1 = w[size] if size < len(w) else 0
        return wk - wk1

    @property
    def sizes(self):
        """Block sizes at this eigenvalue, descending."""
        out = []
        for size in range(len(self.weyr), 0, -1):
            out.extend([size] * self.block_count(size))
        return tuple(out)


@dataclass(frozen=True)
class JordanStructure:
    """Complete similarity invariant: eigenvalues with block-size multisets.

    ``blocks`` is a tuple of (eigenvalue, sizes) pairs in canonical order;
    over the real field non-real eigenvalues appear once per conjugate
    pair, with positive imaginary part.
    """

    field: str
    dim: int
    blocks: tuple

    def scaled(self, alpha):
        return JordanStructure(
            field=self.field,
            dim=self.dim,
            blocks=_canonical_blocks(
                [(alpha * lam, sizes) for lam, sizes in self.blocks]
            ),
        )

    @property
    def is_nilpotent(self):
        return all(lam == 0 for lam, _ in self.blocks)

    def real_dim_of(self, lam, sizes):
        mult = 2 if (self.field == "real" and lam.imag != 0) else 1
        return mult * sum(sizes)


@dataclass(frozen=True)
class ScuSplit:
    """Stable / central / unstable invariant decomposition."""

    dim_s: int
    dim_c: int
    dim_u: int
    basis_s: np.ndarray
    basis_c: np.ndarray
    basis_u: np.ndarray
    proj_s: np.ndarray
    proj_c: np.ndarray
    proj_u: np.ndarray


def _cluster_key(value):
    return (-abs(value), -value.real, -value.imag)


def _canonical_blocks(pairs):
    return tuple(
        (lam, tuple(sorted(sizes, reverse=True)))
        for lam, sizes in sorted(pairs, key=lambda p: _cluster_key(p[0]))
    )


def _balance_inplace(a):
    """Parlett-Reinsch diagonal scaling (radix 2, no permutations)."""
    n = a.shape[0]
    while True:
        converged = True
        for i in range(n):
            # sum off-diagonal moduli directly: subtracting the diagonal
            # from the full sum can go negative by an ulp and stall the
            # scaling loop below
            row = np.abs(a[i, :])
            col = np.abs(a[:, i])
            r = float(np.sum(row[:i]) + np.sum(row[i + 1 :]))
            c = float(np.sum(col[:i]) + np.sum(col[i + 1 :]))
            if r == 0.0 or c == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / 2.0:
                f *= 2.0
                c *= 4.0
            while c >= r * 2.0:
                f /= 2.0
                c /= 4.0
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] *= 1.0 / f
                a[:, i] *= f
        if converged:
            return a


def eigvals(a):
    """Raw eigenvalues through balancing, Hessenberg reduction and the
    in-module QR iteration.  Real input yields exact conjugate pairs."""
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    if n == 1:
        return a.astype(np.complex128).ravel()
    h = a.copy()
    _balance_inplace(h)
    backend.hessenberg_inplace(h)
    if np.iscomplexobj(h):
        vals, _ = backend.complex_hess_eigvals(h)
    else:
        vals, _ = backend.real_hess_eigvals(h)
    return vals


def _single_linkage(values, radius):
    """Cluster complex values; returns a list of index lists."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
            else:
                continue
            if ri != rj:
                parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _snap(value, radius):
    re, im = value.real, value.imag
    if abs(re) <= radius:
        re = 0.0
    if abs(im) <= radius:
        im = 0.0
    return complex(re, im)


def _power_chain(a, value):
    """Unit-normalized shifted matrix for Weyr/kernel power tests: powers
    of the result have Frobenius norm <= 1, so pivots below ``rank_rel``
    in absolute terms are roundoff, not structure."""
    n = a.shape[0]
    work = a.astype(np.complex128) if value.imag != 0 else a
    m = work - value * np.eye(n, dtype=work.dtype)
    nrm = frobenius(m)
    return m / nrm if nrm > 0 else m


def _weyr_from_ranks(a, value, alg_mult, tol):
    """Weyr sequence at ``value`` from ranks of powers of (a - value I)."""
    n = a.shape[0]
    m = _power_chain(a, value)
    weyr = []
    total = 0
    power = None
    for _ in range(alg_mult):
        power = m if power is None else power @ m
        _, _, rfac, _ = backend.cpqr_factor(power)
        nullity = n - _rank_from_r(rfac, tol, pivot_floor=1.0)
        w = nullity - total
        w = min(w, alg_mult - total)  # other clusters must not leak in
        if w <= 0:
            break
        weyr.append(w)
        total += w
        if total == alg_mult:
            break
    if total != alg_mult:
        raise InternalConsistencyError(
            f"rank tests recovered multiplicity {total} != {alg_mult} "
            f"at eigenvalue {value:.6g}"
        )
    if any(weyr[i] < weyr[i + 1] for i in range(len(weyr) - 1)):
        raise InternalConsistencyError(
            f"Weyr sequence {weyr} not non-increasing at eigenvalue {value:.6g}"
        )
    return tuple(weyr)


def _cluster_weyr(a, value, alg_mult, tol, radius):
    """Weyr sequence with the strict rank floor, falling back to a
    radius-coupled threshold when the cluster merges eigenvalues that are
    farther apart than the rank tolerance can resolve (a deliberately
    widened clustering radius).  Returns (weyr, rank_rel_used)."""
    try:
        return _weyr_from_ranks(a, value, alg_mult, tol), tol.rank_rel
    except InternalConsistencyError:
        n = a.shape[0]
        shifted_norm = frobenius(a - value * np.eye(n, dtype=np.complex128))
        coupled = min(0.25, 2.0 * radius / max(shifted_norm, radius, 1e-300))
        if coupled <= tol.rank_rel:
            raise
        wide = replace(tol, rank_rel=coupled)
        weyr = _weyr_from_ranks(a, value, alg_mult, wide)
        return weyr, coupled


def eigen_clusters(a, tol=DEFAULT_TOL):
    """Clustered spectrum of a square matrix.

    Returns EigCluster entries sorted by decreasing |value| (ties by
    decreasing real, then imaginary part).  Over the real field each
    conjugate pair appears once, with Im > 0.
    """
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    if n == 0:
        return []
    real_field = not np.iscomplexobj(a)
    vals = eigvals(a)
    radius = tol.eig_cluster_rel * frobenius(a)
    groups = _single_linkage(vals, radius)
    clusters = []
    used_conjugate = set()
    for gi, idx in enumerate(groups):
        if gi in used_conjugate:
            continue
        members = vals[idx]
        mean = complex(np.mean(members))
        if real_field:
            conj_closed = abs(mean.imag) * len(idx) <= radius + 1e-30 or _is_self_conjugate(
                members, radius
            )
            if conj_closed:
                rep = _snap(complex(mean.real, 0.0), radius)
                clusters.append(EigCluster(rep, len(idx), ()))
                continue
            if mean.imag < 0:
                continue  # the Im > 0 mirror handles this pair
            # locate and mark the conjugate group
            for gj, jdx in enumerate(groups):
                if gj == gi or gj in used_conjugate:
                    continue
                if abs(complex(np.mean(vals[jdx])) - mean.conjugate()) <= max(
                    radius, 1e3 * np.finfo(float).eps * (1 + abs(mean))
                ):
                    used_conjugate.add(gj)
                    break
            else:
                raise InternalConsistencyError(
                    f"no conjugate partner found for cluster at {mean:.6g}"
                )
            rep = _snap(mean, radius)
            if rep.imag == 0:  # snapping collapsed the pair onto the axis
                rep = complex(rep.real, mean.imag)
            clusters.append(EigCluster(rep, len(idx), ()))
        else:
            clusters.append(EigCluster(_snap(mean, radius), len(idx), ()))
    # recompute Weyr sequences from the snapped representatives
    out = []
    for cl in clusters:
        weyr, rank_rel = _cluster_weyr(a, cl.value, cl.alg_mult, tol, radius)
        out.append(EigCluster(cl.value, cl.alg_mult, weyr, rank_rel))
    out.sort(key=lambda c: _cluster_key(c.value))
    covered = sum(
        c.alg_mult * (2 if real_field and c.value.imag != 0 else 1) for c in out
    )
    if covered != n:
        raise InternalConsistencyError(
            f"clusters cover multiplicity {covered} != dimension {n}"
        )
    return out


def _is_self_conjugate(members, radius):
    pool = list(members)
    tol_pair = max(radius, 1e-12 * (1.0 + max(abs(m) for m in pool)))
    while pool:
        z = pool.pop()
        if abs(z.imag) <= tol_pair:
            continue
        match = None
        for i, w in enumerate(pool):
            if abs(w - z.conjugate()) <= tol_pair:
                match = i
                break
        if match is None:
            return False
        pool.pop(match)
    return True


def jordan_structure(a, tol=DEFAULT_TOL):
    """Block-size multisets per clustered eigenvalue (Weyr differencing)."""
    a = as_matrix(a)
    require_square(a)
    clusters = eigen_clusters(a, tol)
    blocks = [(c.value, c.sizes) for c in clusters]
    st = JordanStructure(field=field_of(a), dim=a.shape[0], blocks=_canonical_blocks(blocks))
    total = sum(st.real_dim_of(lam, sizes) for lam, sizes in st.blocks)
    if total != a.shape[0]:
        raise InternalConsistencyError(
            f"block sizes account for dimension {total} != {a.shape[0]}"
        )
    return st


def jordan_layout(structure):
    """Column layout of the Jordan basis for ``structure``: a list of
    (eigenvalue, size, start, stop) in basis order."""
    layout = []
    col = 0
    for lam, sizes in structure.blocks:
        width_mult = 2 if (structure.field == "real" and lam.imag != 0) else 1
        for size in sizes:
            width = width_mult * size
            layout.append((lam, size, col, col + width))
            col += width
    return layout


def build_jordan_matrix(structure):
    """The (real or complex) Jordan-form matrix in the canonical layout."""
    n = structure.dim
    dtype = np.complex128 if structure.field == "complex" else np.float64
    j = np.zeros((n, n), dtype=dtype)
    for lam, size, start, stop in jordan_layout(structure):
        m = size
        if structure.field == "real" and lam.imag != 0:
            blk = np.zeros((2 * m, 2 * m))
            for i in range(m):
                blk[i, i] = lam.real
                blk[m + i, m + i] = lam.real
                blk[i, m + i] = -lam.imag
                blk[m + i, i] = lam.imag
                if i + 1 < m:
                    blk[i, i + 1] = 1.0
                    blk[m + i, m + i + 1] = 1.0
            j[start:stop, start:stop] = blk
        else:
            lamc = lam if structure.field == "complex" else lam.real
            for i in range(m):
                j[start + i, start + i] = lamc
                if i + 1 < m:
                    j[start + i, start + i + 1] = 1.0
    return j


def _chains_for_cluster(a, cluster, tol):
    """Jordan chains at one cluster; returns a list of chains, each a list
    of vectors bottom-up (chain[0] is the eigenvector), longest first."""
    n = a.shape[0]
    value = cluster.value
    weyr = cluster.weyr
    p = len(weyr)
    complex_arith = np.iscomplexobj(a) or value.imag != 0
    work = a.astype(np.complex128) if complex_arith else a
    m = work - value * np.eye(n, dtype=work.dtype)  # descent uses this, unscaled
    m_unit = _power_chain(a, value)
    # kernels of successive powers, checked against the Weyr sequence;
    # reuse the rank threshold the Weyr computation settled on
    kernel_tol = tol
    if cluster.rank_rel is not None and cluster.rank_rel != tol.rank_rel:
        kernel_tol = replace(tol, rank_rel=cluster.rank_rel)
    kernels = []
    power = np.eye(n, dtype=m_unit.dtype)
    for k in range(1, p + 1):
        power = power @ m_unit
        kb = kernel_basis(power, kernel_tol, pivot_floor=1.0)
        expected = sum(weyr[:k])
        if kb.shape[1] != expected:
            raise InternalConsistencyError(
                f"kernel of power {k} at {value:.6g} has dimension "
                f"{kb.shape[1]}, Weyr predicts {expected}"
            )
        kernels.append(kb)
    chains = []  # built top-down; chains[i] = [v_top, ..., v_current]
    for k in range(p, 0, -1):
        for ch in chains:
            ch.append(m @ ch[-1])
        tops_needed = weyr[k - 1] - (weyr[k] if k < p else 0)
        if tops_needed > 0:
            pool_cols = [kernels[k - 2]] if k >= 2 else []
            pool_cols += [ch[-1].reshape(-1, 1) for ch in chains]
            kk = kernels[k - 1]
            if pool_cols:
                pool = orthonormal_columns(np.hstack(pool_cols))
                resid = kk - pool @ (np.conj(pool.T) @ kk)
            else:
                resid = kk.copy()
            _, _, rfac, piv = backend.cpqr_factor(resid)
            for t in range(tops_needed):
                v = resid[:, piv[t]]
                nv = np.linalg.norm(v)
                if nv == 0.0:
                    raise InternalConsistencyError(
                        f"degenerate chain top at eigenvalue {value:.6g}"
                    )
                chains.append([v / nv])
    chains.sort(key=len, reverse=True)
    return [list(reversed(ch)) for ch in chains]


def _jordan_basis_any(a, tol, with_policy=False):
    """Basis columns and structure for real or complex input.

    With ``with_policy`` also reports whether any cluster fell back to a
    radius-coupled rank threshold (a user-merged cluster), which widens
    the attainable basis residual by the clustering radius.
    """
    clusters = eigen_clusters(a, tol)
    st = JordanStructure(
        field=field_of(a),
        dim=a.shape[0],
        blocks=_canonical_blocks([(c.value, c.sizes) for c in clusters]),
    )
    by_value = {c.value: c for c in clusters}
    widened = any(
        c.rank_rel is not None and c.rank_rel != tol.rank_rel for c in clusters
    )
    real_field = st.field == "real"
    cols = []
    for lam, sizes in st.blocks:
        chains = _chains_for_cluster(a, by_value[lam], tol)
        if len(chains) != len(sizes) or [len(c) for c in chains] != list(sizes):
            raise InternalConsistencyError(
                f"chain lengths {[len(c) for c in chains]} != sizes {list(sizes)}"
            )
        for ch in chains:
            if real_field and lam.imag != 0:
                # with A(u+iv) = (a+ib)(u+iv) + ..., the pair (u, -v)
                # realizes the [[aI+J, -bI], [bI, aI+J]] block layout
                cols.extend([np.real(v) for v in ch])
                cols.extend([-np.imag(v) for v in ch])
            else:
                cols.extend(ch)
    if not cols:
        p = np.zeros((0, 0), dtype=a.dtype)
    else:
        p = np.column_stack(cols)
        if real_field:
            p = np.real(p)
    if with_policy:
        return p, st, widened
    return p, st


def real_jordan_basis(a, tol=DEFAULT_TOL):
    """Invertible P and structure with P^{-1} a P in real Jordan form.

    Raises IllConditionedBasisError when the chain construction produces a
    basis whose residual exceeds ``residual_abs * ||a|| * cond(P)``.
    """
    a = as_matrix(a)
    require_square(a)
    if np.iscomplexobj(a):
        raise FieldError("real_jordan_basis expects a real-field matrix")
    p, st, widened = _jordan_basis_any(a, tol, with_policy=True)
    _check_jordan_residual(a, p, st, tol, widened)
    return p, st


def _check_jordan_residual(a, p, st, tol, widened=False):
    if a.shape[0] == 0:
        return
    jform = build_jordan_matrix(st)
    resid = frobenius(a @ p - p @ jform)
    cond = np.linalg.cond(p) if p.size else 1.0
    slack = tol.residual_abs
    if widened:
        # a merged cluster's representative sits up to the clustering
        # radius away from the eigenvalues it stands for
        slack += 2.0 * tol.eig_cluster_rel
    bound = slack * max(frobenius(a), 1.0) * max(cond, 1.0)
    if not np.isfinite(cond) or resid > bound:
        raise IllConditionedBasisError(
            cond, f"Jordan basis residual {resid:.3e} exceeds bound {bound:.3e}"
        )


def scu_split(a, tol=DEFAULT_TOL):
    """Split into stable (Re < 0), central (Re = 0) and unstable (Re > 0)
    generalized eigenspace sums, with bases and commuting projections.

    The sign test applies to snapped cluster representatives, so the
    effective threshold is ``eig_cluster_rel * ||a||_F``.
    """
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    if n == 0:
        e = np.zeros((0, 0), dtype=a.dtype)
        return ScuSplit(0, 0, 0, e, e, e, e, e, e)
    p, st, widened = _jordan_basis_any(a, tol, with_policy=True)
    _check_jordan_residual(a, p, st, tol, widened)
    masks = {"s": np.zeros(n, bool), "c": np.zeros(n, bool), "u": np.zeros(n, bool)}
    for lam, _, start, stop in jordan_layout(st):
        key = "c" if lam.real == 0 else ("s" if lam.real < 0 else "u")
        masks[key][start:stop] = True
    pinv = np.linalg.inv(p)
    parts = {}
    for key, mask in masks.items():
        basis = orthonormal_columns(p[:, mask]) if mask.any() else np.zeros(
            (n, 0), dtype=a.dtype
        )
        proj = (p * mask) @ pinv
        parts[key] = (int(mask.sum()), basis, proj)
    return ScuSplit(
        dim_s=parts["s"][0],
        dim_c=parts["c"][0],
        dim_u=parts["u"][0],
        basis_s=parts["s"][1],
        basis_c=parts["c"][1],
        basis_u=parts["u"][1],
        proj_s=parts["s"][2],
        proj_c=parts["c"][2],
        proj_u=parts["u"][2],
    )
